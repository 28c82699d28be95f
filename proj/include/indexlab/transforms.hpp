#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "indexlab/kernels.hpp"
#include "indexlab/mellin.hpp"

namespace indexlab::transforms {

using cplx = std::complex<double>;
using kernels::TransformFamily;
using mellin::MellinImage;

// A transform image (Ff)(z) as a callable on the vertical line Re z = gamma.
// For the polynomial families the callable supplies the reflected forward
// values the printed inversion kernels pair with (see forward_line).
struct LineFunction {
    std::function<cplx(cplx)> values;
    double gamma = 0.0;
    std::string provenance;
    double source_abscissa = 0.5; // c0 of the f this line came from
};

struct RoundTripPoint {
    double x = 0.0;
    double rel_error = 0.0;
};

struct RoundTripReport {
    std::vector<double> grid;
    std::vector<cplx> reconstructed;
    std::vector<cplx> reference;
    double max_rel_error = 0.0;
    std::vector<RoundTripPoint> per_point;
    std::string tail_diagnostics;
};

/// (Ff)(z) by semi-axis quadrature of kernel(z, .) x f(.).
cplx forward_direct(const TransformFamily& family, const MellinImage& f, cplx z,
                    const quad::QuadratureControl& control = {});

/// (Ff)(z) by the family's Mellin-Barnes representation on the image's line
/// (gamma-product representand, plus the boundary residue term for the
/// polynomial families when Re z < 1 - c0).
cplx forward_barnes(const TransformFamily& family, const MellinImage& f, cplx z,
                    const quad::QuadratureControl& control = {});

/// Memoizing LineFunction on Re z = gamma, ready to hand to invert():
/// plain forward_barnes values for TruncatedMellin/ExpKL/PowerExp, reflected
/// values Ff(n - z) resp. Ff(2n - z) for OnePlusT/OnePlusT2 (the operator the
/// printed inversion kernels invert).  Thread-safe to call concurrently.
LineFunction forward_line(const TransformFamily& family, const MellinImage& f,
                          double gamma,
                          const quad::QuadratureControl& control = {});

/// f(x) = (1/2 pi i) Int inverse_kernel x (Ff) dz over Re z = Ff.gamma
/// (times e^{ax} for TruncatedMellin).  StripError when gamma leaves the
/// family's strip; SlowDecayError when the integrability probe fails.
cplx invert(const TransformFamily& family, const LineFunction& Ff, double x,
            const quad::QuadratureControl& control = {});

/// Truncated quadrature of the family's operator-norm bound integral.
double operator_norm_bound(const TransformFamily& family, double c0,
                           double gamma,
                           const quad::QuadratureControl& control = {});

/// Modified Kontorovich-Lebedev forward Int_0^inf e^{-x/2} K_{i tau}(x/2) f(x) dx,
/// computed both by x-quadrature and by its gamma-quotient contour
/// representation; the paths must agree to 1e-8.
cplx mkl_forward(const MellinImage& f, double tau,
                 const quad::QuadratureControl& control = {});

/// Auxiliary h(y) = (1/2 pi i) Int f*(s)/Gamma(3/2 - s) y^{-s} ds.
cplx mkl_h(const MellinImage& f, double y,
           const quad::QuadratureControl& control = {});

/// Index expansion reconstructing f(x) from its MKL transform:
/// (e^{x/2} / pi^2 x) Int tau sinh(pi tau) K_{i tau}(x/2) (Ff)(tau) dtau.
cplx mkl_expand(const MellinImage& f, double x,
                const quad::QuadratureControl& control = {});

/// Index integral Int tau sinh(pi tau) K_{i tau}(x/2) K_{2 i tau}(2 sqrt y) dtau
/// against its closed form (1/2) sqrt(pi^3 y / x) e^{-x/2 - y/x}.
/// Returns (lhs by quadrature, rhs closed).
std::pair<cplx, cplx> index_identity(double x, double y,
                                     const quad::QuadratureControl& control = {});

/// Forward + invert over a grid, with per-point relative errors against the
/// catalog closed form.  Grid points run concurrently (INDEXLAB_THREADS caps).
RoundTripReport round_trip(const TransformFamily& family,
                           const mellin::CatalogEntry& entry, double gamma,
                           const std::vector<double>& grid,
                           const quad::QuadratureControl& control = {});

/// Thread cap honoring INDEXLAB_THREADS (>= 1).
unsigned thread_budget();

} // namespace indexlab::transforms
