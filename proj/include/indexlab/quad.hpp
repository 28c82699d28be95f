#pragma once

#include <complex>
#include <functional>

#include "indexlab/errors.hpp"

namespace indexlab::quad {

using cplx = std::complex<double>;

// Tolerance/truncation/refinement budget governing every integral engine.
// Success requires the estimated tail < abs_tol/2 and successive refinements
// (or successive improper-stage truncations) within max(abs_tol, rel_tol*|v|).
struct QuadratureControl {
    double abs_tol = 1e-11;
    double rel_tol = 1e-10;
    double initial_truncation = 20.0;  // contour half-height / semi-axis cut
    double truncation_growth = 1.5;    // in (1, 4]
    int max_truncation_steps = 12;
    int max_refinements = 10;
    // Half-height cap of the smooth-taper stage for conditionally convergent
    // line integrals (the tapered window ends at 2*improper_cap).
    double improper_cap = 220.0;

    void validate() const; // throws std::invalid_argument
};

struct VerticalLine {
    double abscissa = 0.5;      // the constant real part
    double pole_clearance = 1.0; // min distance to the nearest integrand pole
};

/// Int_0^inf f(t) dt for integrands with integrable power behavior at 0 and
/// (stretched-)exponential decay at infinity.  Double-exponential transform.
cplx integrate_semi_axis(const std::function<cplx(double)>& integrand,
                         const QuadratureControl& control = {});

/// (1/2 pi i) Int over Re s = line.abscissa of integrand(s) ds, with adaptive
/// symmetric truncation and a smooth-tapered improper stage for slowly
/// decaying (conditionally convergent) integrands.
cplx integrate_vertical_line(const std::function<cplx(cplx)>& integrand,
                             const VerticalLine& line,
                             const QuadratureControl& control = {});

/// Int_{-inf}^{inf} of an even integrand, computed as 2 Int_0^T with the same
/// truncation contract.  Evenness is spot-checked at three sample points.
cplx integrate_symmetric_real_line(const std::function<cplx(double)>& integrand,
                                   const QuadratureControl& control = {});

} // namespace indexlab::quad
