#pragma once

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "indexlab/quad.hpp"

namespace indexlab::mellin {

using cplx = std::complex<double>;

// A function f on (0,inf) represented by its Mellin image f*(s) on the
// vertical line Re s = abscissa.  Immutable after construction.
struct MellinImage {
    std::function<cplx(cplx)> image;
    double abscissa = 0.5;
    std::pair<double, double> decay_class{0.0, 0.0}; // claimed (c1, c2)
    std::string label;

    MellinImage(std::function<cplx(cplx)> img, double c0,
                std::pair<double, double> cls = {0.0, 0.0},
                std::string lbl = {});
};

struct NormResult {
    double value = 0.0;
    bool diverging = false; // weighted integrand grows with |t|
};

struct MembershipReport {
    bool member = false;
    double decay_ratio = 0.0; // per-decade tail ratio (margin)
    bool conclusive = true;
    std::string note;
};

/// f(x) = (1/2 pi i) Int f*(s) x^{-s} ds on the image's line.
cplx eval_function(const MellinImage& f, double x,
                   const quad::QuadratureControl& control = {});

/// Truncated weighted norm
/// (1/2 pi) Int_{-T}^{T} e^{pi c1 |s|} |s|^{c2} |f*(c0+it)| dt.
NormResult weighted_norm(const MellinImage& f, double c1, double c2,
                         double truncation,
                         const quad::QuadratureControl& control = {});

/// Numerical membership probe for the weighted class (c1, c2): the weighted
/// integrand must decay along geometric tail windows and the truncated norm
/// must stabilize.
MembershipReport membership_estimate(const MellinImage& f, double c1, double c2,
                                     const quad::QuadratureControl& control = {});

struct CatalogEntry {
    std::string name;
    MellinImage image;
    std::function<cplx(double)> point_function; // closed form of f
    std::pair<double, double> valid_abscissa_range;
    std::string description;
};

/// Self-verified pairs (f, f*): exp, k0, inv1p, gauss.
const std::vector<CatalogEntry>& catalog();

/// nullptr when the name does not resolve.
const CatalogEntry* find_catalog_entry(std::string_view name);

} // namespace indexlab::mellin
