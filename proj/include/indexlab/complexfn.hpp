#pragma once

#include <complex>
#include <span>

#include "indexlab/errors.hpp"

namespace indexlab::complexfn {

using cplx = std::complex<double>;

// Accuracy/budget knobs shared by the series and local quadrature evaluators.
struct PrecisionBudget {
    double target_abs_tol = 1e-14;
    double target_rel_tol = 1e-13;
    int max_terms = 400;
    int max_refinements = 24;

    void validate() const; // throws std::invalid_argument
};

/// Principal branch of log Gamma(z); real on the positive axis.
/// Throws PoleError within 1e-12 of a non-positive integer.
cplx log_gamma(cplx z);

/// exp(log_gamma(z)).
cplx gamma(cplx z);

/// Entire 1/Gamma(z); exactly 0 at non-positive integers.
cplx reciprocal_gamma(cplx z);

/// Upper incomplete gamma Int_a^inf e^{-t} t^{w-1} dt, a > 0, |w| <= 50.
cplx upper_incomplete_gamma(cplx w, double a);

/// Modified Bessel K of complex order via the cosh integral
/// Int_0^inf e^{-x cosh t} cosh(order t) dt.  |Im order| <= 50, x > 0.
/// Sets *underflow and returns 0 when the value sits below the double floor.
cplx bessel_k(cplx order, double x, const PrecisionBudget& budget = {},
              bool* underflow = nullptr);

/// Modified Bessel I by its ascending series, principal branch of (w/2)^order.
cplx bessel_i(cplx order, cplx w, const PrecisionBudget& budget = {});

/// Generalized hypergeometric pFq.  Terminating numerators give the exact
/// finite sum; otherwise p <= q is required.
cplx generalized_hyp(std::span<const cplx> numerators,
                     std::span<const cplx> denominators,
                     cplx arg, const PrecisionBudget& budget = {});

} // namespace indexlab::complexfn
