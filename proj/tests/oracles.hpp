#pragma once

// Test-side oracle implementations, independent of the library's evaluation
// paths: a fixed-shift Stirling log-gamma, plain adaptive-Simpson quadrature,
// a fine-grid cosh-integral Bessel K, and long-double series summers.

#include <complex>
#include <functional>

namespace oracles {

using cplx = std::complex<double>;

// log Gamma via the Stirling series at z + 8 plus downward recurrence.
// Valid for Re z > 0.
cplx log_gamma_stirling8(cplx z);

// Adaptive Simpson over [a, b].
cplx adaptive_simpson(const std::function<cplx(double)>& f, double a, double b,
                      double tol);

// Quadrature of the Euler integral for Gamma(z), Re z >= 1.
cplx euler_gamma_integral(cplx z);

// Quadrature of the upper incomplete gamma integral from a, any complex w.
cplx upper_gamma_quadrature(cplx w, double a);

// Cosh-integral Bessel K on a fine composite Simpson grid.
cplx bessel_k_cosh(cplx order, double x);

// Ascending Bessel I series summed in long double.
cplx bessel_i_series_ld(cplx order, cplx w, int terms = 120);

// 1F2 by direct term summation in long double.
cplx hyp1f2_ld(cplx a, cplx b1, cplx b2, cplx w, int terms = 60);

} // namespace oracles
