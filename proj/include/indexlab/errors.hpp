#pragma once

#include <stdexcept>
#include <string>

namespace indexlab {

// Base for every numerical failure this library reports.  std::invalid_argument
// is still used for plain contract violations (bad tolerances, x <= 0, ...).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument sits on (or within clearance of) a pole of a gamma/sine factor.
class PoleError : public Error { public: using Error::Error; };

// Argument outside the supported evaluation envelope.
class EnvelopeError : public Error { public: using Error::Error; };

// Series hit its term budget without meeting the termination rule.
class SeriesDivergenceError : public Error { public: using Error::Error; };

// p > q hypergeometric series with no terminating numerator.
class DivergentSeriesError : public Error { public: using Error::Error; };

// Quadrature budgets exhausted without refinement agreement.
class NonConvergenceError : public Error { public: using Error::Error; };

// Refinement near the t = 0 endpoint failed to stabilize.
class EndpointSingularityError : public Error { public: using Error::Error; };

// Tail estimate of a line integral fails to fall; usually a violated
// integrability hypothesis.  Carries the tail diagnostic in what().
class SlowDecayError : public Error { public: using Error::Error; };

// Evenness spot-check of a symmetric-line integrand failed.
class AsymmetryError : public Error { public: using Error::Error; };

// z outside the family's convergence/analyticity region.
class RegionError : public Error { public: using Error::Error; };

// Abscissa outside the valid strip (rho strips, inversion strips).
class StripError : public Error { public: using Error::Error; };

// Function-space membership probe failed for an operation that requires it.
class MembershipError : public Error { public: using Error::Error; };

} // namespace indexlab
