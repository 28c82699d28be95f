#include "indexlab/complexfn.hpp"

#include <algorithm>
#include <cmath>

#include "gauss_nodes.hpp"

namespace indexlab::complexfn {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogPi = 1.1447298858494001741;
constexpr double kHalfLogTwoPi = 0.91893853320467274178;
constexpr double kEulerGamma = 0.57721566490153286061;

// B_{2n} / (2n (2n-1)), the w^{1-2n} coefficients of the Stirling series.
constexpr double kStirlingCoeff[] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

bool near_nonpositive_integer(cplx z, double tol, long* which = nullptr) {
    const double rn = std::round(z.real());
    if (rn > 0.5) return false;
    if (std::abs(z - cplx(rn, 0.0)) > tol) return false;
    if (which) *which = static_cast<long>(rn);
    return true;
}

// Stirling series; requires Re w >= 0.5 and (Re w >= 12 or |Im w| >= 12).
cplx stirling(cplx w) {
    cplx lg = (w - 0.5) * std::log(w) - w + kHalfLogTwoPi;
    const cplx w2 = w * w;
    cplx rp = 1.0 / w;
    for (double c : kStirlingCoeff) {
        lg += c * rp;
        rp /= w2;
    }
    return lg;
}

// log Gamma on Re w >= 0.5 via recurrence shift into the Stirling region.
cplx log_gamma_right(cplx w) {
    cplx shift = 0.0;
    while (w.real() < 12.0 && std::abs(w.imag()) < 12.0) {
        shift += std::log(w);
        w += 1.0;
    }
    return stirling(w) - shift;
}

// log sin(pi z) for Im z >= 0, branch matching the principal log Gamma:
// sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z}).
cplx log_sin_pi_upper(cplx z) {
    const cplx q = std::exp(cplx(0.0, 2.0 * kPi) * z);
    return cplx(-std::log(2.0), kPi / 2.0) - cplx(0.0, kPi) * z + std::log(1.0 - q);
}

// ---- upper incomplete gamma helpers ----

double exp1_real(double a) {
    if (a <= 1.0) {
        double sum = 0.0, term = 1.0;
        for (int n = 1; n < 60; ++n) {
            term *= -a / n;
            const double add = -term / n;
            sum += add;
            if (std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
        }
        return sum - kEulerGamma - std::log(a);
    }
    // Lentz continued fraction e^{-a}/(a+1 - 1/(a+3 - 4/(a+5 - ...)))
    const double fpmin = 1e-300;
    double b = a + 1.0, c = 1.0 / fpmin, d = 1.0 / b, h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-a) * h;
}

cplx upper_gamma_cf(cplx w, double a, bool* ok) {
    const double fpmin = 1e-300;
    cplx b = a + 1.0 - w;
    cplx c = 1.0 / fpmin;
    cplx d = (std::abs(b) < fpmin) ? cplx(1.0 / fpmin) : 1.0 / b;
    cplx h = d;
    *ok = false;
    for (int i = 1; i < 40000; ++i) {
        const cplx an = -static_cast<double>(i) * (static_cast<double>(i) - w);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const cplx del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) {
            *ok = true;
            break;
        }
    }
    return std::exp(-a + w * std::log(a)) * h;
}

cplx lower_gamma_series(cplx w, double a, bool* ok) {
    cplx ap = w;
    cplx del = 1.0 / w;
    cplx sum = del;
    *ok = false;
    for (int n = 0; n < 20000; ++n) {
        ap += 1.0;
        del *= a / ap;
        sum += del;
        if (std::abs(del) < 1e-17 * std::abs(sum)) {
            *ok = true;
            break;
        }
    }
    return sum * std::exp(-a + w * std::log(a));
}

// Direct quadrature of e^{-a} Int_0^inf e^{-u} (a+u)^{w-1} du; last resort for
// the near-pole, small-a corner where the complement path cancels.
cplx upper_gamma_quad(cplx w, double a) {
    const double wr = w.real();
    const double peak = std::max(1.0, wr - 1.0);
    const double U = 60.0 + 3.0 * std::abs(w) + peak;
    auto g = [&](double u) { return std::exp(-a - u + (w - 1.0) * std::log(a + u)); };
    const int npan = 24;
    cplx total = 0.0;
    double lo = 0.0;
    for (int j = 0; j < npan; ++j) {
        const double hi = U * (j + 1) / npan;
        total += detail::gauss16_adaptive(g, lo, hi, 1e-16 * (1.0 + std::abs(total)), 24);
        lo = hi;
    }
    return total;
}

cplx upper_gamma_integer_order(long k, double a) {
    // Gamma(0, a) = E1(a), then Gamma(w-1,a) = (Gamma(w,a) - a^{w-1}e^{-a})/(w-1)
    cplx g = exp1_real(a);
    const double ea = std::exp(-a);
    for (long j = 1; j <= k; ++j) {
        g = (g - std::pow(a, static_cast<double>(-j)) * ea) / static_cast<double>(-j);
    }
    return g;
}

} // namespace

void PrecisionBudget::validate() const {
    if (!(target_abs_tol >= 0.0) || !(target_rel_tol >= 0.0))
        throw std::invalid_argument("PrecisionBudget: tolerances must be >= 0");
    if (target_abs_tol <= 0.0 && target_rel_tol <= 0.0)
        throw std::invalid_argument("PrecisionBudget: need a positive tolerance");
    if (max_terms < 16) throw std::invalid_argument("PrecisionBudget: max_terms < 16");
    if (max_refinements < 4)
        throw std::invalid_argument("PrecisionBudget: max_refinements < 4");
}

cplx log_gamma(cplx z) {
    if (near_nonpositive_integer(z, 1e-12))
        throw PoleError("log_gamma: argument within 1e-12 of a non-positive integer");
    const bool lower = z.imag() < 0.0;
    cplx w = lower ? std::conj(z) : z;
    cplx lg;
    if (w.real() >= 0.5) {
        lg = log_gamma_right(w);
    } else {
        lg = kLogPi - log_sin_pi_upper(w) - log_gamma_right(1.0 - w);
    }
    return lower ? std::conj(lg) : lg;
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

cplx reciprocal_gamma(cplx z) {
    const double rn = std::round(z.real());
    if (z.imag() == 0.0 && z.real() == rn && rn <= 0.0) return 0.0;
    if (near_nonpositive_integer(z, 1e-15)) return 0.0;
    const bool lower = z.imag() < 0.0;
    cplx w = lower ? std::conj(z) : z;
    cplx lr;
    if (w.real() >= 0.5) {
        lr = -log_gamma_right(w);
    } else {
        lr = log_sin_pi_upper(w) + log_gamma_right(1.0 - w) - kLogPi;
    }
    const cplx r = std::exp(lr);
    return lower ? std::conj(r) : r;
}

cplx upper_incomplete_gamma(cplx w, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("upper_incomplete_gamma: a must be > 0");
    if (std::abs(w) > 50.0)
        throw EnvelopeError("upper_incomplete_gamma: |w| > 50 outside supported envelope");

    long k = 0;
    if (near_nonpositive_integer(w, 1e-12, &k)) return upper_gamma_integer_order(-k, a);

    bool ok = false;
    if (a >= 1.0 && a >= w.real() + 1.0) {
        const cplx v = upper_gamma_cf(w, a, &ok);
        if (ok) return v;
    }
    const cplx lower = lower_gamma_series(w, a, &ok);
    if (ok) {
        const cplx whole = std::exp(log_gamma(w));
        const cplx v = whole - lower;
        const double cancel = std::max(std::abs(whole), std::abs(lower)) /
                              std::max(std::abs(v), 1e-300);
        if (cancel < 1e5) return v;
    }
    if (a >= 0.25) {
        const cplx v = upper_gamma_cf(w, a, &ok);
        if (ok) return v;
    }
    return upper_gamma_quad(w, a);
}

cplx bessel_k(cplx order, double x, const PrecisionBudget& budget, bool* underflow) {
    budget.validate();
    if (underflow) *underflow = false;
    if (!(x > 0.0)) throw std::invalid_argument("bessel_k: x must be > 0");
    if (std::abs(order.imag()) > 50.0)
        throw EnvelopeError("bessel_k: |Im order| > 50 outside supported envelope");
    if (x > 705.0) {
        if (underflow) *underflow = true;
        return 0.0;
    }

    // Truncation point: x cosh T - |Re order| T large enough that the omitted
    // tail sits ~1e-20 under the e^{-x} integrand scale.
    const double ar = std::abs(order.real());
    double T = std::acosh(std::max(2.0, (x + 46.0) / x));
    for (int it = 0; it < 3; ++it)
        T = std::acosh(std::max(2.0, (x + 46.0 + ar * T) / x));

    const double scale = std::exp(-x);
    auto g = [&](double t) { return std::exp(-x * std::cosh(t)) * std::cosh(order * t); };

    const double width = std::min(1.0, 6.0 / (1.0 + std::abs(order.imag())));
    const int npan = std::max(4, static_cast<int>(std::ceil(T / width)));
    const double tol_abs =
        std::max(budget.target_abs_tol,
                 budget.target_rel_tol * scale) / npan;
    cplx total = 0.0;
    for (int j = 0; j < npan; ++j) {
        const double lo = T * j / npan, hi = T * (j + 1) / npan;
        total += detail::gauss16_adaptive(g, lo, hi, tol_abs, budget.max_refinements);
    }
    if (std::abs(total) < 1e-305) {
        if (underflow) *underflow = true;
        return 0.0;
    }
    return total;
}

cplx bessel_i(cplx order, cplx w, const PrecisionBudget& budget) {
    budget.validate();
    if (std::abs(w) > 100.0)
        throw EnvelopeError("bessel_i: |w| > 100 outside supported envelope");
    if (w == 0.0) {
        if (order == 0.0) return 1.0;
        if (order.real() > 0.0 || reciprocal_gamma(order + 1.0) == 0.0) return 0.0;
        throw std::invalid_argument("bessel_i: w = 0 with Re order < 0");
    }
    const cplx half = 0.5 * w;
    const cplx prefactor = std::exp(order * std::log(half));
    const cplx h2 = half * half;
    // c_k = (w^2/4)^k / k!; the gamma factor is taken fresh each term since the
    // ratio recurrence breaks across zeros of 1/Gamma.
    cplx ck = 1.0;
    cplx sum = reciprocal_gamma(order + 1.0);
    int quiet = 0;
    for (int kk = 1; kk <= budget.max_terms; ++kk) {
        ck *= h2 / static_cast<double>(kk);
        const cplx term = ck * reciprocal_gamma(order + static_cast<double>(kk) + 1.0);
        sum += term;
        if (std::abs(term) <= budget.target_rel_tol * std::abs(sum)) {
            if (++quiet >= 3) return prefactor * sum;
        } else {
            quiet = 0;
        }
    }
    throw SeriesDivergenceError("bessel_i: series did not converge within max_terms");
}

cplx generalized_hyp(std::span<const cplx> numerators,
                     std::span<const cplx> denominators, cplx arg,
                     const PrecisionBudget& budget) {
    budget.validate();
    long terminate_at = -1;
    for (const cplx& a : numerators) {
        long k = 0;
        if (near_nonpositive_integer(a, 1e-12, &k)) {
            const long n = -k;
            if (terminate_at < 0 || n < terminate_at) terminate_at = n;
        }
    }
    if (terminate_at < 0 && numerators.size() > denominators.size())
        throw DivergentSeriesError(
            "generalized_hyp: p > q with no terminating numerator");

    cplx term = 1.0, sum = 1.0;
    int quiet = 0;
    const long kmax = (terminate_at >= 0) ? terminate_at : budget.max_terms;
    for (long k = 0; k < kmax; ++k) {
        cplx ratio = arg / static_cast<double>(k + 1);
        for (const cplx& a : numerators) ratio *= a + static_cast<double>(k);
        for (const cplx& b : denominators) {
            const cplx bf = b + static_cast<double>(k);
            if (std::abs(bf) < 1e-12)
                throw PoleError("generalized_hyp: denominator parameter hits a "
                                "non-positive integer before termination");
            ratio /= bf;
        }
        term *= ratio;
        sum += term;
        if (terminate_at < 0) {
            if (std::abs(term) <= budget.target_rel_tol * std::abs(sum)) {
                if (++quiet >= 3) return sum;
            } else {
                quiet = 0;
            }
        }
    }
    if (terminate_at >= 0) return sum;
    throw SeriesDivergenceError("generalized_hyp: series budget exhausted");
}

} // namespace indexlab::complexfn
