#include "indexlab/kernels.hpp"

#include <array>
#include <cmath>
#include <charconv>
#include <vector>

#include "indexlab/complexfn.hpp"

namespace indexlab::kernels {

namespace {

constexpr double kPi = 3.14159265358979323846;

using complexfn::bessel_i;
using complexfn::bessel_k;
using complexfn::generalized_hyp;
using complexfn::log_gamma;
using complexfn::reciprocal_gamma;
using complexfn::upper_incomplete_gamma;

double binom(int n, int k) {
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b *= static_cast<double>(n - j + 1) / j;
    return b;
}

double factorial(int n) {
    double f = 1.0;
    for (int j = 2; j <= n; ++j) f *= j;
    return f;
}

bool near_real_integer(cplx z, double tol, long lo, long* which) {
    const double rn = std::round(z.real());
    if (rn < static_cast<double>(lo)) return false;
    if (std::abs(z - cplx(rn, 0.0)) > tol) return false;
    *which = static_cast<long>(rn);
    return true;
}

// e^{-xt}/(1+t^2)^n kernel in closed hypergeometric form (three-term 1F2
// combination).  Valid away from its removable integer-z singularities.
cplx one_plus_t2_closed_raw(int n, cplx z, double x) {
    using complexfn::PrecisionBudget;
    const PrecisionBudget budget{};
    const double w = -0.25 * x * x;
    const double nf = 2.0 * factorial(n - 1);

    const double nd = n;
    const std::array<cplx, 1> a1{cplx(nd, 0.0)};
    const std::array<cplx, 2> b1{1.0 + nd - 0.5 * z, nd + 0.5 * (1.0 - z)};
    const cplx t1 = std::exp((2.0 * nd - z) * std::log(x) + log_gamma(z - 2.0 * nd)) *
                    generalized_hyp(a1, b1, w, budget);

    const std::array<cplx, 1> a2{0.5 * z};
    const std::array<cplx, 2> b2{cplx(0.5, 0.0), 1.0 - nd + 0.5 * z};
    const cplx t2 = std::exp(log_gamma(nd - 0.5 * z) + log_gamma(0.5 * z)) / nf *
                    generalized_hyp(a2, b2, w, budget);

    const std::array<cplx, 1> a3{0.5 * (z + 1.0)};
    const std::array<cplx, 2> b3{cplx(1.5, 0.0), 0.5 * (3.0 + z) - nd};
    const cplx t3 = x *
                    std::exp(log_gamma(nd - 0.5 * (z + 1.0)) + log_gamma(0.5 * (z + 1.0))) /
                    nf * generalized_hyp(a3, b3, w, budget);

    return t1 + t2 - t3;
}

// Removable singularities at positive integers: symmetric +-i eps Richardson.
cplx one_plus_t2_closed(int n, cplx z, double x) {
    long k = 0;
    if (!near_real_integer(z, 1e-3, 1, &k)) return one_plus_t2_closed_raw(n, z, x);
    const cplx zc(static_cast<double>(k), z.imag());
    const double eps = 1e-3;
    auto avg = [&](double e) {
        return 0.5 * (one_plus_t2_closed_raw(n, zc + cplx(0.0, e), x) +
                      one_plus_t2_closed_raw(n, zc + cplx(0.0, -e), x));
    };
    return (4.0 * avg(eps) - avg(2.0 * eps)) / 3.0;
}

} // namespace

TransformFamily::TransformFamily(FamilyKind k, double a, int m, int n)
    : kind_(k), a_(a), m_(m), n_(n) {}

TransformFamily TransformFamily::truncated_mellin(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("truncated-mellin: a must be > 0");
    return {FamilyKind::TruncatedMellin, a, 1, 1};
}
TransformFamily TransformFamily::exp_kl() {
    return {FamilyKind::ExpKL, 1.0, 1, 1};
}
TransformFamily TransformFamily::power_exp(int m) {
    if (m < 1) throw std::invalid_argument("power-exp: m must be a positive integer");
    return {FamilyKind::PowerExp, 1.0, m, 1};
}
TransformFamily TransformFamily::one_plus_t(int n) {
    if (n < 1) throw std::invalid_argument("one-plus-t: n must be a positive integer");
    return {FamilyKind::OnePlusT, 1.0, 1, n};
}
TransformFamily TransformFamily::one_plus_t2(int n) {
    if (n < 1) throw std::invalid_argument("one-plus-t2: n must be a positive integer");
    return {FamilyKind::OnePlusT2, 1.0, 1, n};
}

TransformFamily TransformFamily::parse(std::string_view name) {
    const auto colon = name.find(':');
    const std::string_view head = name.substr(0, colon);
    const std::string_view tail =
        colon == std::string_view::npos ? std::string_view{} : name.substr(colon + 1);
    auto parse_int = [&](int fallback_required) {
        int v = fallback_required;
        if (tail.empty()) {
            if (fallback_required < 0)
                throw std::invalid_argument("family '" + std::string(head) +
                                            "' needs a :parameter");
            return v;
        }
        const auto res = std::from_chars(tail.data(), tail.data() + tail.size(), v);
        if (res.ec != std::errc() || res.ptr != tail.data() + tail.size())
            throw std::invalid_argument("bad family parameter '" + std::string(tail) + "'");
        return v;
    };
    if (head == "truncated-mellin") {
        double a = 1.0;
        if (!tail.empty()) {
            try {
                a = std::stod(std::string(tail));
            } catch (...) {
                throw std::invalid_argument("bad truncated-mellin parameter");
            }
        }
        return truncated_mellin(a);
    }
    if (head == "exp-kl") return exp_kl();
    if (head == "power-exp") return power_exp(parse_int(-1));
    if (head == "one-plus-t") return one_plus_t(parse_int(-1));
    if (head == "inc-gamma") return inc_gamma();
    if (head == "one-plus-t2") return one_plus_t2(parse_int(-1));
    throw std::invalid_argument("unknown transform family '" + std::string(name) + "'");
}

std::string TransformFamily::name() const {
    switch (kind_) {
        case FamilyKind::TruncatedMellin: {
            if (a_ == 1.0) return "truncated-mellin";
            return "truncated-mellin:" + std::to_string(a_);
        }
        case FamilyKind::ExpKL: return "exp-kl";
        case FamilyKind::PowerExp: return "power-exp:" + std::to_string(m_);
        case FamilyKind::OnePlusT:
            return n_ == 1 ? "inc-gamma" : "one-plus-t:" + std::to_string(n_);
        case FamilyKind::OnePlusT2: return "one-plus-t2:" + std::to_string(n_);
    }
    return "?";
}

double TransformFamily::r_coefficient(int k) const {
    if (k < 0) return 0.0;
    switch (kind_) {
        case FamilyKind::ExpKL: return 1.0 / factorial(k);
        case FamilyKind::PowerExp:
            return (k % m_ == 0) ? 1.0 / factorial(k / m_) : 0.0;
        case FamilyKind::OnePlusT: return (k <= n_) ? binom(n_, k) : 0.0;
        case FamilyKind::OnePlusT2:
            return (k % 2 == 0 && k / 2 <= n_) ? binom(n_, k / 2) : 0.0;
        case FamilyKind::TruncatedMellin: break;
    }
    throw std::invalid_argument("truncated-mellin has no r(t) coefficients");
}

bool TransformFamily::forward_z_ok(cplx z, double c0) const {
    switch (kind_) {
        case FamilyKind::TruncatedMellin: return z.real() < 1.0 - c0;
        case FamilyKind::ExpKL:
        case FamilyKind::PowerExp: return z.real() > c0 - 1.0;
        case FamilyKind::OnePlusT:
        case FamilyKind::OnePlusT2:
            return z.real() > 0.0 && z.real() < n_ - c0;
    }
    return false;
}

std::string TransformFamily::forward_region(double c0) const {
    switch (kind_) {
        case FamilyKind::TruncatedMellin:
            return "Re z < " + std::to_string(1.0 - c0);
        case FamilyKind::ExpKL:
        case FamilyKind::PowerExp:
            return "Re z > " + std::to_string(c0 - 1.0);
        case FamilyKind::OnePlusT:
        case FamilyKind::OnePlusT2:
            return "0 < Re z < " + std::to_string(n_ - c0);
    }
    return "?";
}

Interval TransformFamily::inversion_strip(double c0) const {
    switch (kind_) {
        case FamilyKind::TruncatedMellin: return {-1e300, 1.0 - c0};
        case FamilyKind::ExpKL:
        case FamilyKind::PowerExp: return {c0 - 1.0, 0.0};
        case FamilyKind::OnePlusT:
            if (n_ == 1) return {0.0, 1.0 - c0};
            return {n_ - 1.0, n_ - c0};
        case FamilyKind::OnePlusT2: return {n_ - 1.0, n_ - c0};
    }
    return {};
}

Interval TransformFamily::rho_strip() const {
    switch (kind_) {
        case FamilyKind::ExpKL:
        case FamilyKind::PowerExp: return {0.0, 1e300};
        case FamilyKind::OnePlusT: return {0.0, static_cast<double>(n_)};
        case FamilyKind::OnePlusT2: return {0.0, 2.0 * n_};
        case FamilyKind::TruncatedMellin: break;
    }
    throw std::invalid_argument("truncated-mellin has no rho(s)");
}

bool TransformFamily::has_closed_form() const {
    switch (kind_) {
        case FamilyKind::ExpKL: return true;
        case FamilyKind::OnePlusT: return n_ == 1;
        case FamilyKind::OnePlusT2: return true;
        default: return false;
    }
}

cplx forward_kernel(const TransformFamily& family, cplx z, double x,
                    const quad::QuadratureControl& control) {
    if (!(x > 0.0)) throw std::invalid_argument("forward_kernel: x must be > 0");
    switch (family.kind()) {
        case FamilyKind::TruncatedMellin:
            return std::exp(-z * std::log(x) - family.shift_a() * x);
        case FamilyKind::ExpKL:
            return quad::integrate_semi_axis(
                [&](double t) { return std::exp(-x / t - t + (z - 1.0) * std::log(t)); },
                control);
        case FamilyKind::PowerExp: {
            const double m = family.power_m();
            return quad::integrate_semi_axis(
                [&](double t) {
                    return std::exp(-x / t - std::pow(t, m) + (z - 1.0) * std::log(t));
                },
                control);
        }
        case FamilyKind::OnePlusT: {
            if (!(z.real() > 0.0))
                throw RegionError("polynomial kernel requires Re z > 0");
            const int n = family.poly_n();
            return quad::integrate_semi_axis(
                [&](double t) {
                    return std::exp(-x * t + (z - 1.0) * std::log(t) -
                                    n * std::log1p(t));
                },
                control);
        }
        case FamilyKind::OnePlusT2: {
            if (!(z.real() > 0.0))
                throw RegionError("polynomial kernel requires Re z > 0");
            const int n = family.poly_n();
            return quad::integrate_semi_axis(
                [&](double t) {
                    return std::exp(-x * t + (z - 1.0) * std::log(t) -
                                    n * std::log1p(t * t));
                },
                control);
        }
    }
    throw std::invalid_argument("forward_kernel: unknown family");
}

cplx forward_kernel_closed(const TransformFamily& family, cplx z, double x,
                           const quad::QuadratureControl& control) {
    if (!(x > 0.0)) throw std::invalid_argument("forward_kernel_closed: x must be > 0");
    switch (family.kind()) {
        case FamilyKind::ExpKL:
            return 2.0 * std::exp(0.5 * z * std::log(x)) *
                   bessel_k(z, 2.0 * std::sqrt(x));
        case FamilyKind::OnePlusT:
            if (family.poly_n() == 1) {
                if (!(z.real() > 0.0))
                    throw RegionError("polynomial kernel requires Re z > 0");
                return std::exp(log_gamma(z) + x) * upper_incomplete_gamma(1.0 - z, x);
            }
            break;
        case FamilyKind::OnePlusT2:
            if (!(z.real() > 0.0))
                throw RegionError("polynomial kernel requires Re z > 0");
            return one_plus_t2_closed(family.poly_n(), z, x);
        default: break;
    }
    return forward_kernel(family, z, x, control);
}

cplx inverse_kernel(const TransformFamily& family, cplx z, double x,
                    double* agreement) {
    if (!(x > 0.0)) throw std::invalid_argument("inverse_kernel: x must be > 0");
    if (agreement) *agreement = 0.0;
    const double lx = std::log(x);
    const complexfn::PrecisionBudget budget{};

    auto report = [&](cplx primary, cplx check) {
        if (agreement) {
            const double scale = std::max({std::abs(primary), std::abs(check), 1e-300});
            *agreement = std::abs(primary - check) / scale;
        }
        return primary;
    };

    switch (family.kind()) {
        case FamilyKind::TruncatedMellin:
            return std::exp((z - 1.0) * lx);

        case FamilyKind::ExpKL: {
            // coefficient series sum_k x^{k-z-1} / (k! Gamma(k-z))
            cplx series = 0.0;
            double ck = 1.0; // x^k / k!
            const cplx xpow = std::exp((-z - 1.0) * lx);
            int quiet = 0;
            for (int k = 0; k < 400; ++k) {
                if (k > 0) ck *= x / k;
                const cplx term = ck * reciprocal_gamma(static_cast<double>(k) - z);
                series += term;
                if (std::abs(term) <= 1e-16 * std::abs(series)) {
                    if (++quiet >= 3) break;
                } else {
                    quiet = 0;
                }
            }
            series *= xpow;
            const cplx closed = bessel_i(-(1.0 + z), 2.0 * std::sqrt(x)) *
                                std::exp(-0.5 * (1.0 + z) * lx);
            return report(series, closed);
        }

        case FamilyKind::PowerExp: {
            const int m = family.power_m();
            cplx series = 0.0;
            double cn = 1.0; // x^{m n} / n!
            int quiet = 0;
            for (int n = 0; n < 400; ++n) {
                if (n > 0) cn *= std::pow(x, m) / n;
                const cplx term =
                    cn * reciprocal_gamma(static_cast<double>(m) * n - z);
                series += term;
                if (std::abs(term) <= 1e-16 * std::abs(series)) {
                    if (++quiet >= 3) break;
                } else {
                    quiet = 0;
                }
            }
            series *= std::exp((-z - 1.0) * lx);
            // hyper-Bessel closed form with argument (x/m)^m
            bool check_ok = true;
            std::vector<cplx> bs(m);
            for (int k = 0; k < m; ++k) {
                bs[k] = (static_cast<double>(k) - z) / static_cast<double>(m);
                const double rn = std::round(bs[k].real());
                if (rn <= 0.0 && std::abs(bs[k] - cplx(rn, 0.0)) < 1e-6) check_ok = false;
            }
            if (!check_ok) return series;
            cplx pref = std::pow(2.0 * kPi, 0.5 * (m - 1)) * std::sqrt(double(m)) / x *
                        std::exp(-z * std::log(x / m));
            for (int k = 0; k < m; ++k) pref *= reciprocal_gamma(bs[k]);
            const cplx closed = pref * generalized_hyp(std::span<const cplx>{}, bs,
                                                       std::pow(x / m, m), budget);
            return report(series, closed);
        }

        case FamilyKind::OnePlusT: {
            const int n = family.poly_n();
            if (n == 1 && std::abs(z) <= 1e-12)
                throw PoleError("inverse kernel has a pole at z = 0");
            cplx sum = 0.0;
            for (int k = 0; k <= n; ++k)
                sum += binom(n, k) * std::exp((z - static_cast<double>(k)) * lx) *
                       reciprocal_gamma(1.0 + z - static_cast<double>(k));
            if (n == 1) {
                const cplx closed = std::exp(z * lx) * reciprocal_gamma(z) *
                                    (1.0 / z + 1.0 / x);
                return report(closed, sum);
            }
            const std::array<cplx, 2> as{cplx(-n, 0.0), -z};
            const cplx closed = std::exp(z * lx) * reciprocal_gamma(1.0 + z) *
                                generalized_hyp(as, std::span<const cplx>{}, 1.0 / x,
                                                budget);
            return report(sum, closed);
        }

        case FamilyKind::OnePlusT2: {
            const int n = family.poly_n();
            cplx sum = 0.0;
            for (int k = 0; k <= n; ++k)
                sum += binom(n, k) * std::exp((z - 2.0 * k) * lx) *
                       reciprocal_gamma(1.0 + z - 2.0 * k);
            const std::array<cplx, 3> as{cplx(-n, 0.0), -0.5 * z, 0.5 * (1.0 - z)};
            const cplx closed = std::exp(z * lx) * reciprocal_gamma(1.0 + z) *
                                generalized_hyp(as, std::span<const cplx>{},
                                                -4.0 / (x * x), budget);
            return report(sum, closed);
        }
    }
    throw std::invalid_argument("inverse_kernel: unknown family");
}

cplx rho(const TransformFamily& family, cplx s) {
    if (family.kind() == FamilyKind::TruncatedMellin)
        throw std::invalid_argument("truncated-mellin has no rho(s)");
    const Interval strip = family.rho_strip();
    if (!strip.contains(s.real()))
        throw StripError("rho: Re s outside the convergence strip of " + family.name());
    switch (family.kind()) {
        case FamilyKind::ExpKL: return std::exp(log_gamma(s));
        case FamilyKind::PowerExp: {
            const double m = family.power_m();
            return std::exp(log_gamma(s / m)) / m;
        }
        case FamilyKind::OnePlusT: {
            const int n = family.poly_n();
            return std::exp(log_gamma(s) + log_gamma(static_cast<double>(n) - s)) /
                   factorial(n - 1);
        }
        case FamilyKind::OnePlusT2: {
            const int n = family.poly_n();
            return std::exp(log_gamma(0.5 * s) +
                            log_gamma(static_cast<double>(n) - 0.5 * s)) /
                   (2.0 * factorial(n - 1));
        }
        default: break;
    }
    throw std::invalid_argument("rho: unknown family");
}

} // namespace indexlab::kernels
