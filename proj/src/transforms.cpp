#include "indexlab/transforms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "indexlab/complexfn.hpp"

namespace indexlab::transforms {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;

using complexfn::bessel_k;
using complexfn::log_gamma;
using kernels::FamilyKind;
using kernels::Interval;
using mellin::CatalogEntry;
using mellin::membership_estimate;

double factorial(int n) {
    double f = 1.0;
    for (int j = 2; j <= n; ++j) f *= j;
    return f;
}

quad::QuadratureControl tighten(const quad::QuadratureControl& ctl, double factor) {
    quad::QuadratureControl inner = ctl;
    inner.abs_tol = std::max(ctl.abs_tol * factor, 5e-14);
    inner.rel_tol = std::max(ctl.rel_tol * factor, 5e-13);
    return inner;
}

void require_c0(const MellinImage& f) {
    if (!(f.abscissa > 0.0 && f.abscissa < 1.0))
        throw RegionError("transform requires 0 < c0 < 1");
}

void require_membership(const MellinImage& f, double c1, double c2) {
    const auto rep = membership_estimate(f, c1, c2);
    if (!rep.member) {
        std::ostringstream os;
        os << "image '" << f.label << "' failed the (" << c1 << ", " << c2
           << ") membership probe (per-decade ratio " << rep.decay_ratio << ")";
        throw MembershipError(os.str());
    }
}

void require_region(const TransformFamily& family, cplx z, double c0) {
    if (!family.forward_z_ok(z, c0))
        throw RegionError("z = (" + std::to_string(z.real()) + ", " +
                          std::to_string(z.imag()) + ") outside region " +
                          family.forward_region(c0) + " of " + family.name());
}

// Distance from the line Re s = c0 to the nearest pole of the family's
// Barnes representand (gamma/sine factor poles only; f* assumed analytic).
double representand_clearance(const TransformFamily& family, cplx z, double c0) {
    const double zr = z.real();
    auto ladder_right = [&](double re0) { // poles at re0 + k, k >= 0
        double d = HUGE_VAL;
        if (re0 > c0) return re0 - c0;
        const double k = std::ceil(c0 - re0);
        d = std::min(std::abs(re0 + k - c0), std::abs(re0 + k - 1.0 - c0));
        return d;
    };
    auto ladder_left = [&](double re0, double step) { // poles at re0 - k step
        if (re0 < c0) return c0 - re0;
        const double k = std::floor((re0 - c0) / step);
        return std::min(std::abs(re0 - k * step - c0),
                        std::abs(re0 - (k + 1.0) * step - c0));
    };
    switch (family.kind()) {
        case FamilyKind::TruncatedMellin:
            return ladder_right(1.0 - zr); // Gamma(1 - s - z)
        case FamilyKind::ExpKL:
        case FamilyKind::PowerExp:
            // Gamma((1 + z - s)/m) and Gamma(1 - s)
            return std::min(ladder_right(1.0 + zr), 1.0 - c0);
        case FamilyKind::OnePlusT:
        case FamilyKind::OnePlusT2: {
            const double step = family.kind() == FamilyKind::OnePlusT ? 1.0 : 2.0;
            const int n = family.poly_n();
            // Gamma((s + z - 1)/step): poles s = 1 - z - k step
            const double d1 = ladder_left(1.0 - zr, step);
            // Gamma(n - (s + z - 1)/step): poles s = n step + 1 - z + k step
            const double d2 = ladder_right(n * step + 1.0 - zr);
            return std::min({d1, d2, 1.0 - c0});
        }
    }
    return HUGE_VAL;
}

// True forward transform by the Mellin-Barnes route, membership not rechecked.
cplx forward_barnes_unchecked(const TransformFamily& family, const MellinImage& f,
                              cplx z, const quad::QuadratureControl& control) {
    const double c0 = f.abscissa;
    require_region(family, z, c0);
    const double clearance = representand_clearance(family, z, c0);
    if (clearance <= 1e-6)
        throw PoleError("forward representand has a pole within 1e-6 of the line");
    const quad::VerticalLine line{c0, clearance};

    switch (family.kind()) {
        case FamilyKind::TruncatedMellin: {
            const double la = std::log(family.shift_a());
            auto g = [&](cplx s) {
                return std::exp(log_gamma(1.0 - s - z) + (z + s - 1.0) * la) *
                       f.image(s);
            };
            return quad::integrate_vertical_line(g, line, control);
        }
        case FamilyKind::ExpKL: {
            auto g = [&](cplx s) {
                return std::exp(log_gamma(1.0 + z - s) + log_gamma(1.0 - s)) *
                       f.image(s);
            };
            return quad::integrate_vertical_line(g, line, control);
        }
        case FamilyKind::PowerExp: {
            const double m = family.power_m();
            auto g = [&](cplx s) {
                return std::exp(log_gamma((1.0 + z - s) / m) + log_gamma(1.0 - s)) *
                       f.image(s);
            };
            return quad::integrate_vertical_line(g, line, control) / m;
        }
        case FamilyKind::OnePlusT: {
            const int n = family.poly_n();
            cplx value;
            if (n == 1) {
                // rho_1(s+z-1) = -pi / sin(pi (s+z)), the reflected sine form
                auto g = [&](cplx s) -> cplx {
                    const cplx w = s + z;
                    if (std::abs(w.imag()) * kPi > 700.0) return 0.0;
                    return -kPi / std::sin(kPi * w) * std::exp(log_gamma(1.0 - s)) *
                           f.image(s);
                };
                value = quad::integrate_vertical_line(g, line, control);
            } else {
                auto g = [&](cplx s) {
                    return std::exp(log_gamma(s + z - 1.0) +
                                    log_gamma(static_cast<double>(n) + 1.0 - s - z) +
                                    log_gamma(1.0 - s)) *
                           f.image(s);
                };
                value = quad::integrate_vertical_line(g, line, control) /
                        factorial(n - 1);
            }
            if (z.real() < 1.0 - c0)
                value += std::exp(log_gamma(z)) * f.image(1.0 - z);
            return value;
        }
        case FamilyKind::OnePlusT2: {
            const int n = family.poly_n();
            auto g = [&](cplx s) {
                return std::exp(log_gamma(0.5 * (s + z - 1.0)) +
                                log_gamma(static_cast<double>(n) -
                                          0.5 * (s + z - 1.0)) +
                                log_gamma(1.0 - s)) *
                       f.image(s);
            };
            cplx value = quad::integrate_vertical_line(g, line, control) /
                         (2.0 * factorial(n - 1));
            if (z.real() < 1.0 - c0)
                value += std::exp(log_gamma(z)) * f.image(1.0 - z);
            return value;
        }
    }
    throw std::invalid_argument("forward_barnes: unknown family");
}

// Contour path of the modified Kontorovich-Lebedev forward transform.
cplx mkl_contour(const MellinImage& f, double tau,
                 const quad::QuadratureControl& control) {
    const double c0 = f.abscissa;
    auto g = [&](cplx s) {
        return std::exp(log_gamma(1.0 - s - cplx(0.0, tau)) +
                        log_gamma(1.0 - s + cplx(0.0, tau)) - log_gamma(1.5 - s)) *
               f.image(s);
    };
    return kSqrtPi * quad::integrate_vertical_line(g, {c0, 1.0 - c0}, control);
}

void mkl_require_class(const MellinImage& f) {
    require_c0(f);
    const double nu = f.abscissa - 0.75; // any nu > c0 - 1 witnesses the class
    require_membership(f, 0.5, nu);
}

// Bounded parallel for; body(i) for i in [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned threads = std::min<std::size_t>(thread_budget(), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

unsigned thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    hw = std::min(hw, 16u);
    if (const char* env = std::getenv("INDEXLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) hw = static_cast<unsigned>(std::min<long>(v, 64));
    }
    return hw;
}

cplx forward_direct(const TransformFamily& family, const MellinImage& f, cplx z,
                    const quad::QuadratureControl& control) {
    require_c0(f);
    require_membership(f, 0.0, 0.0);
    require_region(family, z, f.abscissa);
    const quad::QuadratureControl inner = tighten(control, 1e-2);
    auto integrand = [&](double x) {
        const cplx k = kernels::forward_kernel_closed(family, z, x, inner);
        if (k == 0.0) return cplx(0.0);
        return k * mellin::eval_function(f, x, inner);
    };
    return quad::integrate_semi_axis(integrand, control);
}

cplx forward_barnes(const TransformFamily& family, const MellinImage& f, cplx z,
                    const quad::QuadratureControl& control) {
    require_c0(f);
    require_membership(f, 0.0, 0.0);
    return forward_barnes_unchecked(family, f, z, control);
}

LineFunction forward_line(const TransformFamily& family, const MellinImage& f,
                          double gamma, const quad::QuadratureControl& control) {
    require_c0(f);
    require_membership(f, 0.0, 0.0);

    // The printed inversion kernels of the polynomial families pair with the
    // reflected forward values (the e^{-x/t} variant of the same kernel).
    cplx reflect_base = 0.0;
    double reflect_sign = 1.0;
    std::string provenance = "barnes";
    if (family.is_polynomial()) {
        const double step = family.kind() == FamilyKind::OnePlusT ? 1.0 : 2.0;
        reflect_base = cplx(step * family.poly_n(), 0.0);
        reflect_sign = -1.0;
        provenance = "barnes-reflected(" + std::to_string(step * family.poly_n()) +
                     "-z)";
    }

    // conjugate-symmetric source images let us mirror the upper half line
    const cplx probe(f.abscissa, 1.3);
    const bool real_source =
        std::abs(f.image(std::conj(probe)) - std::conj(f.image(probe))) <=
        1e-10 * (std::abs(f.image(probe)) + 1e-290);

    struct Memo {
        std::mutex mu;
        std::unordered_map<double, cplx> vals;
    };
    auto memo = std::make_shared<Memo>();
    const quad::QuadratureControl inner = tighten(control, 1e-2);

    LineFunction lf;
    lf.gamma = gamma;
    lf.provenance = provenance;
    lf.source_abscissa = f.abscissa;
    lf.values = [family, f, gamma, reflect_base, reflect_sign, real_source, memo,
                 inner](cplx z) -> cplx {
        double key = z.imag();
        bool conj_out = false;
        if (real_source && key < 0.0) {
            key = -key;
            conj_out = true;
        }
        {
            std::lock_guard<std::mutex> lk(memo->mu);
            auto it = memo->vals.find(key);
            if (it != memo->vals.end())
                return conj_out ? std::conj(it->second) : it->second;
        }
        const cplx zz(gamma, key);
        const cplx arg = (reflect_sign < 0.0) ? reflect_base - zz : zz;
        const cplx v = forward_barnes_unchecked(family, f, arg, inner);
        {
            std::lock_guard<std::mutex> lk(memo->mu);
            memo->vals.emplace(key, v);
        }
        return conj_out ? std::conj(v) : v;
    };
    return lf;
}

cplx invert(const TransformFamily& family, const LineFunction& Ff, double x,
            const quad::QuadratureControl& control) {
    if (!(x > 0.0)) throw std::invalid_argument("invert: x must be > 0");
    const Interval strip = family.inversion_strip(Ff.source_abscissa);
    if (!strip.contains(Ff.gamma)) {
        std::ostringstream os;
        os << "invert: gamma = " << Ff.gamma << " outside the strip (" << strip.lo
           << ", " << strip.hi << ") of " << family.name();
        throw StripError(os.str());
    }

    // Integrability side condition, probed as pointwise decay of the weighted
    // tail |Ff(z) w(z)| with w = 1/Gamma(-z) (Laplace-at-1/t families),
    // 1/Gamma(1+z) (polynomial families), 1 (truncated Mellin).
    auto weighted = [&](double u) {
        const cplx z(Ff.gamma, u);
        const cplx v = Ff.values(z);
        if (v == 0.0) return 0.0;
        double lw = 0.0;
        if (family.is_general_laplace()) lw = -std::real(log_gamma(-z));
        else if (family.is_polynomial()) lw = -std::real(log_gamma(1.0 + z));
        return std::exp(std::log(std::abs(v)) + lw);
    };
    const double q0 = weighted(12.0), q1 = weighted(18.0);
    const double q2 = weighted(27.0), q3 = weighted(40.0);
    if (q0 > 0.0 || q1 > 0.0) {
        const double tiny = 1e-14 * (q0 + q1);
        if (!(q2 <= 0.95 * q0 + tiny && q3 <= 0.95 * q1 + tiny)) {
            std::ostringstream os;
            os << "invert: weighted tail fails to decay (probe " << q0 << ", " << q1
               << ", " << q2 << ", " << q3
               << "); the theorem's integrability hypothesis looks violated";
            throw SlowDecayError(os.str());
        }
    }

    auto g = [&](cplx z) -> cplx {
        const cplx v = Ff.values(z);
        if (v == 0.0) return 0.0; // deep-tail underflow guard
        return kernels::inverse_kernel(family, z, x) * v;
    };
    const double clearance =
        (family.kind() == FamilyKind::OnePlusT && family.poly_n() == 1)
            ? std::abs(Ff.gamma)
            : 1.0;
    cplx value = quad::integrate_vertical_line(g, {Ff.gamma, clearance}, control);
    if (family.kind() == FamilyKind::TruncatedMellin)
        value *= std::exp(family.shift_a() * x);
    return value;
}

double operator_norm_bound(const TransformFamily& family, double c0, double gamma,
                           const quad::QuadratureControl& control) {
    if (!(c0 > 0.0 && c0 < 1.0))
        throw StripError("operator_norm_bound requires 0 < c0 < 1");
    auto abs_gamma = [](cplx w) { return std::exp(std::real(log_gamma(w))); };

    switch (family.kind()) {
        case FamilyKind::TruncatedMellin: {
            if (!(gamma < 1.0 - c0))
                throw StripError("truncated-mellin bound needs gamma < 1 - c0");
            const double shift = 1.0 - c0 - gamma;
            auto g = [&](double t) { return cplx(abs_gamma(cplx(shift, -t)), 0.0); };
            const double integral =
                quad::integrate_symmetric_real_line(g, control).real();
            return std::pow(family.shift_a(), gamma + c0 - 1.0) * integral;
        }
        case FamilyKind::ExpKL:
        case FamilyKind::PowerExp: {
            if (!(gamma > c0 - 1.0))
                throw StripError("bound needs gamma > c0 - 1");
            const double shift = 1.0 - c0 + gamma;
            auto g = [&](double t) {
                return cplx(std::abs(kernels::rho(family, cplx(shift, -t))), 0.0);
            };
            const double integral =
                quad::integrate_symmetric_real_line(g, control).real();
            return std::exp(std::real(log_gamma(cplx(1.0 - c0, 0.0)))) * integral;
        }
        case FamilyKind::OnePlusT:
        case FamilyKind::OnePlusT2: {
            const Interval strip = family.rho_strip();
            if (!strip.contains(c0 + gamma))
                throw StripError("bound needs c0 + gamma inside the rho strip");
            auto g = [&](double t) {
                return cplx(std::abs(kernels::rho(family, cplx(c0 + gamma, -t))), 0.0);
            };
            const double integral =
                quad::integrate_symmetric_real_line(g, control).real();
            return std::exp(std::real(log_gamma(cplx(1.0 - c0, 0.0)))) * integral;
        }
    }
    throw std::invalid_argument("operator_norm_bound: unknown family");
}

cplx mkl_forward(const MellinImage& f, double tau,
                 const quad::QuadratureControl& control) {
    mkl_require_class(f);
    const cplx contour = mkl_contour(f, tau, control);

    const quad::QuadratureControl inner = tighten(control, 1e-1);
    const complexfn::PrecisionBudget kbudget{1e-15, 1e-12, 400, 24};
    auto integrand = [&](double x) -> cplx {
        bool under = false;
        const cplx k = bessel_k(cplx(0.0, tau), 0.5 * x, kbudget, &under);
        if (under || k == 0.0) return 0.0;
        return std::exp(-0.5 * x) * k * mellin::eval_function(f, x, inner);
    };
    const cplx direct = quad::integrate_semi_axis(integrand, control);

    const double scale = std::max({std::abs(contour), std::abs(direct), 1e-280});
    if (std::abs(contour - direct) > 1e-7 * scale) {
        std::ostringstream os;
        os << "mkl_forward: contour and x-quadrature paths disagree ("
           << std::abs(contour - direct) / scale << " relative)";
        throw NonConvergenceError(os.str());
    }
    return contour;
}

cplx mkl_h(const MellinImage& f, double y,
           const quad::QuadratureControl& control) {
    if (!(y > 0.0)) throw std::invalid_argument("mkl_h: y must be > 0");
    require_c0(f);
    const double ly = std::log(y);
    auto g = [&](cplx s) {
        return f.image(s) * std::exp(-log_gamma(1.5 - s) - s * ly);
    };
    return quad::integrate_vertical_line(g, {f.abscissa, 1.0}, control);
}

cplx mkl_expand(const MellinImage& f, double x,
                const quad::QuadratureControl& control) {
    if (!(x > 0.0)) throw std::invalid_argument("mkl_expand: x must be > 0");
    mkl_require_class(f);
    const quad::QuadratureControl inner = tighten(control, 1e-2);
    const complexfn::PrecisionBudget kbudget{1e-15, 1e-12, 400, 24};

    quad::QuadratureControl outer = control;
    outer.initial_truncation = 16.0;
    outer.abs_tol = std::max(control.abs_tol, 1e-10);

    auto integrand = [&](double tau) -> cplx {
        if (tau == 0.0) return 0.0;
        bool under = false;
        const cplx k = bessel_k(cplx(0.0, tau), 0.5 * x, kbudget, &under);
        if (under || k == 0.0) return 0.0;
        return tau * std::sinh(kPi * tau) * k * mkl_contour(f, tau, inner);
    };
    const cplx integral = quad::integrate_symmetric_real_line(integrand, outer);
    return std::exp(0.5 * x) / (kPi * kPi * x) * integral;
}

std::pair<cplx, cplx> index_identity(double x, double y,
                                     const quad::QuadratureControl& control) {
    if (!(x > 0.0 && y > 0.0))
        throw std::invalid_argument("index_identity: x, y must be > 0");
    const complexfn::PrecisionBudget kbudget{1e-16, 1e-12, 400, 24};

    // tau sinh(pi tau) amplifies the absolute quadrature noise of the K
    // factors; truncating near tau = 12 keeps the tail (~4e-9) above it.
    quad::QuadratureControl outer = control;
    outer.initial_truncation = 12.0;
    outer.abs_tol = std::max(control.abs_tol, 1e-8);
    outer.rel_tol = std::max(control.rel_tol, 1e-8);

    const double sy = 2.0 * std::sqrt(y);
    auto integrand = [&](double tau) -> cplx {
        if (tau == 0.0) return 0.0;
        bool u1 = false, u2 = false;
        const cplx k1 = bessel_k(cplx(0.0, tau), 0.5 * x, kbudget, &u1);
        const cplx k2 = bessel_k(cplx(0.0, 2.0 * tau), sy, kbudget, &u2);
        if (u1 || u2) return 0.0;
        return tau * std::sinh(kPi * tau) * k1 * k2;
    };
    const cplx lhs = quad::integrate_symmetric_real_line(integrand, outer);
    const cplx rhs = 0.5 * std::sqrt(kPi * kPi * kPi * y / x) *
                     std::exp(-0.5 * x - y / x);
    return {lhs, rhs};
}

RoundTripReport round_trip(const TransformFamily& family, const CatalogEntry& entry,
                           double gamma, const std::vector<double>& grid,
                           const quad::QuadratureControl& control) {
    if (grid.empty()) throw std::invalid_argument("round_trip: empty grid");
    RoundTripReport report;
    report.grid = grid;
    report.reconstructed.resize(grid.size());
    report.reference.resize(grid.size());
    report.per_point.resize(grid.size());

    const LineFunction lf = forward_line(family, entry.image, gamma, control);
    parallel_for(grid.size(), [&](std::size_t i) {
        report.reconstructed[i] = invert(family, lf, grid[i], control);
        report.reference[i] = entry.point_function(grid[i]);
    });

    double ref_scale = 0.0;
    for (const cplx& r : report.reference) ref_scale = std::max(ref_scale, std::abs(r));
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double denom =
            std::max({std::abs(report.reference[i]), 1e-12 * ref_scale, 1e-300});
        const double rel = std::abs(report.reconstructed[i] - report.reference[i]) / denom;
        report.per_point[i] = {grid[i], rel};
        worst = std::max(worst, rel);
    }
    report.max_rel_error = worst;
    std::ostringstream os;
    os << "family=" << family.name() << " gamma=" << gamma
       << " line=" << lf.provenance << " max_rel=" << worst;
    report.tail_diagnostics = os.str();
    return report;
}

} // namespace indexlab::transforms
