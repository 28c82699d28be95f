#include "indexlab/mellin.hpp"

#include <cmath>

#include "indexlab/complexfn.hpp"
#include "gauss_nodes.hpp"

namespace indexlab::mellin {

namespace {

constexpr double kPi = 3.14159265358979323846;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Weighted integrand of the Definition-2 style norm at s = c0 + i t.
double weighted_integrand(const MellinImage& f, double c1, double c2, double t) {
    const cplx s(f.abscissa, t);
    const double as = std::abs(s);
    const double v = std::abs(f.image(s));
    if (v == 0.0) return 0.0;
    // assembled in log space: e^{pi c1 |s|} |s|^{c2} can overflow alone
    const double lg = kPi * c1 * as + c2 * std::log(as) + std::log(v);
    if (lg > 700.0) return HUGE_VAL;
    return std::exp(lg);
}

double window_integral(const MellinImage& f, double c1, double c2, double lo,
                       double hi) {
    auto g = [&](double t) {
        return cplx(weighted_integrand(f, c1, c2, t) +
                    weighted_integrand(f, c1, c2, -t), 0.0);
    };
    const int nseg = 8;
    double acc = 0.0;
    for (int j = 0; j < nseg; ++j) {
        const double a = lo + (hi - lo) * j / nseg;
        const double b = lo + (hi - lo) * (j + 1) / nseg;
        acc += detail::gauss16(g, a, b).real();
    }
    return acc;
}

} // namespace

MellinImage::MellinImage(std::function<cplx(cplx)> img, double c0,
                         std::pair<double, double> cls, std::string lbl)
    : image(std::move(img)), abscissa(c0), decay_class(cls), label(std::move(lbl)) {
    if (!image) throw std::invalid_argument("MellinImage: null image callable");
    if (2 * sign_of(cls.first) + sign_of(cls.second) < 0)
        throw std::invalid_argument(
            "MellinImage: claimed decay class violates 2 sign(c1) + sign(c2) >= 0");
}

cplx eval_function(const MellinImage& f, double x,
                   const quad::QuadratureControl& control) {
    if (!(x > 0.0)) throw std::invalid_argument("eval_function: x must be > 0");
    // quick integrability probe along the line
    const double m30 = std::abs(f.image(cplx(f.abscissa, 30.0)));
    const double m45 = std::abs(f.image(cplx(f.abscissa, 45.0)));
    if (m45 > 2.0 * m30 + 1e-6)
        throw SlowDecayError("eval_function: image grows along the line");
    const double lx = std::log(x);
    auto g = [&](cplx s) { return f.image(s) * std::exp(-s * lx); };
    return quad::integrate_vertical_line(g, {f.abscissa, 1.0}, control);
}

NormResult weighted_norm(const MellinImage& f, double c1, double c2,
                         double truncation, const quad::QuadratureControl&) {
    if (!(truncation > 0.0))
        throw std::invalid_argument("weighted_norm: truncation must be > 0");
    // quarters are tracked to flag growth of the weighted integrand
    double quarters[4] = {0.0, 0.0, 0.0, 0.0};
    const int per_quarter = 8;
    for (int q = 0; q < 4; ++q) {
        for (int j = 0; j < per_quarter; ++j) {
            const double a = truncation * (q * per_quarter + j) / (4.0 * per_quarter);
            const double b = truncation * (q * per_quarter + j + 1) / (4.0 * per_quarter);
            quarters[q] += window_integral(f, c1, c2, a, b);
        }
    }
    const double total = quarters[0] + quarters[1] + quarters[2] + quarters[3];
    NormResult out;
    out.value = total / (2.0 * kPi);
    out.diverging = quarters[3] > quarters[2] && quarters[3] > 1e-12 * (total + 1e-300);
    return out;
}

MembershipReport membership_estimate(const MellinImage& f, double c1, double c2,
                                     const quad::QuadratureControl&) {
    MembershipReport rep;
    constexpr int kWindows = 5;
    double W[kWindows];
    double total = 0.0;
    try {
        total = window_integral(f, c1, c2, 0.0, 10.0);
        double T = 10.0;
        for (int j = 0; j < kWindows; ++j) {
            W[j] = window_integral(f, c1, c2, T, 2.0 * T);
            total += W[j];
            T *= 2.0;
        }
    } catch (const std::exception& e) {
        rep.member = false;
        rep.conclusive = false;
        rep.note = std::string("probe failed: ") + e.what();
        return rep;
    }
    for (double w : W) {
        if (!std::isfinite(w)) {
            rep.member = false;
            rep.note = "weighted integrand overflowed along the tail";
            return rep;
        }
    }
    const double floor = 1e-280 * (total + 1e-280);
    double ratio = 0.0;
    bool stabilized = true;
    for (int j = 1; j < kWindows; ++j) {
        if (W[j] <= floor && W[j - 1] <= floor) continue; // fully decayed
        if (W[j - 1] <= floor) {
            stabilized = false;
            ratio = std::max(ratio, 10.0);
            continue;
        }
        ratio = std::max(ratio, W[j] / W[j - 1]);
    }
    // convert the doubling-window ratio to a per-decade ratio
    rep.decay_ratio = (ratio > 0.0) ? std::pow(ratio, 3.321928094887362) : 0.0;
    if (W[kWindows - 1] > 1e-7 * (total + 1e-300)) stabilized = false;
    rep.member = stabilized && rep.decay_ratio < 0.9;
    return rep;
}

const std::vector<CatalogEntry>& catalog() {
    using complexfn::log_gamma;
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> v;
        v.push_back(CatalogEntry{
            "exp",
            MellinImage([](cplx s) { return std::exp(log_gamma(s)); }, 0.5, {0.0, 0.0},
                        "exp"),
            [](double x) { return cplx(std::exp(-x), 0.0); },
            {0.0, 1.0},
            "f(x) = e^{-x}, image Gamma(s)"});
        v.push_back(CatalogEntry{
            "k0",
            MellinImage([](cplx s) { return std::exp(2.0 * log_gamma(s)); }, 0.5,
                        {0.0, 0.0}, "k0"),
            [](double x) {
                return 2.0 * complexfn::bessel_k(0.0, 2.0 * std::sqrt(x));
            },
            {0.0, 1.0},
            "f(x) = 2 K0(2 sqrt x), image Gamma(s)^2"});
        v.push_back(CatalogEntry{
            "inv1p",
            MellinImage(
                [](cplx s) -> cplx {
                    if (std::abs(s.imag()) > 220.0) return 0.0; // sin overflow guard
                    return kPi / std::sin(kPi * s);
                },
                0.5, {0.0, 0.0}, "inv1p"),
            [](double x) { return cplx(1.0 / (1.0 + x), 0.0); },
            {0.0, 1.0},
            "f(x) = 1/(1+x), image pi/sin(pi s)"});
        v.push_back(CatalogEntry{
            "gauss",
            MellinImage([](cplx s) { return 0.5 * std::exp(log_gamma(0.5 * s)); }, 0.5,
                        {0.0, 0.0}, "gauss"),
            [](double x) { return cplx(std::exp(-x * x), 0.0); },
            {0.0, 1.0},
            "f(x) = e^{-x^2}, image Gamma(s/2)/2"});
        return v;
    }();
    return entries;
}

const CatalogEntry* find_catalog_entry(std::string_view name) {
    for (const auto& e : catalog()) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

} // namespace indexlab::mellin
