#include "indexlab/quad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "gauss_nodes.hpp"

namespace indexlab::quad {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPanelWidth = 2.0;   // line panels, in Im s
constexpr double kNoiseFloor = 5e-15; // relative to the largest panel

// C-infinity step: 1 for xi <= 0, 0 for xi >= 1.
double smooth_step(double xi) {
    if (xi <= 0.0) return 1.0;
    if (xi >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / xi);
    const double b = std::exp(-1.0 / (1.0 - xi));
    return b / (a + b);
}

double taper_weight(double u, double T) { return smooth_step((std::abs(u) - T) / T); }

struct CheckedFn {
    const std::function<cplx(double)>& f;
    cplx operator()(double u) const {
        const cplx v = f(u);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NonConvergenceError("line integrand returned a non-finite value");
        return v;
    }
};

// One side of a line integral: panels [j D, (j+1) D] of g(sign * u).
class SidePanels {
public:
    SidePanels(const std::function<cplx(double)>& g, double sign,
               const QuadratureControl& ctl)
        : g_(g), sign_(sign), ctl_(ctl) {}

    // Ensure panels cover [0, T]; returns false when a side is exhausted
    // below the noise floor.
    void extend_to(double T) {
        const int want = static_cast<int>(std::ceil(T / kPanelWidth));
        while (static_cast<int>(mags_.size()) < want) add_panel();
    }

    cplx sum_to(double T) const {
        // Plain partial sum of whole panels below T (T is a panel edge).
        const int n = std::min<int>(static_cast<int>(std::round(T / kPanelWidth)),
                                    static_cast<int>(values_.size()));
        cplx s = 0.0;
        for (int j = 0; j < n; ++j) s += values_[j];
        return s;
    }

    int panel_count() const { return static_cast<int>(values_.size()); }
    double scale() const { return scale_; }

    // Geometric tail estimate past panel edge T; +inf when the decay ratio
    // gives no usable bound.
    double tail_estimate(double T) const {
        const int n = static_cast<int>(std::round(T / kPanelWidth));
        if (n < 2 || n > static_cast<int>(mags_.size())) return HUGE_VAL;
        const double last = mags_[n - 1], prev = mags_[n - 2];
        if (last <= kNoiseFloor * scale_) return 0.0;
        if (prev <= 0.0) return HUGE_VAL;
        double r = last / prev;
        if (r >= 0.95) return HUGE_VAL;
        return last * r / (1.0 - r);
    }

    bool slow_decay(double T) const {
        const int n = static_cast<int>(std::round(T / kPanelWidth));
        if (n < 4 || n > static_cast<int>(mags_.size())) return false;
        int slow = 0;
        for (int j = n - 3; j < n; ++j) {
            if (mags_[j] > kNoiseFloor * scale_ && mags_[j] >= 0.70 * mags_[j - 1]) ++slow;
        }
        return slow == 3;
    }

    // Smoothly tapered roll contribution over [T, 2T].
    cplx roll(double T) const {
        auto wg = [&](double u) { return g_(sign_ * u) * taper_weight(u, T); };
        const int npan = static_cast<int>(std::ceil(T / kPanelWidth));
        cplx s = 0.0;
        for (int j = 0; j < npan; ++j) {
            const double lo = T + T * j / npan, hi = T + T * (j + 1) / npan;
            s += detail::gauss16_adaptive(wg, lo, hi, panel_tol(), ctl_.max_refinements);
        }
        return s;
    }

private:
    double panel_tol() const {
        return 0.25 * std::max(ctl_.abs_tol, ctl_.rel_tol * scale_) /
               (8.0 + static_cast<double>(mags_.size()));
    }

    void add_panel() {
        const int j = static_cast<int>(values_.size());
        const double lo = j * kPanelWidth, hi = lo + kPanelWidth;
        auto gi = [&](double u) { return g_(sign_ * u); };
        const cplx p =
            detail::gauss16_adaptive(gi, lo, hi, panel_tol(), ctl_.max_refinements);
        values_.push_back(p);
        mags_.push_back(std::abs(p));
        scale_ = std::max(scale_, mags_.back());
    }

    const std::function<cplx(double)>& g_;
    double sign_;
    const QuadratureControl& ctl_;
    std::vector<cplx> values_;
    std::vector<double> mags_;
    double scale_ = 0.0;
};

cplx integrate_line(const std::function<cplx(double)>& g_raw,
                    const QuadratureControl& ctl, bool symmetric,
                    std::string* diagnostic) {
    CheckedFn g{g_raw};
    std::function<cplx(double)> gc = [&g](double u) { return g(u); };
    SidePanels pos(gc, +1.0, ctl);
    SidePanels neg(gc, -1.0, ctl);
    std::ostringstream diag;

    auto total_at = [&](double T) {
        cplx s = pos.sum_to(T);
        s = symmetric ? 2.0 * s : s + neg.sum_to(T);
        return s;
    };

    double T = std::max(kPanelWidth, kPanelWidth *
                        std::ceil(ctl.initial_truncation / kPanelWidth));
    for (int step = 0; step <= ctl.max_truncation_steps; ++step) {
        pos.extend_to(T);
        if (!symmetric) neg.extend_to(T);
        double tail = pos.tail_estimate(T);
        if (symmetric) tail *= 2.0;
        else tail += neg.tail_estimate(T);
        if (tail < 0.5 * ctl.abs_tol) {
            if (diagnostic) {
                diag << "plain truncation T=" << T << " tail=" << tail;
                *diagnostic = diag.str();
            }
            return total_at(T);
        }
        if (pos.slow_decay(T) || (!symmetric && neg.slow_decay(T))) break;
        const double Tnext =
            kPanelWidth * std::ceil(T * ctl.truncation_growth / kPanelWidth);
        if (Tnext > ctl.improper_cap && step >= 2) break;
        T = Tnext;
    }

    // Improper stage: smooth-tapered truncations V(T_j), accepted on successive
    // agreement; algebraic tails are handled by Neville extrapolation of
    // V as a polynomial in 1/T to 1/T = 0.
    double Tj = kPanelWidth * std::ceil(std::max(24.0, std::min(T, ctl.improper_cap / 2.0)) /
                                        kPanelWidth);
    std::vector<double> xs;  // 1/T_j
    std::vector<cplx> vals;
    cplx prev_extrap = 0.0;
    bool have_extrap = false;
    diag << "tapered stage:";
    for (int j = 0; j < 12; ++j) {
        pos.extend_to(Tj);
        if (!symmetric) neg.extend_to(Tj);
        cplx v = pos.sum_to(Tj) + pos.roll(Tj);
        if (symmetric) v *= 2.0;
        else v += neg.sum_to(Tj) + neg.roll(Tj);
        xs.push_back(1.0 / Tj);
        vals.push_back(v);
        diag << " V(" << Tj << ")=" << std::abs(v) << ";";
        const std::size_t n = vals.size();
        if (n >= 2) {
            const double d = std::abs(vals[n - 1] - vals[n - 2]);
            if (d <= std::max(ctl.abs_tol, ctl.rel_tol * std::abs(v))) {
                if (diagnostic) {
                    diag << " converged";
                    *diagnostic = diag.str();
                }
                return v;
            }
        }
        if (n >= 4) {
            std::vector<cplx> nev = vals; // Neville tableau evaluated at 1/T = 0
            for (std::size_t k = 1; k < n; ++k) {
                for (std::size_t i = 0; i + k < n; ++i) {
                    nev[i] = (xs[i + k] * nev[i] - xs[i] * nev[i + 1]) /
                             (xs[i + k] - xs[i]);
                }
            }
            const cplx extrap = nev[0];
            if (have_extrap &&
                std::abs(extrap - prev_extrap) <=
                    std::max(ctl.abs_tol, ctl.rel_tol * std::abs(extrap))) {
                if (diagnostic) {
                    diag << " extrapolated";
                    *diagnostic = diag.str();
                }
                return extrap;
            }
            prev_extrap = extrap;
            have_extrap = true;
        }
        const double Tnext = std::min(ctl.improper_cap,
                                      kPanelWidth * std::ceil(Tj * 1.5 / kPanelWidth));
        if (Tnext <= Tj) break; // cap reached; do not re-evaluate the same window
        Tj = Tnext;
    }
    throw SlowDecayError("line integral tail failed to fall; " + diag.str());
}

} // namespace

void QuadratureControl::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw std::invalid_argument("QuadratureControl: tolerances must be > 0");
    if (!(initial_truncation > 0.0))
        throw std::invalid_argument("QuadratureControl: initial_truncation must be > 0");
    if (!(truncation_growth > 1.0) || !(truncation_growth <= 4.0))
        throw std::invalid_argument("QuadratureControl: growth must lie in (1, 4]");
    if (max_truncation_steps < 1 || max_refinements < 1)
        throw std::invalid_argument("QuadratureControl: step budgets must be >= 1");
    if (!(improper_cap >= initial_truncation))
        throw std::invalid_argument("QuadratureControl: improper_cap too small");
}

cplx integrate_semi_axis(const std::function<cplx(double)>& integrand,
                         const QuadratureControl& control) {
    control.validate();
    constexpr double kUMax = 6.5; // |t| stays inside double range

    auto F = [&](double u) -> cplx {
        const double e = 0.5 * kPi * std::sinh(u);
        if (e > 700.0) return 0.0; // integrand must be negligible there; checked below
        const double t = std::exp(e);
        const cplx v = integrand(t) * t * (0.5 * kPi * std::cosh(u));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NonConvergenceError("semi-axis integrand returned non-finite value");
        return v;
    };

    double h = 0.5;
    // Level 0: scan outward from 0.
    double scale = 0.0;
    cplx sum = 0.0;
    long kmin = 0, kmax = 0;
    {
        const cplx f0 = F(0.0);
        sum = f0;
        scale = std::abs(f0);
        auto scan = [&](int dir, long& kend) {
            int quiet = 0;
            int grow = 0;
            double prev = HUGE_VAL;
            for (long k = 1; k * h <= kUMax; ++k) {
                const cplx v = F(dir * k * h);
                sum += v;
                kend = dir * k;
                const double m = std::abs(v);
                scale = std::max(scale, m);
                const double cut = 1e-18 + 1e-4 * std::min(control.abs_tol,
                                                           control.rel_tol * (scale + 1e-300));
                if (m < cut) {
                    if (++quiet >= 4) return;
                } else {
                    quiet = 0;
                }
                grow = (m > prev && m > scale * 1e-6) ? grow + 1 : 0;
                if (grow >= 8 && k * h > 3.0) {
                    if (dir < 0)
                        throw EndpointSingularityError(
                            "semi-axis integrand fails to stabilize near t = 0");
                    throw NonConvergenceError(
                        "semi-axis integrand fails to decay at infinity");
                }
                prev = m;
            }
            if (quiet == 0 && scale > 0.0) {
                if (dir < 0)
                    throw EndpointSingularityError(
                        "semi-axis integrand still significant at the t = 0 cap");
                throw NonConvergenceError(
                    "semi-axis integrand still significant at the upper cap");
            }
        };
        scan(+1, kmax);
        scan(-1, kmin);
    }
    cplx S = sum * h;

    for (int level = 1; level <= control.max_refinements; ++level) {
        h *= 0.5;
        kmin *= 2;
        kmax *= 2;
        cplx add = 0.0;
        for (long k = kmin + 1; k <= kmax - 1; k += 2) add += F(k * h);
        // extend outward at the finer step while contributions persist
        auto extend = [&](int dir, long& kend) {
            int quiet = 0;
            for (long k = std::abs(kend) + 1; k * h <= kUMax; ++k) {
                const cplx v = F(dir * k * h);
                add += v;
                kend = dir * k;
                const double cut = 1e-18 + 1e-4 * std::min(control.abs_tol,
                                                           control.rel_tol * (scale + 1e-300));
                if (std::abs(v) < cut) {
                    if (++quiet >= 4) return;
                } else {
                    quiet = 0;
                }
            }
        };
        extend(+1, kmax);
        extend(-1, kmin);
        const cplx Snew = 0.5 * S + add * h;
        const double diff = std::abs(Snew - S);
        S = Snew;
        if (level >= 2 && diff <= std::max(control.abs_tol, control.rel_tol * std::abs(S)))
            return S;
    }
    throw NonConvergenceError("semi-axis quadrature exhausted refinement budget");
}

cplx integrate_vertical_line(const std::function<cplx(cplx)>& integrand,
                             const VerticalLine& line,
                             const QuadratureControl& control) {
    control.validate();
    if (!(line.pole_clearance > 1e-6))
        throw PoleError("vertical line requires pole clearance > 1e-6");
    const double c = line.abscissa;
    auto g = [&integrand, c](double t) { return integrand(cplx(c, t)); };
    std::string diag;
    const cplx v = integrate_line(g, control, /*symmetric=*/false, &diag);
    return v / (2.0 * kPi);
}

cplx integrate_symmetric_real_line(const std::function<cplx(double)>& integrand,
                                   const QuadratureControl& control) {
    control.validate();
    for (double u : {0.7, 1.9, 3.3}) {
        const cplx a = integrand(u), b = integrand(-u);
        const double s = std::max({std::abs(a), std::abs(b), 1e-290});
        if (std::abs(a - b) > 1e-9 * s)
            throw AsymmetryError("symmetric-line integrand failed the evenness check");
    }
    std::string diag;
    return integrate_line(integrand, control, /*symmetric=*/true, &diag);
}

} // namespace indexlab::quad
