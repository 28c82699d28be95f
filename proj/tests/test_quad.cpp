#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "indexlab/complexfn.hpp"
#include "indexlab/quad.hpp"
#include "oracles.hpp"

using namespace indexlab;
using namespace indexlab::quad;
using cplx = std::complex<double>;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;

double rel(cplx a, cplx b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}
} // namespace

TEST_CASE("control validation") {
    QuadratureControl ok{};
    CHECK_NOTHROW(ok.validate());
    QuadratureControl bad_growth{};
    bad_growth.truncation_growth = 5.0;
    CHECK_THROWS_AS(bad_growth.validate(), std::invalid_argument);
    QuadratureControl bad_tol{};
    bad_tol.abs_tol = 0.0;
    CHECK_THROWS_AS(bad_tol.validate(), std::invalid_argument);
}

TEST_CASE("semi-axis engine on closed-form integrands") {
    CHECK(rel(integrate_semi_axis([](double t) { return cplx(std::exp(-t), 0.0); }),
              cplx(1.0, 0.0)) < 1e-12);
    CHECK(rel(integrate_semi_axis(
                  [](double t) { return cplx(std::exp(-t) / std::sqrt(t), 0.0); }),
              cplx(kSqrtPi, 0.0)) < 1e-12);
    // e^{-1/t - t} t^{-1/2} = sqrt(pi) e^{-2}
    CHECK(rel(integrate_semi_axis([](double t) {
                  return cplx(std::exp(-1.0 / t - t) / std::sqrt(t), 0.0);
              }),
              cplx(kSqrtPi * std::exp(-2.0), 0.0)) < 1e-12);
}

TEST_CASE("semi-axis endpoint and tail failures") {
    CHECK_THROWS_AS(
        integrate_semi_axis([](double t) { return cplx(std::exp(-t) / t, 0.0); }),
        EndpointSingularityError);
    CHECK_THROWS_AS(
        integrate_semi_axis([](double t) { return cplx(1.0 / (1.0 + t), 0.0); }),
        NonConvergenceError);
}

TEST_CASE("vertical line: gamma image pairs") {
    auto gamma_pow = [](double x) {
        return [x](cplx s) {
            return std::exp(complexfn::log_gamma(s) - s * std::log(x));
        };
    };
    CHECK(rel(integrate_vertical_line(gamma_pow(1.0), {0.5, 0.5}),
              cplx(std::exp(-1.0), 0.0)) < 1e-10);
    CHECK(rel(integrate_vertical_line(gamma_pow(2.0), {0.5, 0.5}),
              cplx(std::exp(-2.0), 0.0)) < 1e-10);
    // Gamma(s)^2 at x = 1 reproduces 2 K0(2); oracle is the cosh integral
    auto g2 = [](cplx s) { return std::exp(2.0 * complexfn::log_gamma(s)); };
    const cplx want = 2.0 * oracles::bessel_k_cosh(0.0, 2.0);
    CHECK(rel(integrate_vertical_line(g2, {0.5, 0.5}), want) < 1e-10);
}

TEST_CASE("vertical line: contour shift invariance") {
    auto make = [](double c0) {
        return [](cplx s) { return std::exp(complexfn::log_gamma(s)); };
        (void)c0;
    };
    const cplx a = integrate_vertical_line(make(0.3), {0.3, 0.3});
    const cplx b = integrate_vertical_line(make(0.7), {0.7, 0.3});
    CHECK(std::abs(a - b) < 1e-9);
}

TEST_CASE("vertical line: pole clearance contract") {
    auto g = [](cplx s) { return std::exp(complexfn::log_gamma(s)); };
    CHECK_THROWS_AS(integrate_vertical_line(g, {0.5, 1e-7}), PoleError);
}

TEST_CASE("engine linearity") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    auto f = [](double t) { return cplx(std::exp(-t), 0.0); };
    auto g = [](double t) { return cplx(std::exp(-2.0 * t) * t, 0.0); };
    for (int i = 0; i < 5; ++i) {
        const double al = coef(rng), be = coef(rng);
        auto combo = [&](double t) { return al * f(t) + be * g(t); };
        const cplx lhs = integrate_semi_axis(combo);
        const cplx rhs = al * integrate_semi_axis(f) + be * integrate_semi_axis(g);
        CHECK(std::abs(lhs - rhs) < 1e-11);
    }
}

TEST_CASE("symmetric line: gaussian and algebraic tails") {
    CHECK(rel(integrate_symmetric_real_line(
                  [](double t) { return cplx(std::exp(-t * t), 0.0); }),
              cplx(kSqrtPi, 0.0)) < 1e-11);
    // algebraic tail needs the extrapolated improper stage
    const cplx lorentz = integrate_symmetric_real_line(
        [](double t) { return cplx(1.0 / (1.0 + t * t), 0.0); });
    CHECK(rel(lorentz, cplx(kPi, 0.0)) < 1e-7);
}

TEST_CASE("symmetric line: index integrand against the closed form") {
    QuadratureControl ctl;
    ctl.initial_truncation = 12.0;
    ctl.abs_tol = 1e-8;
    ctl.rel_tol = 1e-8;
    auto integrand = [](double tau) -> cplx {
        if (tau == 0.0) return 0.0;
        bool u1 = false, u2 = false;
        const cplx k1 = complexfn::bessel_k(cplx(0.0, tau), 0.5, {}, &u1);
        const cplx k2 = complexfn::bessel_k(cplx(0.0, 2.0 * tau), 2.0, {}, &u2);
        if (u1 || u2) return 0.0;
        return tau * std::sinh(kPi * tau) * k1 * k2;
    };
    const cplx got = integrate_symmetric_real_line(integrand, ctl);
    const double want = 0.5 * std::pow(kPi, 1.5) * std::exp(-1.5);
    CHECK(rel(got, cplx(want, 0.0)) < 1e-6);
}

TEST_CASE("symmetric line: evenness spot check") {
    CHECK_THROWS_AS(integrate_symmetric_real_line(
                        [](double t) { return cplx(std::exp(-t * t) * (1.0 + 0.1 * t),
                                                   0.0); }),
                    AsymmetryError);
}

TEST_CASE("tolerance honesty") {
    QuadratureControl base;
    base.abs_tol = 1e-9;
    base.rel_tol = 1e-8;
    QuadratureControl half = base;
    half.abs_tol *= 0.5;
    half.rel_tol *= 0.5;

    auto semi = [](double t) { return cplx(std::exp(-t) / std::sqrt(t), 0.0); };
    CHECK(std::abs(integrate_semi_axis(semi, base) - integrate_semi_axis(semi, half)) <
          base.abs_tol + base.rel_tol * kSqrtPi);

    auto gline = [](cplx s) { return std::exp(complexfn::log_gamma(s)); };
    const cplx a = integrate_vertical_line(gline, {0.5, 0.5}, base);
    const cplx b = integrate_vertical_line(gline, {0.5, 0.5}, half);
    CHECK(std::abs(a - b) < base.abs_tol + base.rel_tol * std::abs(a));

    auto sym = [](double t) { return cplx(std::exp(-t * t), 0.0); };
    const cplx c = integrate_symmetric_real_line(sym, base);
    const cplx d = integrate_symmetric_real_line(sym, half);
    CHECK(std::abs(c - d) < base.abs_tol + base.rel_tol * std::abs(c));
}
