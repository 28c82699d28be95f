#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "indexlab/complexfn.hpp"
#include "indexlab/mellin.hpp"
#include "indexlab/quad.hpp"
#include "oracles.hpp"

using namespace indexlab;
using namespace indexlab::mellin;
using complexfn::log_gamma;
using cplx = std::complex<double>;

namespace {
double rel(cplx a, cplx b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

MellinImage gamma_image(double c0 = 0.5) {
    return MellinImage([](cplx s) { return std::exp(log_gamma(s)); }, c0, {0.0, 0.0},
                       "gamma");
}

MellinImage gamma_sq_image(double c0 = 0.5) {
    return MellinImage([](cplx s) { return std::exp(2.0 * log_gamma(s)); }, c0,
                       {0.0, 0.0}, "gamma^2");
}
} // namespace

TEST_CASE("decay class admissibility") {
    CHECK_THROWS_AS(MellinImage([](cplx) { return cplx(0.0); }, 0.5, {-1.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(MellinImage([](cplx) { return cplx(0.0); }, 0.5, {0.0, -1.0}),
                    std::invalid_argument);
    CHECK_NOTHROW(MellinImage([](cplx) { return cplx(0.0); }, 0.5, {0.5, -0.25}));
}

TEST_CASE("eval_function on known pairs") {
    CHECK(rel(eval_function(gamma_image(), 1.0), cplx(std::exp(-1.0), 0.0)) < 1e-10);
    const MellinImage scaled(
        [](cplx s) { return std::exp(log_gamma(s) - s * std::log(2.0)); }, 0.5,
        {0.0, 0.0}, "gamma*2^-s");
    CHECK(rel(eval_function(scaled, 1.0), cplx(std::exp(-2.0), 0.0)) < 1e-10);
    const cplx want = 2.0 * oracles::bessel_k_cosh(0.0, 2.0);
    CHECK(rel(eval_function(gamma_sq_image(), 1.0), want) < 1e-10);
}

TEST_CASE("weighted norm values") {
    const MellinImage zero([](cplx) { return cplx(0.0); }, 0.5, {0.0, 0.0}, "zero");
    CHECK(weighted_norm(zero, 0.0, 0.0, 40.0).value == 0.0);

    // (1/2 pi) Int |Gamma(1/2 + it)| dt, frozen via |Gamma|^2 = pi/cosh(pi t)
    const auto plain = weighted_norm(gamma_image(), 0.0, 0.0, 60.0);
    CHECK(std::abs(plain.value - 0.47088777022187447) < 1e-9);
    CHECK_FALSE(plain.diverging);

    // truncated weighted norm of Gamma(s)^2 in the (1/2, 0) class at T = 40
    const auto heavy = weighted_norm(gamma_sq_image(), 0.5, 0.0, 40.0);
    CHECK(std::abs(heavy.value - 1.5925429835976484) < 1e-8);
    CHECK_FALSE(heavy.diverging);

    // growing weighted integrand trips the divergence flag
    const auto grow = weighted_norm(gamma_image(), 0.5, 0.25, 40.0);
    CHECK(grow.diverging);
}

TEST_CASE("weighted norm homogeneity") {
    const double alpha = -3.7;
    const MellinImage scaled(
        [alpha](cplx s) { return alpha * std::exp(log_gamma(s)); }, 0.5, {0.0, 0.0},
        "scaled");
    const double a = weighted_norm(scaled, 0.0, 0.0, 50.0).value;
    const double b = std::abs(alpha) * weighted_norm(gamma_image(), 0.0, 0.0, 50.0).value;
    CHECK(std::abs(a - b) < 1e-11 * std::max(1.0, b));
}

TEST_CASE("membership probes") {
    const auto bad = membership_estimate(gamma_image(), 0.5, -0.25);
    CHECK_FALSE(bad.member);
    const auto good = membership_estimate(gamma_sq_image(), 0.5, 0.0);
    CHECK(good.member);
    CHECK(good.decay_ratio < 0.9);
    const auto plain = membership_estimate(gamma_image(), 0.0, 0.0);
    CHECK(plain.member);
    // e^{-x} fails the c1 = 1/2 classes
    CHECK_FALSE(membership_estimate(gamma_image(), 0.5, 0.0).member);
}

TEST_CASE("definition-2 style inclusion") {
    // if (d1, d2) passes and 2 sign(d1-c1) + sign(d2-c2) >= 0 then (c1, c2) passes
    const auto d = membership_estimate(gamma_sq_image(), 0.5, 0.0);
    REQUIRE(d.member);
    const std::pair<double, double> weaker[] = {{0.0, 0.0}, {0.25, -0.5}, {0.5, -0.25}};
    for (const auto& [c1, c2] : weaker) {
        const int cond = 2 * ((0.5 > c1) - (0.5 < c1)) + ((0.0 > c2) - (0.0 < c2));
        REQUIRE(cond >= 0);
        CHECK(membership_estimate(gamma_sq_image(), c1, c2).member);
    }
}

TEST_CASE("catalog entries verify against their closed forms") {
    const auto& entries = catalog();
    REQUIRE(entries.size() == 4);
    for (const auto& e : entries) {
        for (int i = 0; i < 10; ++i) {
            const double x = 0.1 * std::pow(80.0, i / 9.0); // 0.1 .. 8
            const cplx via_line = eval_function(e.image, x);
            const cplx closed = e.point_function(x);
            CAPTURE(e.name);
            CAPTURE(x);
            CHECK(rel(via_line, closed) < 1e-8);
        }
    }
    CHECK(find_catalog_entry("exp") != nullptr);
    CHECK(find_catalog_entry("nope") == nullptr);
}

TEST_CASE("catalog pinned values") {
    const auto* exp_entry = find_catalog_entry("exp");
    REQUIRE(exp_entry);
    CHECK(rel(exp_entry->point_function(1e-9), cplx(1.0, 0.0)) < 1e-8);
    const auto* k0 = find_catalog_entry("k0");
    REQUIRE(k0);
    CHECK(rel(k0->point_function(1.0), cplx(0.22778774549906687, 0.0)) < 1e-11);
    const auto* inv1p = find_catalog_entry("inv1p");
    REQUIRE(inv1p);
    CHECK(rel(inv1p->point_function(1.0), cplx(0.5, 0.0)) < 1e-15);
}

TEST_CASE("forward Mellin quadrature reproduces the images") {
    for (const auto& e : catalog()) {
        for (double ts : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            const cplx s(e.image.abscissa, ts);
            auto integrand = [&](double t) {
                return e.point_function(t) * std::exp((s - 1.0) * std::log(t));
            };
            const cplx got = quad::integrate_semi_axis(integrand);
            CAPTURE(e.name);
            CAPTURE(ts);
            CHECK(rel(got, e.image.image(s)) < 1e-8);
        }
    }
}
