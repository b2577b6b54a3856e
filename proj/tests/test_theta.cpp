#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "entgauss/errors.hpp"
#include "entgauss/theta.hpp"
#include "oracles.hpp"

using entgauss::Regime;
using entgauss::theta::log_theta;
using entgauss::theta::theta_sandwich;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(log_theta(0.0), std::domain_error);
    CHECK_THROWS_AS(log_theta(-1.0), std::domain_error);
    CHECK_THROWS_AS(log_theta(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(log_theta(1.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(log_theta(1.0, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(theta_sandwich(0.0, Regime::large), std::domain_error);
}

TEST_CASE("term cap raises instead of truncating") {
    entgauss::theta::set_term_cap(3);
    CHECK_THROWS_AS(log_theta(kPi, 0.0, 1e-12), entgauss::ConvergenceError);
    entgauss::theta::set_term_cap(1'000'000);
    CHECK_NOTHROW(log_theta(kPi, 0.0, 1e-12));
}

TEST_CASE("large lambda collapses to the central term") {
    const auto t = log_theta(40.0, 0.0, 1e-14);
    // L = log(1 + 2e^-40 + ...) ~ 8.5e-18, dL -> 0 from below
    CHECK(t.L > 0.0);
    CHECK(t.L < 1e-16);
    CHECK(t.dL < 0.0);
    CHECK(t.dL > -1e-15);
}

TEST_CASE("value at lambda = pi against the series oracle") {
    const auto t = log_theta(kPi, 0.0, 1e-14);
    const double expect = static_cast<double>(oracle::log_theta(kPi));
    CHECK(t.L == doctest::Approx(expect).epsilon(1e-13));
    // frozen oracle digits
    CHECK(t.L == doctest::Approx(0.0829015200310547).epsilon(1e-12));
    CHECK(t.dL == doctest::Approx(-0.0795774715459477).epsilon(1e-12));
    CHECK(t.abs_error_bound <= 1e-14);
}

TEST_CASE("figure constants at lambda = 2.3") {
    const auto t = log_theta(2.3, 0.0, 1e-14);
    CHECK(t.L == doctest::Approx(0.18292118389531853).epsilon(1e-14));
    CHECK(t.dL == doctest::Approx(-0.16767111394330892).epsilon(1e-13));
}

TEST_CASE("poisson identity e^{L(1)} = sqrt(pi) e^{L(pi^2)} via direct sums") {
    const double lhs = static_cast<double>(oracle::log_theta(1.0L));
    const double rhs =
        0.5 * std::log(kPi) + static_cast<double>(oracle::log_theta(kPi * kPi));
    CHECK(std::exp(lhs) == doctest::Approx(std::exp(rhs)).epsilon(1e-12));
    // the transform branch must agree with the same identity
    const auto t = log_theta(1.0, 0.0, 1e-14);
    CHECK(t.L == doctest::Approx(lhs).epsilon(1e-13));
}

TEST_CASE("modular identity across the branch switch") {
    for (int k = 0; k < 100; ++k) {
        const double lam = 0.05 + (kPi - 0.05) * k / 99.0;
        const auto a = log_theta(lam, 0.0, 1e-13);
        const auto b = log_theta(kPi * kPi / lam, 0.0, 1e-13);
        const double lhs = std::exp(a.L);
        const double rhs = std::sqrt(kPi / lam) * std::exp(b.L);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
}

TEST_CASE("derivatives match centered finite differences") {
    // The FD reference itself carries truncation error (step^2/6)|L'''| ~
    // 1.7e-11/lambda^3, so the 1e-6 absolute comparison is meaningful only
    // for lambda >= ~0.05; below that the analytic oracle test is the
    // authoritative check.
    const double step = 1e-5;
    for (double lam : {0.05, 0.1, 0.5, 1.0, 2.0, kPi - 0.01, kPi + 0.01, 5.0, 10.0,
                       25.0, 50.0}) {
        const auto t = log_theta(lam, 0.0, 1e-13);
        const double fd = (log_theta(lam + step, 0.0, 1e-13).L -
                           log_theta(lam - step, 0.0, 1e-13).L) /
                          (2.0 * step);
        CHECK(std::abs(t.dL - fd) <= 1e-6);
        const double fd2 = (log_theta(lam + step, 0.0, 1e-13).dL -
                            log_theta(lam - step, 0.0, 1e-13).dL) /
                           (2.0 * step);
        CHECK(std::abs(t.d2L - fd2) <= 1e-5 * std::max(1.0, std::abs(t.d2L)));
    }
    for (double lam : {1e-3, 5e-3, 0.02}) {
        const auto t = log_theta(lam, 0.0, 1e-13);
        const double dL_ref = static_cast<double>(
            oracle::dlog_theta(static_cast<long double>(lam), 0.0L, 4000));
        CHECK(t.dL == doctest::Approx(dL_ref).epsilon(1e-11));
    }
}

TEST_CASE("derivative accuracy against the oracle for shifted lattices") {
    for (double a : {0.0, 0.25, 0.5, 0.75}) {
        for (double lam : {0.2, 0.7, 1.5, kPi, 4.0, 9.0}) {
            const auto t = log_theta(lam, a, 1e-13);
            const double L_ref =
                static_cast<double>(oracle::log_theta(lam, a));
            const double dL_ref =
                static_cast<double>(oracle::dlog_theta(lam, a));
            CHECK(t.L == doctest::Approx(L_ref).epsilon(1e-12));
            CHECK(t.dL == doctest::Approx(dL_ref).epsilon(1e-11));
        }
    }
}

TEST_CASE("convexity and monotonicity on a fine grid") {
    for (double lam0 : {0.01, 0.4, 1.0, 3.0, 8.0}) {
        const double s = 1e-3;
        const double l0 = log_theta(lam0, 0.0, 1e-13).L;
        const double l1 = log_theta(lam0 + s, 0.0, 1e-13).L;
        const double l2 = log_theta(lam0 + 2 * s, 0.0, 1e-13).L;
        CHECK(l2 - 2 * l1 + l0 >= -1e-6);
        CHECK(l1 < l0);  // strictly decreasing
    }
    for (double lam : {0.05, 0.3, 1.0, kPi, 6.0, 20.0}) {
        const auto t = log_theta(lam, 0.0, 1e-13);
        CHECK(t.dL < 0.0);
        CHECK(t.d2L >= 0.0);
    }
}

TEST_CASE("shift dominance L_0 > L_{1/2}") {
    // strict in doubles once 4 e^{-pi^2/lambda} clears the ulp of L, i.e.
    // lambda >= ~0.3; below that the difference underflows and only >= holds
    for (double lam : {0.3, 0.8, 2.0, kPi, 5.0, 12.0}) {
        const auto a0 = log_theta(lam, 0.0, 1e-13);
        const auto ah = log_theta(lam, 0.5, 1e-13);
        CHECK(a0.L > ah.L);
    }
    for (double lam : {0.02, 0.1}) {
        CHECK(log_theta(lam, 0.0, 1e-13).L >= log_theta(lam, 0.5, 1e-13).L);
    }
}

TEST_CASE("sandwich bounds: spec arithmetic") {
    const auto large = theta_sandwich(10.0, Regime::large);
    CHECK(large.lower == doctest::Approx(1.0 + 2.0 * std::exp(-10.0)).epsilon(1e-15));
    CHECK(large.upper ==
          doctest::Approx(1.0 + 2.0 * std::exp(-10.0) +
                          std::sqrt(kPi / 10.0) * std::exp(-10.0))
              .epsilon(1e-15));

    const auto small = theta_sandwich(0.1, Regime::small);
    const double lo = std::sqrt(10.0 * kPi) * (1.0 + 2.0 * std::exp(-10.0 * kPi * kPi));
    CHECK(small.lower == doctest::Approx(lo).epsilon(1e-15));
    CHECK(small.upper ==
          doctest::Approx(lo + std::exp(-10.0 * kPi * kPi)).epsilon(1e-15));
}

TEST_CASE("sandwich bounds contain e^L in both regimes for any lambda") {
    for (double lam : {0.02, 0.1, 0.5, 1.0, 2.0, kPi, 4.0, 8.0, 20.0}) {
        const double eL = std::exp(log_theta(lam, 0.0, 1e-13).L);
        for (auto regime : {Regime::small, Regime::large}) {
            const auto b = theta_sandwich(lam, regime);
            CHECK(b.lower <= b.upper);
            CHECK(eL >= b.lower * (1.0 - 1e-12));
            CHECK(eL <= b.upper * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("error bound is certified against the oracle") {
    for (double lam : {0.07, 0.9, kPi, 6.0}) {
        for (double tol : {1e-6, 1e-10, 1e-13}) {
            const auto t = log_theta(lam, 0.0, tol);
            CHECK(t.abs_error_bound <= tol);
            const double ref = static_cast<double>(oracle::log_theta(lam));
            CHECK(std::abs(t.L - ref) <= tol);
        }
    }
}
