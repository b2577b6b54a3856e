#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "entgauss/distribution.hpp"
#include "entgauss/errors.hpp"
#include "entgauss/theta.hpp"
#include "oracles.hpp"

using entgauss::DiscreteDistribution;
using entgauss::materialize;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(DiscreteDistribution({1.0, 1.0}, {0.5, 0.5}), std::domain_error);
    CHECK_THROWS_AS(DiscreteDistribution({1.0, 0.0}, {0.5, 0.5}), std::domain_error);
    CHECK_THROWS_AS(DiscreteDistribution({0.0, 1.0}, {0.5, 0.6}), std::domain_error);
    CHECK_THROWS_AS(DiscreteDistribution({0.0, 1.0}, {1.1, -0.1}), std::domain_error);
    CHECK_THROWS_AS(DiscreteDistribution({}, {}), std::domain_error);
    CHECK_NOTHROW(DiscreteDistribution({-1.0, 1.0}, {0.5, 0.5}));
}

TEST_CASE("entropy basics") {
    CHECK(DiscreteDistribution({0.0}, {1.0}).entropy() == 0.0);
    CHECK(DiscreteDistribution({-1.0, 1.0}, {0.5, 0.5}).entropy() ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("moments basics") {
    const DiscreteDistribution bpsk({-1.0, 1.0}, {0.5, 0.5});
    const auto m = bpsk.moments();
    CHECK(m.mean == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(m.second_moment == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("min distance") {
    CHECK(DiscreteDistribution({-1.0, 1.0}, {0.5, 0.5}).min_distance() == 2.0);
    CHECK(DiscreteDistribution({0.0, 0.5, 2.0}, {0.25, 0.25, 0.5}).min_distance() ==
          0.5);
    CHECK(DiscreteDistribution({0.0}, {1.0}).min_distance() ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("materialize: spec validation and trivial limits") {
    CHECK_THROWS_AS(materialize({0.0, 1.0, 1e-16}), std::domain_error);
    CHECK_THROWS_AS(materialize({1.0, -1.0, 1e-16}), std::domain_error);
    CHECK_THROWS_AS(materialize({1.0, 1.0, 1e-2}), std::domain_error);
    CHECK_THROWS_AS(materialize({1.0, 1.0, 0.0}), std::domain_error);

    // lambda -> inf: single atom at 0
    const auto d = materialize({1.0, 900.0, 1e-16});
    CHECK(d.size() == 1);
    CHECK(d.atoms()[0] == 0.0);
    CHECK(d.probs()[0] == 1.0);
}

TEST_CASE("materialize: central mass at lambda = pi against the series oracle") {
    const auto d = materialize({1.0, kPi, 1e-16});
    const double p0_ref =
        static_cast<double>(1.0L / oracle::lattice_sums(kPi, 0.0L).S0);
    const std::size_t mid = d.size() / 2;
    CHECK(d.atoms()[mid] == 0.0);
    CHECK(d.probs()[mid] == doctest::Approx(p0_ref).epsilon(1e-13));
    // frozen oracle value
    CHECK(d.probs()[mid] == doctest::Approx(0.92044178783559098).epsilon(1e-12));
}

TEST_CASE("materialize: symmetry is exact and spacing equals beta") {
    const auto d = materialize({0.7, 0.9, 1e-16});
    const std::size_t n = d.size();
    REQUIRE(n % 2 == 1);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(d.probs()[i] == d.probs()[n - 1 - i]);
        CHECK(d.atoms()[i] == -d.atoms()[n - 1 - i]);
    }
    // atom positions are rounded products beta*i, so the minimum gap can sit
    // a few ulps under beta; exact equality holds for dyadic spacings
    CHECK(d.min_distance() == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(materialize({0.75, 0.9, 1e-16}).min_distance() == 0.75);
}

TEST_CASE("materialize: closed forms for entropy and second moment") {
    for (double lam : {0.5, 1.0, kPi, 5.0}) {
        const double beta = 0.37;
        const auto d = materialize({beta, lam, 1e-16});
        const auto t = entgauss::theta::log_theta(lam, 0.0, 1e-15);
        const double h_expect = t.L - lam * t.dL;
        const double m2_expect = -beta * beta * t.dL;
        CHECK(d.entropy() == doctest::Approx(h_expect).epsilon(1e-8));
        CHECK(d.moments().second_moment == doctest::Approx(m2_expect).epsilon(1e-8));
        CHECK(std::abs(d.moments().mean) <= 1e-15);
    }
}

TEST_CASE("materialize: truncated mass is within budget") {
    for (double tail_eps : {1e-6, 1e-10}) {
        const double lam = 0.8;
        const auto d = materialize({1.0, lam, tail_eps});
        const int J = static_cast<int>(d.size() / 2);
        const auto s = oracle::lattice_sums(lam, 0.0L);
        long double dropped = 0.0L;
        for (int j = J + 1; j <= 400; ++j) dropped += 2.0L * std::exp(-lam * j * j);
        CHECK(static_cast<double>(dropped / s.S0) < tail_eps);
    }
}

TEST_CASE("sampling: determinism and trivial cases") {
    const DiscreteDistribution single({3.5}, {1.0});
    const auto s = single.sample(100, 7);
    for (double x : s) CHECK(x == 3.5);

    const DiscreteDistribution bpsk({-1.0, 1.0}, {0.5, 0.5});
    const auto a = bpsk.sample(1000, 42);
    const auto b = bpsk.sample(1000, 42);
    CHECK(a == b);
    const auto c = bpsk.sample(1000, 43);
    CHECK(a != c);
}

TEST_CASE("sampling: CLT bound on the mean") {
    const DiscreteDistribution bpsk({-1.0, 1.0}, {0.5, 0.5});
    const std::size_t n = 1'000'000;
    const auto s = bpsk.sample(n, 20260810);
    double mean = 0.0;
    for (double x : s) mean += x;
    mean /= static_cast<double>(n);
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("sampling: empirical pmf close in total variation") {
    const auto d = oracle::random_dist(6, 99);
    const std::size_t n = 200'000;
    const auto s = d.sample(n, 5);
    std::map<double, std::size_t> counts;
    for (double x : s) ++counts[x];
    double tv = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double emp =
            static_cast<double>(counts[d.atoms()[i]]) / static_cast<double>(n);
        tv += std::abs(emp - d.probs()[i]);
    }
    tv *= 0.5;
    CHECK(tv < 5.0 * std::sqrt(static_cast<double>(d.size()) / static_cast<double>(n)));
}
