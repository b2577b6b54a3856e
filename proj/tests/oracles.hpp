#pragma once

// Test-only oracles, kept independent of the library's evaluation paths.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "entgauss/distribution.hpp"

namespace oracle {

// Brute-force lattice sums in long double: S_k = sum (j+a)^{2k} e^{-lam (j+a)^2}.
struct LatticeSums {
    long double S0 = 0.0L, S1 = 0.0L, S2 = 0.0L;
};

inline LatticeSums lattice_sums(long double lam, long double a, int jmax = 400) {
    LatticeSums s;
    for (int j = -jmax; j <= jmax; ++j) {
        const long double v = (j + a) * (j + a);
        const long double t = std::exp(-lam * v);
        s.S0 += t;
        s.S1 += v * t;
        s.S2 += v * v * t;
    }
    return s;
}

inline long double log_theta(long double lam, long double a = 0.0L, int jmax = 400) {
    return std::log(lattice_sums(lam, a, jmax).S0);
}

inline long double dlog_theta(long double lam, long double a = 0.0L, int jmax = 400) {
    const auto s = lattice_sums(lam, a, jmax);
    return -s.S1 / s.S0;
}

// Bisection oracle for the secondary Lambert branch: x e^x = y on [-700, -1].
// x e^x decreases from 0- to -1/e over that interval.
inline double lambert_wm1_bisect(double y) {
    double lo = -700.0, hi = -1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid * std::exp(mid) > y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Seeded random test distributions with n atoms (gaps in [0.4, 1.9], probs
// bounded away from zero).
inline entgauss::DiscreteDistribution random_dist(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto u = [&]() { return (gen() >> 11) * 0x1.0p-53; };
    std::vector<double> atoms(static_cast<std::size_t>(n));
    double x = 0.0;
    for (int i = 0; i < n; ++i) {
        atoms[static_cast<std::size_t>(i)] = x;
        x += 0.4 + 1.5 * u();
    }
    const double mid = atoms[static_cast<std::size_t>(n) / 2];
    for (double& a : atoms) a -= mid;
    std::vector<double> w(static_cast<std::size_t>(n));
    for (double& wi : w) wi = 0.08 + u();
    return entgauss::DiscreteDistribution::from_weights(std::move(atoms), std::move(w));
}

}  // namespace oracle
