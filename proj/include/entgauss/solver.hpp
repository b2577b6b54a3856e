#pragma once

#include "entgauss/distribution.hpp"
#include "entgauss/theta.hpp"

namespace entgauss::solver {

// Root of h = L(lambda) - lambda L'(lambda) plus the derived lattice spacing.
// All entropies are in nats.
struct SolveResult {
    double h_target;
    double lambda_h;
    double d_h;               // 1/sqrt(-L'(lambda_h))
    double entropy_residual;  // g(lambda_h) - h
    double variance_check;    // second moment of the materialized N^{d_h}(lambda_h)
    bool below_threshold;     // h < L(pi) - pi L'(pi)
};

// g(lambda) = L - lambda L' is strictly decreasing, so the root is unique.
// Brackets come from the regime seeds (continuum estimate on the left,
// Lambert-W seed on the right), then safeguarded Newton.
SolveResult solve(double h_nats, double tol = 1e-12);

// L(pi) - pi L'(pi): the entropy at which the lattice regime crosses over
// (about 0.48 bits).
double threshold_entropy();

// Closed approximations of d_h: sqrt((1/h) log(2/h)) below the threshold,
// sqrt(2 pi e) e^{-h} above. Mismatched regimes are permitted (and
// inaccurate); the small form is NaN for h >= 2 where log(2/h) < 0.
double d_h_approx(double h_nats, Regime regime);

// d_h^2 / 8, the decay rate of the entropy-capacity gap in snr.
double gap_exponent(double h_nats);

// Regime forms of the exponent; identical to d_h_approx(h, regime)^2 / 8.
double gap_exponent_approx(double h_nats, Regime regime);

// Secondary real branch of Lambert W: x <= -1 with x e^x = y for
// y in (-1/e, 0). Seeded by log(-y) - log(-log(-y)), Halley-refined.
double lambert_w_minus1(double y);

// Root of L_a(lambda) - lambda L_a'(lambda) = h for a general lattice
// shift a in [0,1). Throws BracketError when h is below the shifted
// lattice's entropy range (e.g. h <= log 2 for a = 1/2).
double solve_lattice_entropy(double h_nats, double shift_a, double tol = 1e-12);

// The capacity-achieving discrete Gaussian parameters for a solve result.
DiscreteGaussianSpec capacity_spec(const SolveResult& r, double tail_eps = 1e-16);

}  // namespace entgauss::solver
