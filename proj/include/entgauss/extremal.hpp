#pragma once

#include <cstdint>
#include <optional>

#include "entgauss/distribution.hpp"

namespace entgauss::extremal {

struct SearchReport {
    double h_target;  // nats
    double best_dmin_found;
    double d_h_reference;
    std::uint64_t trials;
    std::optional<DiscreteDistribution> best_candidate;  // empty if trials == 0
    std::uint64_t seed;
};

// Random-restart local search for the largest minimum distance among
// n_atoms-point distributions with entropy h and unit second moment.
// Candidates are projected onto the constraint set after every move
// (probability tempering for the entropy, atom rescaling for the moment).
// Trials run from split seeds, so the aggregate is deterministic under
// concurrent execution.
SearchReport dmin_search(double h_nats, int n_atoms, std::uint64_t trials,
                         std::uint64_t seed);

struct DualityCheck {
    double var_h;    // -L'(lambda_h), second moment of the unit-spacing lattice
    double product;  // var_h * d_h^2; equals 1 up to solver tolerance
};

DualityCheck duality_check(double h_nats);

// var at the root of L_a - lambda L_a' = h for a = 0 and a = 1/2. For
// h <= log 2 the half-shift lattice cannot reach entropy h (its entropy
// range is (log 2, inf)); the limiting variance 1/4 is reported and
// half_shift_clamped is set. Above log 2 the gap var_a_half - var_a0 shrinks
// like e^{-pi^2/lambda} and falls below double resolution near h ~ 2 bits,
// so the comparison is certified in extended precision; gap_log10 reports
// the certified gap magnitude.
struct ShiftComparison {
    double var_a0;
    double var_a_half;
    bool half_shift_clamped;
    double gap_log10;        // log10(var_a_half - var_a0)
    bool strict_inequality;  // var_a0 < var_a_half, certified
};

ShiftComparison shift_comparison(double h_nats);

// Slopes of the tangents to L_0 and L_{1/2} sharing y-intercept h. The
// slopes are the negated lattice variances, so the certification path is
// shared with shift_comparison.
struct TangentComparison {
    double lambda_f;  // tangency point on L_0
    double lambda_g;  // tangency point on L_{1/2}
    double slope_f;
    double slope_g;
    bool half_shift_clamped;
    bool strict_inequality;  // |slope_f| < |slope_g|, certified
};

TangentComparison tangent_lemma_check(double h_nats);

// Search projection, exposed for testing: probabilities tempered
// (p_i -> p_i^t, t solved so the entropy equals h), atoms rescaled to unit
// second moment. Entropy depends only on the probabilities and the rescale
// only on the atoms, so one pass lands on the constraint set.
DiscreteDistribution project_to_constraints(const DiscreteDistribution& d,
                                            double h_nats);

// Total-variation distance after aligning the candidate's modal atom with the
// reference's and matching atoms to the nearest lattice site (reflection
// tried both ways).
double aligned_tv_distance(const DiscreteDistribution& candidate,
                           const DiscreteDistribution& reference);

}  // namespace entgauss::extremal
