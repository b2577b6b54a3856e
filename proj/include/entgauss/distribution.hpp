#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace entgauss {

struct Moments {
    double mean;
    double second_moment;
};

// Finite discrete distribution on the real line: strictly increasing atoms,
// positive probabilities normalized to 1.
class DiscreteDistribution {
public:
    // Requires |sum(probs) - 1| <= 1e-12; stores exactly renormalized values.
    DiscreteDistribution(std::vector<double> atoms, std::vector<double> probs);

    // Builds from positive weights of any scale.
    static DiscreteDistribution from_weights(std::vector<double> atoms,
                                             std::vector<double> weights);

    const std::vector<double>& atoms() const { return atoms_; }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t size() const { return atoms_.size(); }

    // Shannon entropy in nats, summed in ascending-probability order.
    double entropy() const;
    Moments moments() const;

    // Smallest gap between consecutive atoms; +inf for a single atom (the
    // infimum over an empty pair set).
    double min_distance() const;

    // i.i.d. draws by inverse CDF; deterministic for a given seed.
    std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

private:
    DiscreteDistribution() = default;
    std::vector<double> atoms_;
    std::vector<double> probs_;
};

// Parameters of the discrete Gaussian N^beta(lambda) prior to materialization.
struct DiscreteGaussianSpec {
    double beta;              // lattice spacing
    double lambda;            // Gibbs parameter
    double tail_eps = 1e-16;  // truncation mass budget, before renormalization
};

// Realizes N^beta(lambda) as a finite symmetric distribution on
// {beta*i : |i| <= J} with J chosen so the dropped mass is below tail_eps;
// probabilities are renormalized exactly after truncation.
DiscreteDistribution materialize(const DiscreteGaussianSpec& spec);

}  // namespace entgauss
