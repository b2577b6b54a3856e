#include "entgauss/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "entgauss/errors.hpp"
#include "entgauss/rng.hpp"
#include "entgauss/theta.hpp"

namespace entgauss {

namespace {

// Kahan accumulator; the materialized lattices can run to ~1e5 atoms.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

void validate_atoms(const std::vector<double>& atoms) {
    if (atoms.empty())
        throw std::domain_error("DiscreteDistribution: no atoms");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!std::isfinite(atoms[i]))
            throw std::domain_error("DiscreteDistribution: atoms must be finite");
        if (i > 0 && !(atoms[i] > atoms[i - 1]))
            throw std::domain_error(
                "DiscreteDistribution: atoms must be strictly increasing");
    }
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> atoms,
                                           std::vector<double> probs) {
    if (atoms.size() != probs.size())
        throw std::domain_error("DiscreteDistribution: atoms/probs length mismatch");
    validate_atoms(atoms);
    Kahan total;
    for (double p : probs) {
        if (!(p > 0.0) || !std::isfinite(p))
            throw std::domain_error("DiscreteDistribution: probabilities must be positive");
        total.add(p);
    }
    if (std::abs(total.sum - 1.0) > 1e-12)
        throw std::domain_error("DiscreteDistribution: probabilities sum to " +
                                std::to_string(total.sum) + ", expected 1");
    for (double& p : probs) p /= total.sum;
    atoms_ = std::move(atoms);
    probs_ = std::move(probs);
}

DiscreteDistribution DiscreteDistribution::from_weights(std::vector<double> atoms,
                                                        std::vector<double> weights) {
    if (atoms.size() != weights.size())
        throw std::domain_error("from_weights: atoms/weights length mismatch");
    validate_atoms(atoms);
    Kahan total;
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::domain_error("from_weights: weights must be positive");
        total.add(w);
    }
    DiscreteDistribution d;
    d.atoms_ = std::move(atoms);
    d.probs_ = std::move(weights);
    for (double& p : d.probs_) p /= total.sum;
    return d;
}

double DiscreteDistribution::entropy() const {
    std::vector<double> p = probs_;
    std::sort(p.begin(), p.end());
    Kahan h;
    for (double pi : p) h.add(-pi * std::log(pi));
    return h.sum;
}

Moments DiscreteDistribution::moments() const {
    Kahan mean, second;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        mean.add(probs_[i] * atoms_[i]);
        second.add(probs_[i] * atoms_[i] * atoms_[i]);
    }
    return {mean.sum, second.sum};
}

double DiscreteDistribution::min_distance() const {
    if (atoms_.size() < 2) return std::numeric_limits<double>::infinity();
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < atoms_.size(); ++i)
        d = std::min(d, atoms_[i] - atoms_[i - 1]);
    return d;
}

std::vector<double> DiscreteDistribution::sample(std::size_t n,
                                                 std::uint64_t seed) const {
    std::vector<double> cdf(probs_.size());
    Kahan acc;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        acc.add(probs_[i]);
        cdf[i] = acc.sum;
    }
    cdf.back() = 1.0;
    std::mt19937_64 gen(seed);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = uniform53(gen);
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        out[k] = atoms_[static_cast<std::size_t>(it - cdf.begin())];
    }
    return out;
}

DiscreteDistribution materialize(const DiscreteGaussianSpec& spec) {
    if (!(spec.beta > 0.0) || !std::isfinite(spec.beta))
        throw std::domain_error("materialize: beta must be positive and finite");
    if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda))
        throw std::domain_error("materialize: lambda must be positive and finite");
    if (!(spec.tail_eps > 0.0) || !(spec.tail_eps < 1e-3))
        throw std::domain_error("materialize: tail_eps must lie in (0, 1e-3)");

    const double lam = spec.lambda;
    const int cap = theta::term_cap();

    // Smallest J with 2 * tail(J+1) < tail_eps * (partial sum): identical
    // geometric majorant as the theta series.
    std::vector<double> w{1.0};
    double partial = 1.0;
    int J = 0;
    for (;;) {
        const double t = J + 1;
        const double bound =
            2.0 * std::exp(-lam * t * t) * (1.0 + 1.0 / (2.0 * lam * t));
        if (bound < spec.tail_eps * partial) break;
        const double wi = std::exp(-lam * t * t);
        w.push_back(wi);
        partial += 2.0 * wi;
        ++J;
        if (J > cap)
            throw ConvergenceError("materialize: lattice truncation exceeded term cap " +
                                   std::to_string(cap));
    }

    // Exact renormalization; summed from the outermost (smallest) weights in.
    Kahan total;
    for (int i = J; i >= 1; --i) total.add(w[static_cast<std::size_t>(i)]);
    const double norm = 2.0 * total.sum + 1.0;

    std::vector<double> atoms(2 * static_cast<std::size_t>(J) + 1);
    std::vector<double> probs(atoms.size());
    for (int i = -J; i <= J; ++i) {
        const std::size_t k = static_cast<std::size_t>(i + J);
        atoms[k] = spec.beta * i;
        probs[k] = w[static_cast<std::size_t>(std::abs(i))] / norm;
    }
    return DiscreteDistribution::from_weights(std::move(atoms), std::move(probs));
}

}  // namespace entgauss
