#include "entgauss/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "entgauss/errors.hpp"
#include "entgauss/rng.hpp"
#include "entgauss/solver.hpp"
#include "entgauss/theta.hpp"
#include "mp_lattice.hpp"

namespace entgauss::extremal {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Entropy of p^t / Z(t); strictly decreasing in t for non-uniform p.
double tempered_entropy(const std::vector<double>& logp, double t) {
    const std::size_t n = logp.size();
    double M = -std::numeric_limits<double>::infinity();
    for (double lp : logp) M = std::max(M, t * lp);
    double z = 0.0, s = 0.0;
    for (double lp : logp) {
        const double e = std::exp(t * lp - M);
        z += e;
        s += e * (t * lp - M);
    }
    return std::log(z) - s / z;
}

std::vector<double> tempered_probs(const std::vector<double>& logp, double t) {
    double M = -std::numeric_limits<double>::infinity();
    for (double lp : logp) M = std::max(M, t * lp);
    std::vector<double> q(logp.size());
    double z = 0.0;
    for (std::size_t i = 0; i < logp.size(); ++i) {
        q[i] = std::exp(t * logp[i] - M);
        z += q[i];
    }
    for (double& v : q) v /= z;
    return q;
}

}  // namespace

DiscreteDistribution project_to_constraints(const DiscreteDistribution& d,
                                            double h_nats) {
    const std::size_t n = d.size();
    if (!(h_nats > 0.0))
        throw std::domain_error("project_to_constraints: h must be positive");
    if (h_nats > std::log(static_cast<double>(n)) + 1e-12)
        throw std::domain_error("project_to_constraints: entropy target " +
                                std::to_string(h_nats) + " exceeds log(n_atoms)");

    std::vector<double> logp(n);
    for (std::size_t i = 0; i < n; ++i) logp[i] = std::log(d.probs()[i]);

    // bisection on the temperature: H(t) decreasing, H(0+) = log n
    double lo = 1e-9, hi = 1.0;
    while (tempered_entropy(logp, hi) > h_nats) {
        hi *= 2.0;
        if (hi > 1e9)
            throw ConvergenceError("project_to_constraints: tempering failed (near-uniform input)");
    }
    // at h = log n the target is the t -> 0 limit; accept the endpoint
    if (tempered_entropy(logp, lo) < h_nats - 1e-9)
        throw ConvergenceError("project_to_constraints: entropy target unreachable");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tempered_entropy(logp, mid) > h_nats)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * hi) break;
    }
    std::vector<double> probs = tempered_probs(logp, 0.5 * (lo + hi));

    // exact rescale to unit second moment (does not touch the entropy)
    double m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) m2 += probs[i] * d.atoms()[i] * d.atoms()[i];
    const double scale = 1.0 / std::sqrt(m2);
    std::vector<double> atoms(n);
    for (std::size_t i = 0; i < n; ++i) atoms[i] = d.atoms()[i] * scale;

    return DiscreteDistribution::from_weights(std::move(atoms), std::move(probs));
}

namespace {

struct TrialBest {
    double dmin = 0.0;
    std::uint64_t trial = 0;
    std::optional<DiscreteDistribution> candidate;
};

// One random-restart trial: random start, hill climb with atom jitter,
// probability jitter and the equal-spacing move, projecting after each step.
TrialBest run_trial(double h, int n_atoms, std::uint64_t trial_seed,
                    std::uint64_t trial_index) {
    std::mt19937_64 gen(trial_seed);
    NormalSampler normal;
    const std::size_t n = static_cast<std::size_t>(n_atoms);

    auto random_candidate = [&]() {
        std::vector<double> atoms(n), weights(n);
        double x = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            atoms[i] = x;
            x += 0.5 + uniform53(gen);
        }
        const double center = atoms[n / 2];
        for (double& a : atoms) a -= center;
        for (std::size_t i = 0; i < n; ++i)
            weights[i] = std::exp(-3.0 * uniform53(gen));
        return DiscreteDistribution::from_weights(std::move(atoms), std::move(weights));
    };

    auto equal_spacing = [&](const DiscreteDistribution& d) {
        // integer translate anchored at the atom of least magnitude; never
        // increases the second moment for candidates with unit-scale gaps
        const auto& a = d.atoms();
        std::size_t anchor = 0;
        for (std::size_t i = 1; i < a.size(); ++i)
            if (std::abs(a[i]) < std::abs(a[anchor])) anchor = i;
        const double gap = d.min_distance();
        std::vector<double> atoms(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            atoms[i] = a[anchor] + (static_cast<double>(i) - static_cast<double>(anchor)) * gap;
        return DiscreteDistribution::from_weights(std::move(atoms), d.probs());
    };

    TrialBest best;
    best.trial = trial_index;

    DiscreteDistribution cur = project_to_constraints(random_candidate(), h);
    best.dmin = cur.min_distance();
    best.candidate = cur;

    const int steps = 48;
    for (int s = 0; s < steps; ++s) {
        const double step_scale = 0.4 * std::pow(0.02 / 0.4, s / double(steps - 1));
        const double move = uniform53(gen);
        std::vector<double> atoms = cur.atoms();
        std::vector<double> probs = cur.probs();
        try {
            DiscreteDistribution proposal = cur;
            if (move < 0.45) {
                for (double& a : atoms) a += step_scale * normal(gen);
                std::sort(atoms.begin(), atoms.end());
                proposal = DiscreteDistribution::from_weights(std::move(atoms),
                                                              std::move(probs));
            } else if (move < 0.8) {
                for (double& p : probs)
                    p = std::exp(std::log(p) + step_scale * normal(gen));
                proposal = DiscreteDistribution::from_weights(std::move(atoms),
                                                              std::move(probs));
            } else {
                proposal = equal_spacing(cur);
            }
            DiscreteDistribution projected = project_to_constraints(proposal, h);
            const double dm = projected.min_distance();
            if (dm > best.dmin) {
                best.dmin = dm;
                best.candidate = projected;
                cur = std::move(projected);
            } else if (dm > 0.95 * best.dmin) {
                cur = std::move(projected);  // sideways moves keep the walk alive
            }
        } catch (const std::domain_error&) {
            // degenerate proposal (coincident atoms after jitter); skip
        } catch (const ConvergenceError&) {
        }
    }

    // final polish: equal spacing plus projection
    try {
        DiscreteDistribution polished =
            project_to_constraints(equal_spacing(*best.candidate), h);
        const double dm = polished.min_distance();
        if (dm > best.dmin) {
            best.dmin = dm;
            best.candidate = polished;
        }
    } catch (const std::exception&) {
    }
    return best;
}

}  // namespace

SearchReport dmin_search(double h_nats, int n_atoms, std::uint64_t trials,
                         std::uint64_t seed) {
    if (!(h_nats > 0.0) || !std::isfinite(h_nats))
        throw std::domain_error("dmin_search: h must be positive and finite");
    if (n_atoms < 2 || n_atoms > 12)
        throw std::domain_error("dmin_search: n_atoms must lie in [2, 12]");
    if (h_nats > std::log(static_cast<double>(n_atoms)))
        throw std::domain_error("dmin_search: infeasible, h > log(n_atoms)");

    SearchReport rep{};
    rep.h_target = h_nats;
    rep.trials = trials;
    rep.seed = seed;
    rep.d_h_reference = solver::solve(h_nats).d_h;
    rep.best_dmin_found = 0.0;
    if (trials == 0) return rep;

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(hw, trials));

    std::vector<TrialBest> worker_best(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            TrialBest local;
            for (std::uint64_t t = w; t < trials; t += workers) {
                try {
                    TrialBest r = run_trial(h_nats, n_atoms, split_seed(seed, t), t);
                    if (r.dmin > local.dmin ||
                        (r.dmin == local.dmin && r.trial < local.trial))
                        local = std::move(r);
                } catch (const std::exception&) {
                    // a degenerate start wastes the trial, nothing more
                }
            }
            worker_best[w] = std::move(local);
        });
    }
    for (auto& th : pool) th.join();

    // deterministic reduction: best dmin, ties to the lowest trial index
    TrialBest overall;
    bool first = true;
    for (auto& wb : worker_best) {
        if (!wb.candidate) continue;
        if (first || wb.dmin > overall.dmin ||
            (wb.dmin == overall.dmin && wb.trial < overall.trial)) {
            overall = std::move(wb);
            first = false;
        }
    }
    rep.best_dmin_found = overall.dmin;
    rep.best_candidate = std::move(overall.candidate);
    return rep;
}

DualityCheck duality_check(double h_nats) {
    const auto r = solver::solve(h_nats);
    const auto t = theta::log_theta(r.lambda_h, 0.0, 1e-15);
    DualityCheck out{};
    out.var_h = -t.dL;
    out.product = out.var_h * r.d_h * r.d_h;
    return out;
}

namespace {

// Shared implementation: the tangent slopes are the negated variances.
struct ShiftData {
    double lambda0, lambda_half;
    double var0, var_half;
    bool clamped;
    double gap_log10;
    bool strict;
};

ShiftData shift_data(double h_nats) {
    if (!(h_nats > 0.0) || !std::isfinite(h_nats))
        throw std::domain_error("shift comparison: h must be positive and finite");
    ShiftData d{};
    if (h_nats <= kLn2) {
        // The half-shift lattice entropy ranges over (log 2, inf): no solution
        // here. Report the lambda -> inf limit (two atoms at +-1/2, variance
        // 1/4), evaluated at a clamp point rather than hard-coded.
        const double lam0 = solver::solve_lattice_entropy(h_nats, 0.0);
        const auto t0 = theta::log_theta(lam0, 0.0, 1e-15);
        const double lam_clamp = 400.0;
        const auto th = theta::log_theta(lam_clamp, 0.5, 1e-15);
        d.lambda0 = lam0;
        d.lambda_half = lam_clamp;
        d.var0 = -t0.dL;
        d.var_half = -th.dL;
        d.clamped = true;
        d.gap_log10 = std::log10(d.var_half - d.var0);
        d.strict = d.var0 < d.var_half;
        return d;
    }
    const auto gap = detail::certified_shift_gap(h_nats);
    d.lambda0 = gap.lambda0;
    d.lambda_half = gap.lambda_half;
    d.var0 = gap.var0;
    d.var_half = gap.var_half;
    d.clamped = false;
    d.gap_log10 = gap.gap_log10;
    d.strict = gap.positive;
    return d;
}

}  // namespace

ShiftComparison shift_comparison(double h_nats) {
    const ShiftData d = shift_data(h_nats);
    return {d.var0, d.var_half, d.clamped, d.gap_log10, d.strict};
}

TangentComparison tangent_lemma_check(double h_nats) {
    const ShiftData d = shift_data(h_nats);
    return {d.lambda0, d.lambda_half, -d.var0, -d.var_half, d.clamped, d.strict};
}

double aligned_tv_distance(const DiscreteDistribution& candidate,
                           const DiscreteDistribution& reference) {
    const auto& ra = reference.atoms();
    const auto& rp = reference.probs();
    const double beta = reference.min_distance();

    std::size_t rmode = 0;
    for (std::size_t i = 1; i < rp.size(); ++i)
        if (rp[i] > rp[rmode]) rmode = i;

    const auto& cp = candidate.probs();
    std::size_t cmode = 0;
    for (std::size_t i = 1; i < cp.size(); ++i)
        if (cp[i] > cp[cmode]) cmode = i;

    double best = 1.0;
    for (double sign : {+1.0, -1.0}) {
        // translate candidate's modal atom onto the reference's, match each
        // atom to the nearest lattice site within half a spacing
        const double shift = ra[rmode] - sign * candidate.atoms()[cmode];
        std::vector<double> matched(ra.size(), 0.0);
        double unmatched = 0.0;
        for (std::size_t i = 0; i < cp.size(); ++i) {
            const double x = sign * candidate.atoms()[i] + shift;
            const double kf = (x - ra[0]) / beta;
            const long k = std::lround(kf);
            if (k < 0 || k >= static_cast<long>(ra.size()) ||
                std::abs(x - ra[static_cast<std::size_t>(k)]) > 0.25 * beta) {
                unmatched += cp[i];
            } else {
                matched[static_cast<std::size_t>(k)] += cp[i];
            }
        }
        double tv = unmatched;  // candidate mass landing off the reference lattice
        for (std::size_t k = 0; k < ra.size(); ++k) tv += std::abs(matched[k] - rp[k]);
        best = std::min(best, 0.5 * tv);
    }
    return best;
}

}  // namespace entgauss::extremal
