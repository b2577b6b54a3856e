#include "entgauss/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>

#include "entgauss/errors.hpp"
#include "entgauss/rng.hpp"

namespace entgauss::channel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kUnderflowFloor = 1e-280;
constexpr double kLogPrune = 740.0;  // exp(-740) is below the normal range

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828112900476945694};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
    double value;
    double error;
};

template <typename F>
PanelResult gauss_kronrod(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    const double fc = f(c);
    double kron = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double f1 = f(c - hw * kXgk[i]);
        const double f2 = f(c + hw * kXgk[i]);
        kron += kWgk[i] * (f1 + f2);
        if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
    }
    kron *= hw;
    gauss *= hw;
    return {kron, std::abs(kron - gauss)};
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// Adaptive bisection with the GK pair until the summed error estimate drops
// below rel_tol * |integral| (or an absolute floor for all-zero integrands).
template <typename F>
PanelResult adapt_integrate(const F& f, const std::vector<double>& knots,
                            double rel_tol, int max_panels, const char* what) {
    std::priority_queue<Panel> heap;
    double value = 0.0, error = 0.0;
    int panels = 0;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        const auto r = gauss_kronrod(f, knots[i - 1], knots[i]);
        heap.push({knots[i - 1], knots[i], r.value, r.error});
        value += r.value;
        error += r.error;
        ++panels;
    }
    while (error > rel_tol * std::max(std::abs(value), 1e-300)) {
        if (panels >= max_panels)
            throw ConvergenceError(std::string(what) +
                                   ": quadrature cannot certify the requested tolerance");
        const Panel worst = heap.top();
        heap.pop();
        value -= worst.value;
        error -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        for (const auto [a, b] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
            const auto r = gauss_kronrod(f, a, b);
            heap.push({a, b, r.value, r.error});
            value += r.value;
            error += r.error;
        }
        ++panels;
    }
    return {value, error};
}

// Streaming log-sum-exp of m_j = log p_j - (y-x_j)^2/(2 s^2) over the atoms
// near y (scanning outward until -(y-x_j)^2/(2 s^2) falls kLogPrune below the
// running max), with the term for a forced index always included. Returns
// lse - m_i >= 0, computed through log1p so values near zero keep full
// precision.
class MixtureLogRatio {
public:
    MixtureLogRatio(const std::vector<double>& atoms, const std::vector<double>& logp,
                    double inv_two_s2)
        : atoms_(atoms), logp_(logp), inv_two_s2_(inv_two_s2) {}

    double operator()(double y, std::size_t i) const {
        const std::size_t n = atoms_.size();
        double M = -std::numeric_limits<double>::infinity();
        double s1 = 0.0;  // sum over j != argmax of exp(m_j - M)
        bool have_i = false;
        double m_i = 0.0;

        auto update = [&](std::size_t j) {
            const double d = y - atoms_[j];
            const double m = logp_[j] - d * d * inv_two_s2_;
            if (j == i) {
                m_i = m;
                have_i = true;
            }
            if (m <= M) {
                s1 += std::exp(m - M);
            } else {
                // previous max joins the non-max sum
                s1 = std::isinf(M) ? 0.0 : (s1 + 1.0) * std::exp(M - m);
                M = m;
            }
        };

        const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), y);
        const std::size_t j0 =
            static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - atoms_.begin() - 1));
        for (std::size_t j = j0; j < n; ++j) {
            if (-(y - atoms_[j]) * (y - atoms_[j]) * inv_two_s2_ < M - kLogPrune) break;
            update(j);
        }
        for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(j0) - 1; j >= 0; --j) {
            const std::size_t ju = static_cast<std::size_t>(j);
            if (-(y - atoms_[ju]) * (y - atoms_[ju]) * inv_two_s2_ < M - kLogPrune) break;
            update(ju);
        }
        if (!have_i) {
            const double d = y - atoms_[i];
            m_i = logp_[i] - d * d * inv_two_s2_;
        }
        return (M - m_i) + std::log1p(s1);
    }

private:
    const std::vector<double>& atoms_;
    const std::vector<double>& logp_;
    double inv_two_s2_;
};

// log of an upper bound on Q(z), z > 0
double log_q_upper(double z) { return -0.5 * z * z - std::log(z * std::sqrt(2.0 * kPi)); }
// log of an upper bound on R(z), z > 0
double log_r_upper(double z) {
    return -0.5 * z * z + std::log((z * z + 1.0) / (z * std::sqrt(2.0 * kPi)));
}

}  // namespace

double normal_q(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double normal_r(double z) {
    return normal_q(z) + z / std::sqrt(2.0 * kPi) * std::exp(-0.5 * z * z);
}

ChannelEval conditional_entropy(const DiscreteDistribution& dist, double snr,
                                double tol) {
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::domain_error("conditional_entropy: snr must be positive and finite");
    if (!(tol >= 1e-13))
        throw std::domain_error("conditional_entropy: tol must be at least 1e-13");

    ChannelEval ev{};
    ev.snr = snr;
    ev.sigma = 1.0 / std::sqrt(snr);
    ev.H_X = dist.entropy();

    const auto& atoms = dist.atoms();
    const auto& probs = dist.probs();
    const std::size_t n = atoms.size();
    const double sigma = ev.sigma;

    if (n == 1) {
        ev.h_Y = 0.5 * std::log(2.0 * kPi * std::numbers::e * sigma * sigma);
        ev.I_XY = 0.0;
        ev.H_X_given_Y = 0.0;
        ev.rel_error_bound = 0.0;
        return ev;
    }

    std::vector<double> logp(n);
    for (std::size_t j = 0; j < n; ++j) logp[j] = std::log(probs[j]);
    const double inv_two_s2 = 0.5 * snr;
    const MixtureLogRatio ratio(atoms, logp, inv_two_s2);

    const double dmin = dist.min_distance();
    double W = std::sqrt(2.0 * std::log(1.0 / tol) + 0.25 * snr * dmin * dmin) + 6.0;

    double total = 0.0, err = 0.0;
    for (int attempt = 0;; ++attempt) {
        total = 0.0;
        err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            // integrate in u = (y - x_i)/sigma; ridge scale at the decision
            // boundaries is sigma/gap in u units
            std::vector<double> knots{-W, 0.0, W};
            for (std::size_t j = 0; j + 1 < n; ++j) {
                const double mid = 0.5 * (atoms[j] + atoms[j + 1]);
                const double um = (mid - atoms[i]) / sigma;
                if (um <= -W || um >= W) continue;
                knots.push_back(um);
                const double wr = sigma / (atoms[j + 1] - atoms[j]);
                for (double k : {1.0, 4.0, 16.0, 64.0, 256.0}) {
                    if (um - k * wr > -W) knots.push_back(um - k * wr);
                    if (um + k * wr < W) knots.push_back(um + k * wr);
                }
            }
            std::sort(knots.begin(), knots.end());
            knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

            const double xi = atoms[i];
            auto integrand = [&](double u) {
                const double y = xi + sigma * u;
                const double r = ratio(y, i);
                if (r == 0.0) return 0.0;
                return std::exp(-0.5 * u * u) / std::sqrt(2.0 * kPi) * r;
            };
            const auto ri =
                adapt_integrate(integrand, knots, 0.2 * tol, 4000, "conditional_entropy");
            total += probs[i] * ri.value;
            err += probs[i] * ri.error;
        }

        if (total < kUnderflowFloor) {
            ev.H_X_given_Y = 0.0;
            ev.I_XY = ev.H_X;
            ev.h_Y = ev.I_XY + 0.5 * std::log(2.0 * kPi * std::numbers::e * sigma * sigma);
            ev.rel_error_bound = std::numeric_limits<double>::infinity();
            ev.underflow = true;
            return ev;
        }

        // window-tail certificate: neglected mass <= 2 Q(W) H(X) + R(W)
        const double log_tail = std::log(std::max(2.0 * ev.H_X, 1e-300)) + log_q_upper(W);
        const double log_tail2 = log_r_upper(W);
        const double log_budget = std::log(0.2 * tol * total);
        if (std::max(log_tail, log_tail2) + std::log(2.0) <= log_budget) {
            const double tail = std::exp(log_tail) + std::exp(log_tail2);
            err += tail;
            break;
        }
        if (attempt >= 3)
            throw ConvergenceError("conditional_entropy: window certificate failed");
        W *= 1.3;
    }

    ev.H_X_given_Y = total;
    ev.I_XY = ev.H_X - total;
    ev.h_Y = ev.I_XY + 0.5 * std::log(2.0 * kPi * std::numbers::e * sigma * sigma);
    ev.rel_error_bound = err / total;
    return ev;
}

McEstimate conditional_entropy_mc(const DiscreteDistribution& dist, double snr,
                                  std::size_t n, std::uint64_t seed) {
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::domain_error("conditional_entropy_mc: snr must be positive");
    if (n < 1) throw std::domain_error("conditional_entropy_mc: n must be >= 1");

    const auto& atoms = dist.atoms();
    const auto& probs = dist.probs();
    const std::size_t na = atoms.size();
    const double sigma = 1.0 / std::sqrt(snr);
    const double inv_two_s2 = 0.5 * snr;

    std::vector<double> logp(na), cdf(na);
    double acc = 0.0;
    for (std::size_t j = 0; j < na; ++j) {
        logp[j] = std::log(probs[j]);
        acc += probs[j];
        cdf[j] = acc;
    }
    cdf.back() = 1.0;

    std::mt19937_64 gen(seed);
    NormalSampler normal;
    double mean = 0.0, m2 = 0.0;
    std::vector<double> m(na);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = uniform53(gen);
        const std::size_t ix = static_cast<std::size_t>(
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        const double y = atoms[ix] + sigma * normal(gen);

        double M = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < na; ++j) {
            const double d = y - atoms[j];
            m[j] = logp[j] - d * d * inv_two_s2;
            M = std::max(M, m[j]);
        }
        double z = 0.0;
        for (std::size_t j = 0; j < na; ++j) z += std::exp(m[j] - M);
        const double lse = M + std::log(z);
        double hpost = 0.0;
        for (std::size_t j = 0; j < na; ++j) {
            const double lq = m[j] - lse;
            if (lq > -60.0) hpost -= std::exp(lq) * lq;
        }
        // Welford
        const double delta = hpost - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (hpost - mean);
    }
    const double var = (n > 1) ? m2 / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

double hxy_upper_bound(const DiscreteDistribution& dist, double snr) {
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::domain_error("hxy_upper_bound: snr must be positive");
    const double sigma = 1.0 / std::sqrt(snr);
    const double dmin = dist.min_distance();
    if (!(sigma < 0.5 * dmin))
        throw std::domain_error(
            "hxy_upper_bound: requires sigma < d_min/2 (snr too small)");
    const double z = 0.5 * dmin / sigma;
    return std::exp(-0.5 * z * z) *
           (dist.entropy() + 1.5 + z / std::sqrt(2.0 * kPi));
}

double hxy_lower_bound(const DiscreteDistribution& dist, double snr, double delta) {
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::domain_error("hxy_lower_bound: snr must be positive");
    if (!(delta > 0.0)) throw std::domain_error("hxy_lower_bound: delta must be positive");
    const auto& atoms = dist.atoms();
    const auto& probs = dist.probs();
    if (atoms.size() < 2)
        throw std::domain_error("hxy_lower_bound: needs at least two atoms");

    std::size_t k = 1;
    for (std::size_t i = 2; i < atoms.size(); ++i)
        if (atoms[i] - atoms[i - 1] < atoms[k] - atoms[k - 1]) k = i;
    const double gap = atoms[k] - atoms[k - 1];
    const double p0 = probs[k - 1], p1 = probs[k];
    const double sigma = 1.0 / std::sqrt(snr);
    const double w = gap + 2.0 * delta;
    return p0 * std::log1p(p1 / p0) * (delta / (sigma * std::sqrt(2.0 * kPi))) *
           std::exp(-w * w / (8.0 * sigma * sigma));
}

ExponentFit fit_exponent(const DiscreteDistribution& dist,
                         std::vector<double> snr_grid, double tol) {
    if (snr_grid.size() < 4)
        throw std::domain_error("fit_exponent: grid needs at least 4 points");
    for (std::size_t i = 0; i < snr_grid.size(); ++i) {
        if (!(snr_grid[i] > 0.0))
            throw std::domain_error("fit_exponent: snr grid must be positive");
        if (i > 0 && !(snr_grid[i] > snr_grid[i - 1]))
            throw std::domain_error("fit_exponent: snr grid must be ascending");
    }
    ExponentFit fit;
    fit.snr_grid = std::move(snr_grid);
    std::vector<double> logH(fit.snr_grid.size());
    for (std::size_t i = 0; i < fit.snr_grid.size(); ++i) {
        const auto ev = conditional_entropy(dist, fit.snr_grid[i], tol);
        if (ev.underflow)
            throw ConvergenceError("fit_exponent: H(X|Y) underflowed at snr=" +
                                   std::to_string(fit.snr_grid[i]));
        logH[i] = std::log(ev.H_X_given_Y);
        fit.scaled_log_values.push_back(logH[i] / fit.snr_grid[i]);
    }
    const std::size_t m = fit.snr_grid.size();
    fit.fitted_limit =
        (logH[m - 1] - logH[m - 2]) / (fit.snr_grid[m - 1] - fit.snr_grid[m - 2]);
    const double dmin = dist.min_distance();
    fit.predicted_limit = -dmin * dmin / 8.0;
    return fit;
}

double differential_entropy_y(const DiscreteDistribution& dist, double snr,
                              double tol) {
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::domain_error("differential_entropy_y: snr must be positive");
    const auto& atoms = dist.atoms();
    const auto& probs = dist.probs();
    const std::size_t n = atoms.size();
    const double sigma = 1.0 / std::sqrt(snr);

    std::vector<double> logp(n);
    for (std::size_t j = 0; j < n; ++j) logp[j] = std::log(probs[j]);
    const double inv_two_s2 = 0.5 * snr;
    const double log_norm = -std::log(sigma * std::sqrt(2.0 * kPi));

    auto log_f = [&](double y) {
        double M = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            const double d = y - atoms[j];
            M = std::max(M, logp[j] - d * d * inv_two_s2);
        }
        double z = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = y - atoms[j];
            z += std::exp(logp[j] - d * d * inv_two_s2 - M);
        }
        return M + std::log(z) + log_norm;
    };
    auto integrand = [&](double y) {
        const double lf = log_f(y);
        if (lf < -700.0) return 0.0;
        return -std::exp(lf) * lf;
    };

    const double W = std::sqrt(2.0 * std::log(1.0 / tol)) + 8.0;
    std::vector<double> knots;
    knots.push_back(atoms.front() - W * sigma);
    for (std::size_t j = 0; j < n; ++j) {
        knots.push_back(atoms[j]);
        if (j + 1 < n) knots.push_back(0.5 * (atoms[j] + atoms[j + 1]));
    }
    knots.push_back(atoms.back() + W * sigma);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    return adapt_integrate(integrand, knots, tol, 20000, "differential_entropy_y").value;
}

}  // namespace entgauss::channel
