#include "entgauss/theta.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "entgauss/errors.hpp"

namespace entgauss::theta {

namespace {

constexpr double kPi = std::numbers::pi;

std::atomic<int> g_term_cap{1'000'000};

// One-sided tail majorants for sum_{x = t, t+1, ...} x^{2k} e^{-lam x^2},
// t > 0: first term plus the integral bound obtained by parts.
double tail0(double lam, double t) {
    return std::exp(-lam * t * t) * (1.0 + 1.0 / (2.0 * lam * t));
}
double tail1(double lam, double t) {
    return std::exp(-lam * t * t) *
           (t * t + t / (2.0 * lam) + 1.0 / (4.0 * lam * lam * t));
}
double tail2(double lam, double t) {
    const double t2 = t * t;
    return std::exp(-lam * t * t) *
           (t2 * t2 + t2 * t / (2.0 * lam) + 3.0 * t / (4.0 * lam * lam) +
            3.0 / (8.0 * lam * lam * lam * t));
}

struct SeriesSums {
    // Sums of w, v*w, v^2*w with v = (j+a)^2 and weights scaled by
    // e^{+lam v_peak}, so the peak term is exactly 1 and nothing underflows
    // even when lam (j0+a)^2 is huge (shifted lattices at large lam).
    double S0 = 0.0, S1 = 0.0, S2 = 0.0;
    double rest = 0.0;       // S0 minus the peak term
    double v_peak = 0.0;
    double tail_bound0 = 0.0;  // certified remainder bound on S0 (same scale)
    int terms = 0;
    std::vector<double> vs, ws;  // kept for the two-pass variance form of d2L
};

// Direct summation outward from the peak, stopping when the remaining tails
// of all three weighted series drop below eps relative to the partial sums.
SeriesSums direct_sums(double lam, double a, double eps) {
    SeriesSums s;
    const int cap = term_cap();
    const int j0 = (a <= 0.5) ? 0 : -1;
    s.v_peak = (j0 + a) * (j0 + a);
    for (int dir : {+1, -1}) {
        int j = (dir > 0) ? j0 : j0 - 1;
        for (;; j += dir) {
            const double t = std::abs(j + a);
            if (s.terms >= 3 && t >= 1.0) {
                const double scale = std::exp(-lam * (t * t - s.v_peak));
                const double b0 = scale * (1.0 + 1.0 / (2.0 * lam * t));
                const double b1 =
                    scale * (t * t + t / (2.0 * lam) + 1.0 / (4.0 * lam * lam * t));
                const double t2 = t * t;
                const double b2 =
                    scale * (t2 * t2 + t2 * t / (2.0 * lam) +
                             3.0 * t / (4.0 * lam * lam) +
                             3.0 / (8.0 * lam * lam * lam * t));
                if (b0 <= eps * s.S0 && b1 <= eps * s.S1 && b2 <= eps * s.S2) {
                    s.tail_bound0 += b0;
                    break;
                }
            }
            const double v = (j + a) * (j + a);
            const double w = std::exp(-lam * (v - s.v_peak));
            s.S0 += w;
            s.S1 += v * w;
            s.S2 += v * v * w;
            if (j != j0) s.rest += w;
            s.vs.push_back(v);
            s.ws.push_back(w);
            if (++s.terms > cap)
                throw ConvergenceError("log_theta: direct series exceeded term cap " +
                                       std::to_string(cap));
        }
    }
    return s;
}

// Dual-lattice sums of the Poisson transform at lam' = pi^2/lam:
//   T  = sum_k c_k e^{-lam' k^2},  U1 = sum_k k^2 c_k ...,  U2 = sum_k k^4 ...
// with c_k = cos(2 pi k a) (alternating signs for a = 1/2).
struct DualSums {
    double T = 0.0, U1 = 0.0, U2 = 0.0;
    double tail_T = 0.0;
    int terms = 0;
};

DualSums dual_sums(double lam_dual, double a, double epsT, double epsU1, double epsU2) {
    DualSums s;
    const int cap = term_cap();
    s.T = 1.0;  // k = 0
    s.terms = 1;
    for (int k = 1;; ++k) {
        const double t = k;
        const double b0 = 2.0 * tail0(lam_dual, t);
        const double b1 = 2.0 * tail1(lam_dual, t);
        const double b2 = 2.0 * tail2(lam_dual, t);
        if (k >= 2 && b0 <= epsT && b1 <= epsU1 && b2 <= epsU2) {
            s.tail_T = b0;
            break;
        }
        double c;
        if (a == 0.0)
            c = 1.0;
        else if (a == 0.5)
            c = (k % 2 == 0) ? 1.0 : -1.0;
        else
            c = std::cos(2.0 * kPi * k * a);
        const double w = 2.0 * c * std::exp(-lam_dual * t * t);
        s.T += w;
        s.U1 += t * t * w;
        s.U2 += t * t * t * t * w;
        if (++s.terms > cap)
            throw ConvergenceError("log_theta: dual series exceeded term cap " +
                                   std::to_string(cap));
    }
    return s;
}

}  // namespace

int term_cap() { return g_term_cap.load(std::memory_order_relaxed); }

void set_term_cap(int cap) {
    if (cap < 1) throw std::domain_error("set_term_cap: cap must be positive");
    g_term_cap.store(cap, std::memory_order_relaxed);
}

ThetaEval log_theta(double lambda, double shift_a, double tol) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::domain_error("log_theta: lambda must be positive and finite");
    if (!(shift_a >= 0.0) || !(shift_a < 1.0))
        throw std::domain_error("log_theta: shift must lie in [0,1)");
    if (!(tol > 0.0)) throw std::domain_error("log_theta: tol must be positive");

    ThetaEval out{};
    out.lambda = lambda;
    out.shift_a = shift_a;

    if (lambda >= kPi) {
        const double eps = tol / 8.0;
        SeriesSums s = direct_sums(lambda, shift_a, eps);
        // peak term is scaled to exactly 1; log1p keeps full relative
        // precision when the scaled log is within a few ulps of zero
        out.L = -lambda * s.v_peak + std::log1p(s.rest);
        out.dL = -(s.S1 / s.S0);
        // variance form avoids the cancellation in S2/S0 - (S1/S0)^2
        const double m = s.S1 / s.S0;
        double acc = 0.0;
        for (std::size_t i = 0; i < s.vs.size(); ++i) {
            const double dv = s.vs[i] - m;
            acc += s.ws[i] * dv * dv;
        }
        out.d2L = acc / s.S0;
        out.truncation_terms = s.terms;
        out.abs_error_bound =
            s.tail_bound0 / s.S0 + 8.0 * std::numeric_limits<double>::epsilon();
        return out;
    }

    // Poisson transform: L(lam) = 0.5 log(pi/lam) + log T(lam'), lam' = pi^2/lam.
    const double ld = kPi * kPi / lambda;
    const double ratio = ld / lambda;  // lam'/lam
    // Error budgets so that dL keeps relative tol and d2L relative 10*tol
    // after multiplication by (lam'/lam) and (lam'/lam)^2.
    const double epsT = tol / 8.0;
    const double epsU1 = tol / (8.0 * std::max(1.0, 2.0 * ld));
    const double epsU2 = tol / (4.0 * std::max(1.0, 2.0 * ld * ld));
    DualSums s = dual_sums(ld, shift_a, epsT, epsU1, epsU2);

    out.L = 0.5 * (std::log(kPi) - std::log(lambda)) + std::log(s.T);
    const double u1 = s.U1 / s.T;
    const double u2 = s.U2 / s.T;
    // u1, u2 underflow to zero well below lambda ~ 0.05; skip the correction
    // terms there so ratio * 0 cannot produce inf * 0.
    out.dL = -1.0 / (2.0 * lambda) + (u1 == 0.0 ? 0.0 : ratio * u1);
    out.d2L = 1.0 / (2.0 * lambda * lambda) +
              (u2 == 0.0 && u1 == 0.0
                   ? 0.0
                   : ratio * ratio * (u2 - u1 * u1) -
                         2.0 * (ld / (lambda * lambda)) * u1);
    out.truncation_terms = s.terms;
    out.abs_error_bound =
        s.tail_T / s.T + 8.0 * std::numeric_limits<double>::epsilon();
    return out;
}

SandwichBounds theta_sandwich(double lambda, Regime regime) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::domain_error("theta_sandwich: lambda must be positive and finite");
    SandwichBounds b{};
    if (regime == Regime::large) {
        const double e = std::exp(-lambda);
        b.lower = 1.0 + 2.0 * e;
        b.upper = b.lower + std::sqrt(kPi / lambda) * e;
    } else {
        const double e = std::exp(-kPi * kPi / lambda);
        b.lower = std::sqrt(kPi / lambda) * (1.0 + 2.0 * e);
        b.upper = b.lower + e;
    }
    return b;
}

}  // namespace entgauss::theta
