#include "entgauss/solver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "entgauss/errors.hpp"
#include "entgauss/theta.hpp"

namespace entgauss::solver {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

double theta_tol(double tol) { return std::max(1e-15, 0.01 * tol); }

// g(lambda) = L_a - lambda L_a'; strictly decreasing (g' = -lambda L'' <= 0).
double g_of(double lam, double a, double ttol) {
    const auto t = theta::log_theta(lam, a, ttol);
    return t.L - lam * t.dL;
}

}  // namespace

double threshold_entropy() {
    static const double value = g_of(kPi, 0.0, 1e-15);
    return value;
}

double lambert_w_minus1(double y) {
    const double branch = -std::exp(-1.0);
    if (!(y < 0.0) || y < branch - 4e-17)
        throw std::domain_error("lambert_w_minus1: y must lie in (-1/e, 0)");
    if (y <= branch + 4e-17) return -1.0;

    double x;
    if (y < -0.25) {
        // series about the branch point
        const double p = -std::sqrt(2.0 * (1.0 + kE * y));
        x = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
    } else {
        const double l1 = std::log(-y);
        x = l1 - std::log(-l1);
    }
    for (int it = 0; it < 60; ++it) {
        const double ex = std::exp(x);
        const double f = x * ex - y;
        const double fp = ex * (1.0 + x);
        const double fpp = ex * (2.0 + x);
        double dx = f / (fp - 0.5 * f * fpp / fp);
        if (!std::isfinite(dx)) dx = f / fp;
        x -= dx;
        if (x > -1.0) x = -1.0 - 1e-12;  // keep to the secondary branch
        if (std::abs(dx) <= 1e-16 * std::abs(x)) break;
    }
    return x;
}

double solve_lattice_entropy(double h, double shift_a, double tol) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::domain_error("solve_lattice_entropy: h must be positive and finite");
    if (!(tol > 0.0))
        throw std::domain_error("solve_lattice_entropy: tol must be positive");
    const double ttol = theta_tol(tol);

    // Left seed from the continuum estimate lambda ~ pi e e^{-2h}; right seed
    // from the Lambert route (shift 0) or expansion from pi.
    double lo = kPi * kE * std::exp(-2.0 * h) / 4.0;
    double hi;
    if (shift_a == 0.0 && h < 0.5)
        hi = 4.0 * (-lambert_w_minus1(-0.5 * h));
    else
        hi = 4.0 * kPi;
    if (hi <= lo) hi = 4.0 * lo;

    int guard = 0;
    while (g_of(lo, shift_a, ttol) < h) {
        lo /= 4.0;
        if (++guard > 600 || lo < 1e-300)
            throw BracketError("solve_lattice_entropy: no left bracket for h=" +
                               std::to_string(h));
    }
    guard = 0;
    while (g_of(hi, shift_a, ttol) > h) {
        hi *= 4.0;
        if (++guard > 40 || hi > 1e7)
            throw BracketError(
                "solve_lattice_entropy: no right bracket for h=" + std::to_string(h) +
                " (entropy target below the shifted lattice range)");
    }

    // Safeguarded Newton on F = g - h; F' = -lambda L''.
    double lam = std::sqrt(lo * hi);
    double F = g_of(lam, shift_a, ttol) - h;
    for (int it = 0; it < 200; ++it) {
        if (F > 0.0)
            lo = lam;
        else
            hi = lam;
        if (std::abs(F) <= 0.5 * tol * std::max(h, 1e-300)) break;

        const auto t = theta::log_theta(lam, shift_a, ttol);
        const double Fp = -lam * t.d2L;
        double next = (Fp < 0.0) ? lam - F / Fp : lo;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (next == lam || hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() * lam)
            break;
        lam = next;
        F = g_of(lam, shift_a, ttol) - h;
    }
    return lam;
}

SolveResult solve(double h, double tol) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::domain_error("solve: h must be positive and finite");
    const double lam = solve_lattice_entropy(h, 0.0, tol);
    const auto t = theta::log_theta(lam, 0.0, theta_tol(tol));

    SolveResult r{};
    r.h_target = h;
    r.lambda_h = lam;
    r.d_h = 1.0 / std::sqrt(-t.dL);
    r.entropy_residual = (t.L - lam * t.dL) - h;
    r.below_threshold = h < threshold_entropy();
    try {
        r.variance_check =
            entgauss::materialize({r.d_h, lam, 1e-16}).moments().second_moment;
    } catch (const ConvergenceError&) {
        // lattice too fine to materialize (very large h); closed form instead
        r.variance_check = r.d_h * r.d_h * (-t.dL);
    }
    return r;
}

double d_h_approx(double h, Regime regime) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::domain_error("d_h_approx: h must be positive and finite");
    if (regime == Regime::small) return std::sqrt(std::log(2.0 / h) / h);
    return std::sqrt(2.0 * kPi * kE) * std::exp(-h);
}

double gap_exponent(double h) {
    const double d = solve(h).d_h;
    return d * d / 8.0;
}

double gap_exponent_approx(double h, Regime regime) {
    const double d = d_h_approx(h, regime);
    return d * d / 8.0;
}

DiscreteGaussianSpec capacity_spec(const SolveResult& r, double tail_eps) {
    return {r.d_h, r.lambda_h, tail_eps};
}

}  // namespace entgauss::solver
