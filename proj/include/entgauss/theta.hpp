#pragma once

namespace entgauss {

// Shared small/large regime selector (entropy regimes, sandwich bounds).
enum class Regime { small, large };

namespace theta {

// Value and first two derivatives of L_a(lambda) = log sum_j exp(-lambda (j+a)^2).
struct ThetaEval {
    double lambda;
    double shift_a;
    double L;    // nats
    double dL;   // dL/dlambda; strictly negative for lambda > 0
    double d2L;  // d2L/dlambda^2; nonnegative (L is convex)
    int truncation_terms;
    double abs_error_bound;  // certified bound on |L - exact|
};

// Series term cap. Exceeding it raises ConvergenceError instead of silently
// truncating. The CLI wires ENTGAUSS_MAX_TERMS to set_term_cap.
int term_cap();
void set_term_cap(int cap);

// Evaluates L_a and derivatives with |L - exact| <= tol, dL to relative tol,
// d2L to relative 10*tol. Direct summation for lambda >= pi; the
// Poisson-summation transform below, with derivatives taken analytically
// through the transform. Both branches stop on a certified geometric tail
// majorant.
ThetaEval log_theta(double lambda, double shift_a = 0.0, double tol = 1e-12);

struct SandwichBounds {
    double lower;
    double upper;
};

// Two-sided bounds on e^{L(lambda)} (shift a = 0). Valid for every
// lambda > 0; tight in the requested regime.
SandwichBounds theta_sandwich(double lambda, Regime regime);

}  // namespace theta
}  // namespace entgauss
