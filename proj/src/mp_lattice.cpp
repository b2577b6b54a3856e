#include "mp_lattice.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "entgauss/errors.hpp"
#include "entgauss/solver.hpp"

namespace entgauss::extremal::detail {

namespace {

constexpr long kPrecCap = 1L << 15;

// RAII wrapper around a single mpfr_t.
class Real {
public:
    explicit Real(mpfr_prec_t prec) { mpfr_init2(v, prec); }
    Real(const Real&) = delete;
    Real& operator=(const Real&) = delete;
    ~Real() { mpfr_clear(v); }
    mpfr_t v;
};

struct LatticeSums {
    Real S0, S1, S2;  // sum of (j+a)^{0,2,4} e^{-lambda (j+a)^2}
    explicit LatticeSums(mpfr_prec_t p) : S0(p), S1(p), S2(p) {}
};

// For a in {0, 1/2} every exponent is lambda/4 * k^2 with k = 2j + 2a an
// integer of fixed parity, so the whole series reduces to powers of
// q = e^{-lambda/4} built by two multiplications per term (no per-term exp).
void lattice_sums(const Real& lambda, bool half_shift, mpfr_prec_t prec,
                  LatticeSums& out) {
    Real q(prec), term(prec), step(prec), q2(prec), tmp(prec), v(prec), thresh(prec);

    mpfr_div_ui(tmp.v, lambda.v, 4, MPFR_RNDN);
    mpfr_neg(tmp.v, tmp.v, MPFR_RNDN);
    mpfr_exp(q.v, tmp.v, MPFR_RNDN);  // q = e^{-lambda/4}
    mpfr_sqr(q2.v, q.v, MPFR_RNDN);

    mpfr_set_ui(out.S0.v, 0, MPFR_RNDN);
    mpfr_set_ui(out.S1.v, 0, MPFR_RNDN);
    mpfr_set_ui(out.S2.v, 0, MPFR_RNDN);

    Real step_growth(prec);
    mpfr_sqr(step_growth.v, q2.v, MPFR_RNDN);
    mpfr_sqr(step_growth.v, step_growth.v, MPFR_RNDN);  // q^8

    // term = q^{k0^2}; step = q^{4 k0 + 4} advances k by 2; the step itself
    // grows by q^8 since the exponent's second difference is constant.
    const long k0 = half_shift ? 1 : 0;
    if (half_shift) {
        mpfr_set(term.v, q.v, MPFR_RNDN);
        mpfr_set(step.v, step_growth.v, MPFR_RNDN);  // q^8
    } else {
        mpfr_set_ui(term.v, 1, MPFR_RNDN);
        mpfr_sqr(step.v, q2.v, MPFR_RNDN);  // q^4
    }

    for (long k = k0;; k += 2) {
        // v = (k/2)^2
        mpfr_set_si(v.v, k, MPFR_RNDN);
        mpfr_div_ui(v.v, v.v, 2, MPFR_RNDN);
        mpfr_sqr(v.v, v.v, MPFR_RNDN);

        const int weight = (k == 0) ? 1 : 2;
        mpfr_mul_ui(tmp.v, term.v, static_cast<unsigned long>(weight), MPFR_RNDN);
        mpfr_add(out.S0.v, out.S0.v, tmp.v, MPFR_RNDN);
        mpfr_mul(tmp.v, tmp.v, v.v, MPFR_RNDN);
        mpfr_add(out.S1.v, out.S1.v, tmp.v, MPFR_RNDN);
        mpfr_mul(tmp.v, tmp.v, v.v, MPFR_RNDN);
        mpfr_add(out.S2.v, out.S2.v, tmp.v, MPFR_RNDN);

        // stop once the k^4-weighted term cannot move any accumulator
        mpfr_mul(tmp.v, term.v, v.v, MPFR_RNDN);
        mpfr_mul(tmp.v, tmp.v, v.v, MPFR_RNDN);
        mpfr_set(thresh.v, out.S0.v, MPFR_RNDN);
        mpfr_mul_2si(thresh.v, thresh.v, -static_cast<long>(prec) - 40, MPFR_RNDN);
        if (k > k0 + 2 && mpfr_cmp(tmp.v, thresh.v) < 0) break;

        // advance: term *= step, step *= q^8  (since (k+2)^2 - k^2 = 4k + 4)
        mpfr_mul(term.v, term.v, step.v, MPFR_RNDN);
        mpfr_mul(step.v, step.v, step_growth.v, MPFR_RNDN);
        if (k > 4'000'000)
            throw ConvergenceError("certified_shift_gap: series failed to converge");
    }
}

// F(lambda) = log S0 + lambda S1/S0 - h and its derivative -lambda * varL
// with varL = S2/S0 - (S1/S0)^2.
void entropy_residual(const Real& lambda, bool half_shift, const Real& h,
                      mpfr_prec_t prec, Real& F, Real& dF, Real& var) {
    LatticeSums s(prec);
    lattice_sums(lambda, half_shift, prec, s);
    Real tmp(prec), mean(prec), varL(prec);

    mpfr_div(mean.v, s.S1.v, s.S0.v, MPFR_RNDN);  // -L' = S1/S0
    mpfr_set(var.v, mean.v, MPFR_RNDN);

    mpfr_log(F.v, s.S0.v, MPFR_RNDN);
    mpfr_mul(tmp.v, lambda.v, mean.v, MPFR_RNDN);
    mpfr_add(F.v, F.v, tmp.v, MPFR_RNDN);
    mpfr_sub(F.v, F.v, h.v, MPFR_RNDN);

    mpfr_div(varL.v, s.S2.v, s.S0.v, MPFR_RNDN);
    mpfr_sqr(tmp.v, mean.v, MPFR_RNDN);
    mpfr_sub(varL.v, varL.v, tmp.v, MPFR_RNDN);  // L'' >= 0
    mpfr_mul(dF.v, lambda.v, varL.v, MPFR_RNDN);
    mpfr_neg(dF.v, dF.v, MPFR_RNDN);
}

// Newton iteration from a double-precision seed; g is strictly decreasing so
// plain Newton with a positivity clamp converges quadratically.
void solve_lattice(double seed, bool half_shift, const Real& h, mpfr_prec_t prec,
                   Real& lambda, Real& var) {
    Real F(prec), dF(prec), step(prec);
    mpfr_set_d(lambda.v, seed, MPFR_RNDN);
    const long iters = 8 + static_cast<long>(std::log2(static_cast<double>(prec)));
    for (long it = 0; it < iters; ++it) {
        entropy_residual(lambda, half_shift, h, prec, F, dF, var);
        mpfr_div(step.v, F.v, dF.v, MPFR_RNDN);
        mpfr_sub(lambda.v, lambda.v, step.v, MPFR_RNDN);
        if (mpfr_sgn(lambda.v) <= 0)
            throw ConvergenceError("certified_shift_gap: Newton left the domain");
    }
    entropy_residual(lambda, half_shift, h, prec, F, dF, var);
}

}  // namespace

ShiftGap certified_shift_gap(double h_nats) {
    // Precision from the double-precision root: the gap scale is
    // e^{-pi^2/lambda0}, i.e. about pi^2/lambda0 * log2(e) bits.
    const double lam0_seed = solver::solve_lattice_entropy(h_nats, 0.0);
    const double lam_half_seed = solver::solve_lattice_entropy(h_nats, 0.5);
    const double dual = std::numbers::pi * std::numbers::pi / lam0_seed;
    const long need = static_cast<long>(dual * 1.4427) + 320;
    if (need > kPrecCap)
        throw ConvergenceError(
            "certified_shift_gap: required precision " + std::to_string(need) +
            " bits exceeds the cap; the gap is below e^{-" + std::to_string(dual) +
            "}");
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(std::max(192L, need));

    Real h(prec);
    mpfr_set_d(h.v, h_nats, MPFR_RNDN);

    Real lam0(prec), var0(prec), lamh(prec), varh(prec), gap(prec);
    solve_lattice(lam0_seed, false, h, prec, lam0, var0);
    solve_lattice(lam_half_seed, true, h, prec, lamh, varh);

    mpfr_sub(gap.v, varh.v, var0.v, MPFR_RNDN);

    ShiftGap out{};
    out.lambda0 = mpfr_get_d(lam0.v, MPFR_RNDN);
    out.lambda_half = mpfr_get_d(lamh.v, MPFR_RNDN);
    out.var0 = mpfr_get_d(var0.v, MPFR_RNDN);
    out.var_half = mpfr_get_d(varh.v, MPFR_RNDN);
    out.positive = mpfr_sgn(gap.v) > 0;
    out.precision_bits = static_cast<long>(prec);
    if (out.positive) {
        Real lg(prec);
        mpfr_log10(lg.v, gap.v, MPFR_RNDN);
        out.gap_log10 = mpfr_get_d(lg.v, MPFR_RNDN);
    } else {
        out.gap_log10 = -std::numeric_limits<double>::infinity();
    }
    return out;
}

}  // namespace entgauss::extremal::detail
