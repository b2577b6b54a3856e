#pragma once

namespace entgauss::extremal::detail {

// Lattice variances at the per-shift roots of L_a - lambda L_a' = h for
// a = 0 and a = 1/2, evaluated in MPFR at a precision sufficient to resolve
// their difference (the gap decays like e^{-pi^2/lambda}). Used to certify
// the strict ordering var_a0 < var_a_half when it falls below double
// resolution.
struct ShiftGap {
    double lambda0;
    double lambda_half;
    double var0;
    double var_half;
    double gap_log10;  // log10(var_half - var0); -inf if the gap is nonpositive
    bool positive;
    long precision_bits;
};

ShiftGap certified_shift_gap(double h_nats);

}  // namespace entgauss::extremal::detail
