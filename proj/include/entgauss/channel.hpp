#pragma once

#include <cstdint>
#include <vector>

#include "entgauss/distribution.hpp"

namespace entgauss::channel {

// H(X|Y), h(Y) and I(X;Y) for one (input, snr) pair, all in nats.
// I_XY is defined as H_X - H_X_given_Y and h_Y as I_XY + 0.5 log(2 pi e s^2);
// the difference form cancels catastrophically deep in the exponential
// regime, so the quadrature target is H_X_given_Y itself.
struct ChannelEval {
    double snr;
    double sigma;             // 1/sqrt(snr)
    double H_X;
    double h_Y;
    double I_XY;
    double H_X_given_Y;
    double rel_error_bound;   // certified relative error on H_X_given_Y
    bool underflow;           // H(X|Y) below 1e-280: reported as 0, bound +inf
};

// Per-atom posterior log-ratio quadrature: H(X|Y) = sum_i p_i int phi_s(y-x_i)
// log(f_Y(y)/(p_i phi_s(y-x_i))) dy, with mixture evaluations in the log
// domain and adaptive Gauss-Kronrod panels seeded at the decision boundaries.
ChannelEval conditional_entropy(const DiscreteDistribution& dist, double snr,
                                double tol = 1e-10);

struct McEstimate {
    double estimate;
    double std_error;
};

// Monte Carlo oracle: draws (X,Z), averages the posterior entropy of X given
// y = x + z. Independent of the quadrature path; deterministic per seed.
McEstimate conditional_entropy_mc(const DiscreteDistribution& dist, double snr,
                                  std::size_t n, std::uint64_t seed);

// Closed-form bound e^{-d^2/(8 s^2)} [H(X) + 3/2 + d/(2 s sqrt(2 pi))];
// requires sigma < d_min/2.
double hxy_upper_bound(const DiscreteDistribution& dist, double snr);

// Lower bound from the minimum-gap pair (x0, x1):
// p0 log(1 + p1/p0) * (delta/(sigma sqrt(2 pi))) * e^{-(d+2 delta)^2/(8 s^2)}.
// Valid for every delta > 0.
double hxy_lower_bound(const DiscreteDistribution& dist, double snr, double delta);

struct ExponentFit {
    std::vector<double> snr_grid;
    std::vector<double> scaled_log_values;  // log H(X|Y) / snr per grid point
    double fitted_limit;                    // two-point slope at the grid top
    double predicted_limit;                 // -d_min^2 / 8
};

// The limit is approached with O(log snr / snr) corrections; the two-point
// slope at the top of the grid cancels the polynomial prefactor.
ExponentFit fit_exponent(const DiscreteDistribution& dist,
                         std::vector<double> snr_grid, double tol = 1e-10);

// Gaussian tail helpers. normal_r(z) = int_z^inf u^2 phi(u) du
//                                    = normal_q(z) + z phi(z).
double normal_q(double z);
double normal_r(double z);

// Direct quadrature of -int f_Y log f_Y; moderate-snr cross-check for the
// identity H(X|Y) = H(X) + 0.5 log(2 pi e s^2) - h(Y).
double differential_entropy_y(const DiscreteDistribution& dist, double snr,
                              double tol = 1e-10);

}  // namespace entgauss::channel
