#pragma once

#include "rosctl/numerics.hpp"

namespace rosctl::control {

struct ErgodicSolution {
    double gain = 0.0;         // K
    double cost = 0.0;         // L_inf(K)
    double riccati_p = 0.0;    // P with K = b2 P / r
    double closed_loop = 0.0;  // b1 + b2 K < 0
};

struct MfErgodicSolution {
    double gain_dev = 0.0;   // K*
    double gain_mean = 0.0;  // Kbar*
    double cost = 0.0;
    double cost_dev = 0.0;
    double cost_mean = 0.0;
    double stability_dev = 0.0;   // b1 + b2 K*
    double stability_mean = 0.0;  // b1 + bbar1 + (b2 + bbar2) Kbar*
};

struct SurrogateResult {
    double gain = 0.0;
    double true_cost = 0.0;
    double optimal_cost = 0.0;
    double gap = 0.0;
};

// Radical formula for the optimal stationary gain; h may be 1/2 (Brownian/deterministic).
double gain_formula(double b1, double b2, double q, double r, double h);

ErgodicSolution optimal_gain(double b1, double b2, double q, double r, numerics::HurstParam h);

// Gamma(2H+1)(q + r k^2) / (2 (-(b1 + b2 k))^{2H}); +infinity when b1 + b2 k >= 0.
double ergodic_cost(double k, double b1, double b2, double q, double r, double h);
// Gamma(2H) (-r k / b2) / (-(b1 + b2 k))^{2H-1}; equals ergodic_cost only at the optimal gain.
double ergodic_cost_at_optimum(double k, double b1, double b2, double r, double h);

bool is_infinite_cost(double v);

double stationary_second_moment(double b, double h);

SurrogateResult surrogate_gain(numerics::HurstParam h_true, double h_assumed, double b1, double b2,
                               double q, double r);

MfErgodicSolution variance_aware_gains(double b1, double b2, double bbar0, double bbar1, double bbar2,
                                       double q, double qbar, double r, double rbar,
                                       numerics::HurstParam h);

// Mean-part cost (qbar + rbar K^2) bbar0^2 / (b1 + bbar1 + (b2 + bbar2) K)^2 of a mean gain K.
double mean_part_cost(double kbar, double b1, double b2, double bbar0, double bbar1, double bbar2,
                      double qbar, double rbar);

}  // namespace rosctl::control
