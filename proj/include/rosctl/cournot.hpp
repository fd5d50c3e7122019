#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rosctl/harness.hpp"
#include "rosctl/numerics.hpp"

namespace rosctl::cournot {

struct CournotSpec {
    std::size_t n_producers = 2;
    double a_intercept = 0.0;  // constant a of the price dynamics
    double demand = 0.0;       // D
    std::vector<double> c, r, rbar;
    double epsilon = 1.0;
    numerics::HurstParam h{0.75};
    double p0 = 0.0;

    // n = 1 is accepted only when allow_single is set (test-only degenerate market).
    void validate(bool allow_single = false) const;
};

struct MeanMarket {
    double p_bar_star = 0.0;
    std::vector<double> eta_bar, rho, u_bar, payoffs_bar;
    double consistency_residual = 0.0;  // |p* - (a + D - sum u_bar)|
};

struct CournotEquilibrium {
    std::vector<double> eta, eta_bar, rho;
    double p_bar_star = 0.0;
    std::vector<double> payoffs, payoffs_dev, payoffs_mean;
    double stability_dev = 0.0;   // 1 + sum eta
    double stability_mean = 0.0;  // 1 + sum eta_bar
    std::vector<double> foc_residuals;
};

// Deviation payoffs; empty when 1 + sum eta <= 0.
std::optional<std::vector<double>> tilde_payoff(const std::vector<double>& eta, const CournotSpec& spec);

// Positive root of (H-1) r eta^2 - (r a + 2H - 1) eta + a = 0, a = a_aggregate.
double best_response_eta(double a_aggregate, double r_i, numerics::HurstParam h);
double foc_residual(double eta_i, double a_aggregate, double r_i, numerics::HurstParam h);

std::vector<double> eta_star_fixed_point(const CournotSpec& spec, double tol = 1e-13,
                                         std::size_t max_iter = 100000, double damping = 0.5);

MeanMarket bar_market_equilibrium(const CournotSpec& spec);

// The stationary mean-market payoff of producer i evaluated at the steady price
// (a + D - sum rho) / (1 + sum eta_bar) for arbitrary linear mean strategies.
double stationary_mean_payoff(std::size_t i, const std::vector<double>& eta_bar, const std::vector<double>& rho,
                              const CournotSpec& spec);

CournotEquilibrium full_equilibrium(const CournotSpec& spec);

double price_of_simplicity(double p_mean, double c_i, double r_i, double rbar_i);

struct MfgBaseline {
    std::vector<double> slope, intercept;  // u_k = slope_k p + intercept_k = (p - c_k)/r_k
    std::vector<double> payoffs_mfg, payoffs_mftg, gaps, price_of_simplicity;
    double p_mean = 0.0, p_var = 0.0;
    bool independent_of_rbar = true;
};

MfgBaseline mfg_baseline(const CournotSpec& spec, const std::vector<double>& p_samples);

// Long-run average payoff of every producer under the equilibrium strategies, estimated by
// simulating the price on [0, T] with Rosenblatt noise.
std::vector<harness::MCEstimate> simulate_payoffs(const CournotSpec& spec, const CournotEquilibrium& eq, double T,
                                                  double dt, std::size_t n_paths, std::uint64_t seed,
                                                  std::size_t upsampling = 64, std::size_t workers = 0);

// Prices p(T) = pbar(T) + p~(T) of n_paths simulated markets under the equilibrium strategies.
std::vector<double> simulate_prices(const CournotSpec& spec, const CournotEquilibrium& eq, double T, double dt,
                                    std::size_t n_paths, std::uint64_t seed, std::size_t upsampling = 64,
                                    std::size_t workers = 0);

void write_csv(std::ostream& os, const CournotEquilibrium& eq);

}  // namespace rosctl::cournot
