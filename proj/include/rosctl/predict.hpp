#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rosctl/harness.hpp"
#include "rosctl/noise.hpp"
#include "rosctl/numerics.hpp"

namespace rosctl::predict {

struct PredictorSpec {
    double b1 = 0.0;
    double window = 1.0;   // observation window s
    double horizon = 1.0;  // prediction time t
    numerics::HurstParam h{0.75};

    void validate() const;
};

// Returns the last observed value at or before t_prime; t must exceed t_prime.
double predict_martingale(const noise::SamplePath& history, double t_prime, double t);

double f_exp(double y, const PredictorSpec& spec);

// 2 cos(pi (1 - 2H)/2) Gamma(2H - 1) Gamma(3/2 - H)^2.
double c_h(numerics::HurstParam h);

// Finite-difference step for a grid parameter: grid^{2/3}.
double fd_step(double grid);
// Quadrature order used at a grid parameter.
int quad_order(double grid);

double g_exp(double x, const PredictorSpec& spec, double grid);

// Predictor weights for histories on a fixed uniform grid over (-s, 0]. Building the
// table is the expensive step; predict() is a dot product.
class LinearPredictor {
public:
    LinearPredictor(const PredictorSpec& spec, std::size_t cells, double grid);
    double predict(const noise::SamplePath& history) const;
    const std::vector<double>& weights() const { return g_hat_; }

private:
    PredictorSpec spec_;
    std::size_t cells_;
    std::vector<double> g_hat_;  // g_hat at cell midpoints
};

// History must cover [-s, 0] on a uniform grid (t0 <= -s, last time ~ 0).
double predict_linear_ou(const noise::SamplePath& history, const PredictorSpec& spec, double grid = 1.0 / 4096);

struct PredictorComparison {
    harness::MCEstimate mse_linear, mse_zero, mse_martingale;
};

// Squared errors of the linear, zero and martingale predictors on Rosenblatt-driven paths
// dx = b1 x dt + dR started at x(-s) = 0, each observed on `cells` steps over (-s, 0].
PredictorComparison compare_predictors(const PredictorSpec& spec, std::size_t cells, std::size_t n_paths,
                                       std::uint64_t seed, double grid = 1.0 / 4096, std::size_t upsampling = 256,
                                       std::size_t workers = 0);

}  // namespace rosctl::predict
