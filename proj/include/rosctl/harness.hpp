#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rosctl/noise.hpp"
#include "rosctl/sde.hpp"

namespace rosctl::harness {

struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

// Mean and standard error of per-path values (pairwise summation, order-fixed).
MCEstimate mean_estimate(std::span<const double> xs, std::uint64_t seed = 0);
// Unbiased variance and its delta-method standard error from the fourth central moment.
MCEstimate variance_estimate(std::span<const double> xs, std::uint64_t seed = 0);

struct SummaryStats {
    double mean = 0.0;
    double variance = 0.0;              // unbiased
    std::optional<double> skewness;     // empty when the variance vanishes
};

SummaryStats summary_stats(std::span<const double> xs);

// Exact 1-D Wasserstein-1 distance between two empirical laws. Equal sizes reduce to
// the mean absolute difference of sorted samples; unequal sizes integrate |F - G|.
double wasserstein1(std::span<const double> xs, std::span<const double> ys);

double pairwise_sum(std::span<const double> xs);

struct NoiseConfig {
    noise::NoiseKind kind = noise::NoiseKind::brownian();
    std::size_t upsampling = 64;  // Rosenblatt hermite upsampling
};

// Path average of (1/T) int_0^T (q x^2 + r u^2) dt under u = gain * x.
MCEstimate estimate_ergodic_cost(const sde::LinearDynamics& dyn, double gain, double q, double r,
                                 const NoiseConfig& noise, double T, double dt, std::size_t n_paths,
                                 std::uint64_t seed, std::size_t workers = 0);

inline constexpr double kOverflowGuard = 1e150;

}  // namespace rosctl::harness
