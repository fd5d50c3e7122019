#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <vector>

#include "rosctl/numerics.hpp"

namespace rosctl::noise {

enum class Kind { brownian, fbm, rosenblatt };

struct NoiseKind {
    Kind kind = Kind::brownian;
    double h = 0.5;  // Hurst index; 1/2 for brownian

    static NoiseKind brownian() { return {Kind::brownian, 0.5}; }
    static NoiseKind fbm(double h) { return {Kind::fbm, h}; }
    static NoiseKind rosenblatt(numerics::HurstParam h) { return {Kind::rosenblatt, h.value()}; }
    bool operator==(const NoiseKind&) const = default;
};

const char* kind_name(Kind k);

struct SamplePath {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> values;  // length n+1, values[0] = 0 for noise paths
    NoiseKind kind;
    std::uint64_t seed = 0;

    std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
    double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
    double horizon() const { return time(steps()); }
};

struct PathEnsemble {
    std::vector<SamplePath> paths;
    std::uint64_t base_seed = 0;
};

// Seed of path `index` in an ensemble with base seed `base` (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

enum class RosenblattMethod { hermite, double_integral };

struct RosenblattOptions {
    RosenblattMethod method = RosenblattMethod::hermite;
    std::size_t upsampling = 256;   // hermite: base Gaussians per output step (>= 64)
    std::size_t horizon_cells = 96;  // double_integral: uniform y-cells on [0, T]
    double past_ratio = 1.15;        // double_integral: geometric growth of past cells
    double past_extent = 1e6;        // double_integral: past truncation in units of T
};

inline constexpr std::size_t kMaxDoubleIntegralSteps = 64;
inline constexpr std::size_t kMinUpsampling = 64;

// Circulant-embedding generator of unit-step fractional Gaussian noise. Construction
// factors the embedding once; sample() is const and thread-safe.
class FgnGenerator {
public:
    FgnGenerator(double h, std::size_t n);
    // Stationary Gaussian sequence with autocovariance autocov(k), autocov(0) = 1.
    FgnGenerator(double h, std::size_t n, const std::function<double(double)>& autocov);
    std::size_t size() const noexcept { return n_; }
    double hurst() const noexcept { return h_; }
    // Writes n increments with Var = 1 and the unit-step fGn autocovariance.
    void sample(std::mt19937_64& rng, std::vector<double>& out) const;

private:
    double h_;
    std::size_t n_;
    std::vector<double> sqrt_eig_;  // sqrt(lambda_k / (2m))
};

// Unit-step fGn autocovariance r(k) = (|k+1|^{2h} - 2|k|^{2h} + |k-1|^{2h}) / 2.
double fgn_autocov(double h, double k);

// Reusable Rosenblatt path generator for a fixed (H, n, T, options).
class RosenblattGenerator {
public:
    RosenblattGenerator(numerics::HurstParam h, std::size_t n, double T, RosenblattOptions opt = {});
    ~RosenblattGenerator();
    RosenblattGenerator(RosenblattGenerator&&) noexcept;
    SamplePath generate(std::uint64_t seed) const;
    double reference_time() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SamplePath gen_fgn(double h, std::size_t n, double dt, std::uint64_t seed);
SamplePath gen_brownian(std::size_t n, double dt, std::uint64_t seed);
SamplePath gen_rosenblatt(numerics::HurstParam h, std::size_t n, double T, std::uint64_t seed,
                          RosenblattMethod method = RosenblattMethod::hermite,
                          std::size_t upsampling = 256);

// Ensemble of n_paths paths with n steps on [0, T]; path i uses derive_seed(base_seed, i).
// fbm paths of any length are produced by truncating a power-of-two embedding.
PathEnsemble gen_ensemble(NoiseKind kind, std::size_t n, double T, std::size_t n_paths,
                          std::uint64_t base_seed, std::size_t workers = 0,
                          RosenblattOptions opt = {});

double covariance_rosenblatt(double s, double t, numerics::HurstParam h);

// Wasserstein-1 distance between the ensemble laws of R(c t) and c^H R(t).
double self_similarity_stat(const PathEnsemble& ens, double c, double t);

// Values of every path at time t (must be a grid node up to rounding).
std::vector<double> values_at(const PathEnsemble& ens, double t);

void write_csv(std::ostream& os, const PathEnsemble& ens);

}  // namespace rosctl::noise
