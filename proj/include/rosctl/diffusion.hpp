#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rosctl/harness.hpp"
#include "rosctl/numerics.hpp"

namespace rosctl::diffusion {

enum class Driver { brownian, fbm, rosenblatt };

// Mean-reversion rate theta(t) >= 0 with its integral Phi(t).
class Rate {
public:
    static Rate constant(double theta);
    static Rate function(std::function<double(double)> theta);
    double operator()(double t) const;
    double integral(double t) const;  // Phi(t) = int_0^t theta
    std::optional<double> constant_value() const { return constant_; }

private:
    std::function<double(double)> fn_;
    std::optional<double> constant_;
};

struct DiffusionSpec {
    Rate theta = Rate::constant(1.0);
    double T = 1.0;
    double m_T = 0.0;
    double sigma_T = 1.0;
    numerics::HurstParam h{0.75};
    double x0 = 0.0;
    Driver driver = Driver::brownian;

    void validate() const;
};

struct BridgeParams {
    double m = 0.0;
    double sigma = 0.0;
};

BridgeParams ou_bridge_params(const DiffusionSpec& spec);

struct TerminalCheck {
    harness::MCEstimate mean, variance;
};

// Forward OU with the bridge parameters, simulated with exact transitions on n_steps cells.
TerminalCheck ou_forward_terminal_check(const DiffusionSpec& spec, std::size_t n_paths, std::uint64_t seed,
                                        std::size_t n_steps = 50);

struct ReverseResult {
    std::vector<double> samples;  // at the clamp time
    double clamp_time = 0.0;      // T - dt
    double dt = 0.0;
};

// Forward-time mean mu(s) and variance v^2(s) of the Brownian OU bridge construction.
double ou_mean(double s, const DiffusionSpec& spec);
double ou_variance(double s, const DiffusionSpec& spec);

// Reverse drift at reverse time t (forward time T - t): the time reversal of the OU with
// score -(x - mu)/v^2.
double ou_reverse_drift(double x, double t, const DiffusionSpec& spec);

ReverseResult ou_reverse_sample(const DiffusionSpec& spec, const std::vector<double>& mask_samples,
                                std::size_t n_steps, std::uint64_t seed);

struct MeanVar {
    double m = 0.0;
    double v2 = 0.0;
};

// sigma(t) = sigma_T T^{-H} e^{Phi(T) - Phi(t)} of the fractional forward construction.
double frac_sigma(double t, const DiffusionSpec& spec);
double frac_target_level(const DiffusionSpec& spec);  // (m_T - e^{-Phi(T)} x0)/(1 - e^{-Phi(T)})
MeanVar frac_forward_mv(double t, const DiffusionSpec& spec);
// v^2(t) from the general double-integral formula via quad_singular_2d.
double frac_forward_v2_quadrature(double t, const DiffusionSpec& spec, int order = 40);

double frac_reverse_drift(double x, double t, const DiffusionSpec& spec);

// Integrates the fractional reverse dynamics backward from t = T (initial law N(m_T, sigma_T^2))
// to t_stop with fGn increments scaled by sigma(t); returns the samples at t_stop.
std::vector<double> frac_reverse_sample(const DiffusionSpec& spec, std::size_t n_paths, std::size_t n_steps,
                                        double t_stop, std::uint64_t seed, std::size_t workers = 0);

struct SuperDiffusionReport {
    std::vector<double> samples;
    harness::MCEstimate variance;
    double quadrature_variance = 0.0;
    std::optional<double> skewness;
};

// e^{-2 theta t} sigma^2 H(2H-1) int int e^{theta u} e^{theta v} |u-v|^{2H-2}.
double superdiffusion_variance(double theta, double sigma, double t, numerics::HurstParam h, int order = 40);

SuperDiffusionReport rosenblatt_superdiffusion_sample(double theta, double m, double sigma, double x0, double t,
                                                      numerics::HurstParam h, std::size_t n_paths,
                                                      std::uint64_t seed, std::size_t n_steps = 128,
                                                      std::size_t upsampling = 64, std::size_t workers = 0);

double chi_square_limit_check(double theta, double m, double sigma, double x0, double t, double h_near_one,
                              std::size_t n_paths, std::uint64_t seed, std::size_t n_steps = 64,
                              std::size_t upsampling = 64, std::size_t workers = 0);

}  // namespace rosctl::diffusion
