#include "rosctl/diffusion.hpp"

#include <cmath>
#include <random>

#include "rosctl/errors.hpp"
#include "rosctl/noise.hpp"
#include "rosctl/parallel.hpp"
#include "rosctl/sde.hpp"

namespace rosctl::diffusion {

using numerics::HurstParam;

namespace {

double standard_normal(std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    return nd(rng);
}

double constant_theta(const DiffusionSpec& spec, const char* who) {
    const auto th = spec.theta.constant_value();
    if (!th) throw ConfigError(std::string(who) + ": theta must be constant");
    if (!(*th > 0.0)) throw DomainError(std::string(who) + ": degenerate bridge, theta must be positive");
    return *th;
}

}  // namespace

Rate Rate::constant(double theta) {
    if (!(theta >= 0.0) || !std::isfinite(theta)) throw DomainError("theta must be finite and nonnegative");
    Rate r;
    r.constant_ = theta;
    r.fn_ = [theta](double) { return theta; };
    return r;
}

Rate Rate::function(std::function<double(double)> theta) {
    if (!theta) throw ConfigError("empty theta function");
    Rate r;
    r.fn_ = std::move(theta);
    return r;
}

double Rate::operator()(double t) const { return fn_(t); }

double Rate::integral(double t) const {
    if (constant_) return *constant_ * t;
    if (t == 0.0) return 0.0;
    return numerics::integrate(fn_, 0.0, t, 1e-13);
}

void DiffusionSpec::validate() const {
    if (!(T > 0.0)) throw DomainError("diffusion horizon T must be positive");
    if (!(sigma_T > 0.0)) throw DomainError("diffusion target std sigma_T must be positive");
    if (!(theta.integral(T) > 0.0)) throw DomainError("integrated rate Phi(T) must be positive");
}

BridgeParams ou_bridge_params(const DiffusionSpec& spec) {
    spec.validate();
    const double th = constant_theta(spec, "ou_bridge_params");
    const double e1 = std::exp(-th * spec.T);
    BridgeParams p;
    p.m = (spec.m_T - e1 * spec.x0) / (1.0 - e1);
    p.sigma = std::sqrt(2.0 * th * spec.sigma_T * spec.sigma_T / -std::expm1(-2.0 * th * spec.T));
    return p;
}

TerminalCheck ou_forward_terminal_check(const DiffusionSpec& spec, std::size_t n_paths, std::uint64_t seed,
                                        std::size_t n_steps) {
    if (n_steps == 0) throw ConfigError("ou_forward_terminal_check: n_steps must be positive");
    const auto bp = ou_bridge_params(spec);
    const double th = *spec.theta.constant_value();
    const double dt = spec.T / static_cast<double>(n_steps);
    const double a = std::exp(-th * dt);
    const double sd = bp.sigma * std::sqrt(-std::expm1(-2.0 * th * dt) / (2.0 * th));
    std::vector<double> xs(n_paths);
    parallel_for(n_paths, 0, [&](std::size_t i) {
        std::mt19937_64 rng(noise::derive_seed(seed, i));
        double x = spec.x0;
        for (std::size_t k = 0; k < n_steps; ++k) x = a * x + (1.0 - a) * bp.m + sd * standard_normal(rng);
        xs[i] = x;
    });
    return {harness::mean_estimate(xs, seed), harness::variance_estimate(xs, seed)};
}

double ou_mean(double s, const DiffusionSpec& spec) {
    const auto bp = ou_bridge_params(spec);
    const double th = *spec.theta.constant_value();
    const double e = std::exp(-th * s);
    return e * spec.x0 + (1.0 - e) * bp.m;
}

double ou_variance(double s, const DiffusionSpec& spec) {
    const auto bp = ou_bridge_params(spec);
    const double th = *spec.theta.constant_value();
    return bp.sigma * bp.sigma * -std::expm1(-2.0 * th * s) / (2.0 * th);
}

double ou_reverse_drift(double x, double t, const DiffusionSpec& spec) {
    const auto bp = ou_bridge_params(spec);
    const double th = *spec.theta.constant_value();
    const double s = spec.T - t;
    if (!(s > 0.0)) throw DomainError("ou_reverse_drift: reverse time must be below T");
    const double mu = std::exp(-th * s) * spec.x0 + -std::expm1(-th * s) * bp.m;
    return -th * (bp.m - x) - 2.0 * th * (x - mu) / -std::expm1(-2.0 * th * s);
}

ReverseResult ou_reverse_sample(const DiffusionSpec& spec, const std::vector<double>& mask_samples,
                                std::size_t n_steps, std::uint64_t seed) {
    if (n_steps < 2) throw ConfigError("ou_reverse_sample: need at least two steps");
    const auto bp = ou_bridge_params(spec);
    ReverseResult res;
    res.dt = spec.T / static_cast<double>(n_steps);
    res.clamp_time = spec.T - res.dt;
    res.samples.resize(mask_samples.size());
    const double sq = bp.sigma * std::sqrt(res.dt);
    parallel_for(mask_samples.size(), 0, [&](std::size_t i) {
        std::mt19937_64 rng(noise::derive_seed(seed, i));
        double x = mask_samples[i];
        for (std::size_t k = 0; k + 1 < n_steps; ++k) {
            const double t = res.dt * static_cast<double>(k);
            x += ou_reverse_drift(x, t, spec) * res.dt + sq * standard_normal(rng);
        }
        res.samples[i] = x;
    });
    return res;
}

double frac_sigma(double t, const DiffusionSpec& spec) {
    const double H = spec.h;
    return spec.sigma_T * std::pow(spec.T, -H) * std::exp(spec.theta.integral(spec.T) - spec.theta.integral(t));
}

double frac_target_level(const DiffusionSpec& spec) {
    spec.validate();
    const double eT = std::exp(-spec.theta.integral(spec.T));
    return (spec.m_T - eT * spec.x0) / (1.0 - eT);
}

MeanVar frac_forward_mv(double t, const DiffusionSpec& spec) {
    if (!(t >= 0.0 && t <= spec.T)) throw DomainError("frac_forward_mv: t outside [0, T]");
    const double level = frac_target_level(spec);
    const double phi_t = spec.theta.integral(t);
    const double phi_T = spec.theta.integral(spec.T);
    const double H = spec.h;
    MeanVar mv;
    mv.m = std::exp(-phi_t) * spec.x0 + -std::expm1(-phi_t) * level;
    if (t == spec.T) mv.m = spec.m_T;
    mv.v2 = t == 0.0 ? 0.0
                     : std::exp(2.0 * (phi_T - phi_t)) * std::pow(t / spec.T, 2.0 * H) * spec.sigma_T * spec.sigma_T;
    return mv;
}

double frac_forward_v2_quadrature(double t, const DiffusionSpec& spec, int order) {
    if (!(t > 0.0 && t <= spec.T)) throw DomainError("frac_forward_v2_quadrature: t outside (0, T]");
    const double H = spec.h;
    auto w = [&](double u) { return std::exp(spec.theta.integral(u)) * frac_sigma(u, spec); };
    const double dbl = numerics::quad_singular_2d(2.0 - 2.0 * H, t, w, w, order);
    return std::exp(-2.0 * spec.theta.integral(t)) * H * (2.0 * H - 1.0) * dbl;
}

double frac_reverse_drift(double x, double t, const DiffusionSpec& spec) {
    if (!(t > 0.0)) throw DomainError("frac_reverse_drift: singular at t = 0");
    if (!(t < spec.T)) throw DomainError("frac_reverse_drift: t must be below T");
    const double H = spec.h;
    const auto mv = frac_forward_mv(t, spec);
    return spec.theta(t) * (frac_target_level(spec) - x) + (x - mv.m) * 2.0 * H / t;
}

std::vector<double> frac_reverse_sample(const DiffusionSpec& spec, std::size_t n_paths, std::size_t n_steps,
                                        double t_stop, std::uint64_t seed, std::size_t workers) {
    spec.validate();
    if (n_steps < 2) throw ConfigError("frac_reverse_sample: need at least two steps");
    if (!(t_stop > 0.0 && t_stop < spec.T)) throw DomainError("frac_reverse_sample: t_stop outside (0, T)");
    const double H = spec.h;
    const double dt = spec.T / static_cast<double>(n_steps);
    const auto k_stop = static_cast<std::size_t>(std::llround(t_stop / dt));
    if (k_stop == 0) throw ConfigError("frac_reverse_sample: t_stop below one step");

    // Coefficients along the grid are shared by every path.
    const double level = frac_target_level(spec);
    std::vector<double> theta(n_steps + 1), mean(n_steps + 1), sig(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = dt * static_cast<double>(k);
        theta[k] = spec.theta(t);
        mean[k] = frac_forward_mv(t, spec).m;
        sig[k] = frac_sigma(t, spec);
    }
    const double inc_scale = std::pow(dt, H);
    noise::FgnGenerator gen(H, n_steps);
    std::vector<double> out(n_paths);
    parallel_for(n_paths, workers, [&](std::size_t i) {
        std::mt19937_64 rng(noise::derive_seed(seed, i));
        double x = spec.m_T + spec.sigma_T * standard_normal(rng);
        std::vector<double> inc;
        gen.sample(rng, inc);
        for (std::size_t k = n_steps; k > k_stop; --k) {
            const double t = dt * static_cast<double>(k);
            const double drift = theta[k] * (level - x) + (x - mean[k]) * 2.0 * H / t;
            x -= drift * dt + sig[k] * inc_scale * inc[n_steps - k];
        }
        out[i] = x;
    });
    return out;
}

double superdiffusion_variance(double theta, double sigma, double t, HurstParam h, int order) {
    if (!(t > 0.0)) return 0.0;
    const double H = h;
    auto w = [theta](double u) { return std::exp(theta * u); };
    return std::exp(-2.0 * theta * t) * sigma * sigma * H * (2.0 * H - 1.0) *
           numerics::quad_singular_2d(2.0 - 2.0 * H, t, w, w, order);
}

namespace {

std::vector<double> superdiffusion_terminal(double theta, double m, double sigma, double x0, double t, HurstParam h,
                                            std::size_t n_paths, std::uint64_t seed, std::size_t n_steps,
                                            std::size_t upsampling, std::size_t workers) {
    if (!(t > 0.0)) throw DomainError("super-diffusion horizon must be positive");
    if (!(theta >= 0.0)) throw DomainError("super-diffusion rate must be nonnegative");
    noise::RosenblattOptions opt;
    opt.upsampling = upsampling;
    noise::RosenblattGenerator gen(h, n_steps, t, opt);
    std::vector<double> xs(n_paths);
    parallel_for(n_paths, workers, [&](std::size_t i) {
        const auto path = gen.generate(noise::derive_seed(seed, i));
        xs[i] = sde::rosenblatt_ou_exact(theta, m, sigma, x0, path).values.back();
    });
    return xs;
}

}  // namespace

SuperDiffusionReport rosenblatt_superdiffusion_sample(double theta, double m, double sigma, double x0, double t,
                                                      HurstParam h, std::size_t n_paths, std::uint64_t seed,
                                                      std::size_t n_steps, std::size_t upsampling,
                                                      std::size_t workers) {
    SuperDiffusionReport rep;
    rep.samples = superdiffusion_terminal(theta, m, sigma, x0, t, h, n_paths, seed, n_steps, upsampling, workers);
    rep.variance = harness::variance_estimate(rep.samples, seed);
    rep.quadrature_variance = superdiffusion_variance(theta, sigma, t, h);
    rep.skewness = harness::summary_stats(rep.samples).skewness;
    return rep;
}

double chi_square_limit_check(double theta, double m, double sigma, double x0, double t, double h_near_one,
                              std::size_t n_paths, std::uint64_t seed, std::size_t n_steps, std::size_t upsampling,
                              std::size_t workers) {
    if (!(h_near_one >= 0.95 && h_near_one < 1.0)) throw DomainError("chi_square_limit_check: h must lie in [0.95, 1)");
    if (!(theta > 0.0)) throw DomainError("chi_square_limit_check: theta must be positive");
    const auto xs =
        superdiffusion_terminal(theta, m, sigma, x0, t, HurstParam(h_near_one), n_paths, seed, n_steps, upsampling, workers);
    const double e = std::exp(-theta * t);
    const double base = e * x0 + (1.0 - e) * m;
    const double scale = sigma / (theta * std::sqrt(2.0)) * (1.0 - e);
    std::vector<double> ys(n_paths);
    std::mt19937_64 rng(noise::derive_seed(seed, n_paths + 0x9e37));
    for (auto& y : ys) {
        const double z = standard_normal(rng);
        y = base + scale * (z * z - 1.0);
    }
    return harness::wasserstein1(xs, ys);
}

}  // namespace rosctl::diffusion
