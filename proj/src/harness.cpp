#include "rosctl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "rosctl/errors.hpp"
#include "rosctl/parallel.hpp"

namespace rosctl {

std::size_t default_workers() {
    if (const char* env = std::getenv("ROSCTL_WORKERS")) {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace rosctl

namespace rosctl::harness {

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 16) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t h = xs.size() / 2;
    return pairwise_sum(xs.subspan(0, h)) + pairwise_sum(xs.subspan(h));
}

namespace {

double mean_of(std::span<const double> xs) { return pairwise_sum(xs) / static_cast<double>(xs.size()); }

std::vector<double> powers_about(std::span<const double> xs, double m, int p) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = std::pow(xs[i] - m, p);
    return out;
}

}  // namespace

MCEstimate mean_estimate(std::span<const double> xs, std::uint64_t seed) {
    if (xs.size() < 2) throw DomainError("mean_estimate needs at least two samples");
    const double n = static_cast<double>(xs.size());
    const double m = mean_of(xs);
    const auto sq = powers_about(xs, m, 2);
    const double var = pairwise_sum(sq) / (n - 1.0);
    return {m, std::sqrt(var / n), xs.size(), seed};
}

MCEstimate variance_estimate(std::span<const double> xs, std::uint64_t seed) {
    if (xs.size() < 4) throw DomainError("variance_estimate needs at least four samples");
    const double n = static_cast<double>(xs.size());
    const double m = mean_of(xs);
    const auto sq = powers_about(xs, m, 2);
    const auto qu = powers_about(xs, m, 4);
    const double m2 = pairwise_sum(sq) / n;
    const double m4 = pairwise_sum(qu) / n;
    const double var = m2 * n / (n - 1.0);
    return {var, std::sqrt(std::max(0.0, m4 - m2 * m2) / n), xs.size(), seed};
}

SummaryStats summary_stats(std::span<const double> xs) {
    if (xs.size() < 3) throw DomainError("summary_stats needs at least three samples");
    const double n = static_cast<double>(xs.size());
    SummaryStats s;
    s.mean = mean_of(xs);
    const auto sq = powers_about(xs, s.mean, 2);
    const auto cu = powers_about(xs, s.mean, 3);
    const double m2 = pairwise_sum(sq) / n;
    const double m3 = pairwise_sum(cu) / n;
    s.variance = m2 * n / (n - 1.0);
    const double scale = std::max(1.0, s.mean * s.mean);
    if (m2 > 1e-28 * scale) s.skewness = m3 / std::pow(m2, 1.5);
    return s;
}

double wasserstein1(std::span<const double> xs, std::span<const double> ys) {
    if (xs.empty() || ys.empty()) throw DomainError("wasserstein1: empty sample");
    std::vector<double> a(xs.begin(), xs.end()), b(ys.begin(), ys.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a.size() == b.size()) {
        std::vector<double> d(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) d[i] = std::abs(a[i] - b[i]);
        return mean_of(d);
    }
    // int |F_a(x) - F_b(x)| dx over the merged support.
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double prev = std::min(a[0], b[0]), total = 0.0;
    while (i < a.size() || j < b.size()) {
        double x;
        if (j >= b.size() || (i < a.size() && a[i] <= b[j]))
            x = a[i];
        else
            x = b[j];
        total += std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb) * (x - prev);
        prev = x;
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
    }
    return total;
}

MCEstimate estimate_ergodic_cost(const sde::LinearDynamics& dyn, double gain, double q, double r,
                                 const NoiseConfig& cfg, double T, double dt, std::size_t n_paths,
                                 std::uint64_t seed, std::size_t workers) {
    if (!(T > 0.0) || !(dt > 0.0) || dt > T) throw ConfigError("estimate_ergodic_cost: need 0 < dt <= T");
    if (n_paths < 2) throw ConfigError("estimate_ergodic_cost: need at least two paths");
    const auto n = static_cast<std::size_t>(std::llround(T / dt));
    const double step = T / static_cast<double>(n);

    std::unique_ptr<noise::FgnGenerator> fgn;
    std::unique_ptr<noise::RosenblattGenerator> ros;
    if (cfg.kind.kind == noise::Kind::fbm) fgn = std::make_unique<noise::FgnGenerator>(cfg.kind.h, n);
    if (cfg.kind.kind == noise::Kind::rosenblatt) {
        noise::RosenblattOptions opt;
        opt.upsampling = cfg.upsampling;
        ros = std::make_unique<noise::RosenblattGenerator>(numerics::HurstParam(cfg.kind.h), n, T, opt);
    }

    std::vector<double> per_path(n_paths);
    parallel_for(n_paths, workers, [&](std::size_t i) {
        const auto s = noise::derive_seed(seed, i);
        noise::SamplePath path;
        switch (cfg.kind.kind) {
            case noise::Kind::brownian: path = noise::gen_brownian(n, step, s); break;
            case noise::Kind::fbm: {
                std::mt19937_64 rng(s);
                std::vector<double> x;
                fgn->sample(rng, x);
                path.dt = step;
                path.kind = cfg.kind;
                path.values.assign(n + 1, 0.0);
                const double sc = std::pow(step, cfg.kind.h);
                for (std::size_t k = 0; k < n; ++k) path.values[k + 1] = path.values[k] + sc * x[k];
                break;
            }
            case noise::Kind::rosenblatt: path = ros->generate(s); break;
        }
        const auto x = sde::simulate_linear_sde_exp(dyn, gain, path);
        const double w = q + r * gain * gain;
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double v = x.values[k];
            if (!(std::abs(v) < kOverflowGuard))
                throw DivergenceError("state exceeded the overflow guard at t=" + std::to_string(step * k) +
                                      " (gain " + std::to_string(gain) + " is not stabilizing)");
            acc += w * v * v;
        }
        per_path[i] = acc * step / T;
    });
    return mean_estimate(per_path, seed);
}

}  // namespace rosctl::harness
