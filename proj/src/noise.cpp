#include "rosctl/noise.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "fft.hpp"
#include "rosctl/errors.hpp"
#include "rosctl/harness.hpp"
#include "rosctl/io.hpp"
#include "rosctl/parallel.hpp"

namespace rosctl::noise {

using numerics::HurstParam;

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::brownian: return "brownian";
        case Kind::fbm: return "fbm";
        case Kind::rosenblatt: return "rosenblatt";
    }
    return "unknown";
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double fgn_autocov(double h, double k) {
    k = std::abs(k);
    const double e = 2.0 * h;
    return 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::abs(k - 1.0), e));
}

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

double standard_normal(std::mt19937_64& rng) {
    thread_local std::normal_distribution<double> nd;
    nd.reset();
    return nd(rng);
}

}  // namespace

FgnGenerator::FgnGenerator(double h, std::size_t n)
    : FgnGenerator(h, n, [h](double k) { return fgn_autocov(h, k); }) {}

FgnGenerator::FgnGenerator(double h, std::size_t n, const std::function<double(double)>& autocov) : h_(h), n_(n) {
    if (!(h > 0.0 && h < 1.0)) throw DomainError("fGn Hurst index must lie in (0,1)");
    if (n == 0) throw ConfigError("fGn length must be positive");
    const std::size_t m = next_pow2(n);
    const std::size_t len = 2 * m;
    std::vector<std::complex<double>> row(len);
    for (std::size_t k = 0; k <= m; ++k) row[k] = autocov(static_cast<double>(k));
    for (std::size_t k = m + 1; k < len; ++k) row[k] = row[len - k];
    detail::fft_forward(row);
    double peak = 0.0;
    for (const auto& z : row) peak = std::max(peak, std::abs(z.real()));
    sqrt_eig_.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
        double lam = row[k].real();
        if (lam < 0.0) {
            if (lam < -1e-10 * peak)
                throw std::runtime_error("circulant embedding is not nonnegative definite for h=" +
                                         std::to_string(h) + ", n=" + std::to_string(n));
            lam = 0.0;
        }
        sqrt_eig_[k] = std::sqrt(lam / static_cast<double>(len));
    }
}

void FgnGenerator::sample(std::mt19937_64& rng, std::vector<double>& out) const {
    const std::size_t len = sqrt_eig_.size();
    std::vector<std::complex<double>> w(len);
    for (std::size_t k = 0; k < len; ++k) {
        const double a = standard_normal(rng);
        const double b = standard_normal(rng);
        w[k] = {sqrt_eig_[k] * a, sqrt_eig_[k] * b};
    }
    detail::fft_forward(w);
    out.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = w[i].real();
}

SamplePath gen_fgn(double h, std::size_t n, double dt, std::uint64_t seed) {
    if (!is_pow2(n)) throw ConfigError("gen_fgn: n must be a power of two");
    if (!(dt > 0.0)) throw DomainError("gen_fgn: dt must be positive");
    FgnGenerator gen(h, n);
    std::mt19937_64 rng(seed);
    std::vector<double> x;
    gen.sample(rng, x);
    SamplePath p;
    p.dt = dt;
    p.kind = (h == 0.5) ? NoiseKind::brownian() : NoiseKind::fbm(h);
    p.seed = seed;
    p.values.resize(n + 1);
    const double s = std::pow(dt, h);
    double acc = 0.0;
    p.values[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += s * x[i];
        p.values[i + 1] = acc;
    }
    return p;
}

SamplePath gen_brownian(std::size_t n, double dt, std::uint64_t seed) {
    if (n == 0) throw ConfigError("gen_brownian: n must be positive");
    if (!(dt > 0.0)) throw DomainError("gen_brownian: dt must be positive");
    std::mt19937_64 rng(seed);
    SamplePath p;
    p.dt = dt;
    p.kind = NoiseKind::brownian();
    p.seed = seed;
    p.values.resize(n + 1);
    const double s = std::sqrt(dt);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += s * standard_normal(rng);
        p.values[i + 1] = acc;
    }
    return p;
}

// ---------------------------------------------------------------------------------------

struct RosenblattGenerator::Impl {
    double h = 0.75;
    std::size_t n = 0;
    double T = 1.0;
    RosenblattOptions opt;
    double t_ref = 1.0;
    double scale = 1.0;

    // hermite
    std::unique_ptr<FgnGenerator> fgn;

    // double integral: cells ordered past (far to near) then horizon cells ascending
    std::vector<double> sqrt_width;
    std::vector<std::size_t> active;           // active[k]: number of cells with y < t_k
    std::vector<std::vector<double>> kernels;  // kernels[k-1]: packed lower triangle

    SamplePath hermite(std::uint64_t seed) const;
    SamplePath double_integral(std::uint64_t seed) const;
    void init_hermite();
    void init_double_integral();
};

void RosenblattGenerator::Impl::init_hermite() {
    if (opt.upsampling < kMinUpsampling)
        throw ConfigError("hermite method needs upsampling >= " + std::to_string(kMinUpsampling));
    const std::size_t N = n * opt.upsampling;
    // Base correlation sqrt(r_H(k)) makes 2 rho^2 the unit fGn covariance of index H, so the
    // partial sums of X^2 - 1 have Var = 2 N^{2H} exactly and the grid covariance is exact.
    // rho(k) ~ k^{H-1}, so the limit is the Rosenblatt process.
    fgn = std::make_unique<FgnGenerator>(h, N, [hh = h](double k) { return std::sqrt(fgn_autocov(hh, k)); });
    scale = std::pow(T / static_cast<double>(N), h) / std::sqrt(2.0);
}

SamplePath RosenblattGenerator::Impl::hermite(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<double> x;
    fgn->sample(rng, x);
    SamplePath p;
    p.dt = T / static_cast<double>(n);
    p.kind = NoiseKind{Kind::rosenblatt, h};
    p.seed = seed;
    p.values.assign(n + 1, 0.0);
    const std::size_t M = opt.upsampling;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = k * M; j < (k + 1) * M; ++j) acc += x[j] * x[j] - 1.0;
        p.values[k + 1] = scale * acc;
    }
    return p;
}

void RosenblattGenerator::Impl::init_double_integral() {
    if (n > kMaxDoubleIntegralSteps)
        throw ResourceLimitError("double_integral method is limited to n <= " +
                                 std::to_string(kMaxDoubleIntegralSteps));
    const std::size_t mT = opt.horizon_cells;
    const double w0 = T / static_cast<double>(mT);
    std::vector<double> centers, widths;
    // Past cells (-L, 0] with geometrically growing widths, stored far to near.
    {
        std::vector<double> c, w;
        double edge = 0.0, width = w0;
        const double L = opt.past_extent * T;
        while (edge > -L) {
            c.push_back(edge - 0.5 * width);
            w.push_back(width);
            edge -= width;
            width *= opt.past_ratio;
        }
        centers.assign(c.rbegin(), c.rend());
        widths.assign(w.rbegin(), w.rend());
    }
    const std::size_t n_past = centers.size();
    for (std::size_t i = 0; i < mT; ++i) {
        centers.push_back((static_cast<double>(i) + 0.5) * w0);
        widths.push_back(w0);
    }
    const std::size_t m = centers.size();
    sqrt_width.resize(m);
    for (std::size_t i = 0; i < m; ++i) sqrt_width[i] = std::sqrt(widths[i]);

    // f_t(y1,y2) = d^{H-1} int_{X0}^{X1} w^a (1+w)^a dw with d = |y1-y2|, a = H/2-1,
    // X1 = (t - y_hi)/d, X0 = max(0, -y_hi)/d. With x = w/(1+w) the integrand becomes
    // x^{H/2-1}(1-x)^{-H}, a complete/incomplete beta B(H/2, 1-H).
    const double pa = h / 2.0, pb = 1.0 - h;
    const double bfull = boost::math::beta(pa, pb);
    auto tail = [&](double X) {  // int_X^inf, normalized
        return boost::math::ibetac(pa, pb, X / (1.0 + X));
    };
    active.assign(n + 1, 0);
    kernels.assign(n, {});
    const double dt = T / static_cast<double>(n);
    double var_ref = 0.0;
    const auto k_ref = std::max<std::size_t>(1, std::min<std::size_t>(n, static_cast<std::size_t>(std::llround(t_ref / dt))));
    t_ref = dt * static_cast<double>(k_ref);
    for (std::size_t k = 1; k <= n; ++k) {
        const double t = dt * static_cast<double>(k);
        std::size_t p = n_past;
        while (p < m && centers[p] < t) ++p;
        active[k] = p;
        auto& K = kernels[k - 1];
        K.assign(p * (p - 1) / 2, 0.0);
        double var = 0.0;
        for (std::size_t i = 1; i < p; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                const double yhi = std::max(centers[i], centers[j]);
                const double d = std::abs(centers[i] - centers[j]);
                const double x1 = (t - yhi) / d;
                const double x0 = std::max(0.0, -yhi) / d;
                const double f = std::pow(d, h - 1.0) * bfull * (tail(x0) - tail(x1));
                K[i * (i - 1) / 2 + j] = f;
                const double g = f * widths[i] * widths[j];
                var += 4.0 * f * g;  // 2 sum_{i != j} F_ij^2 dy_i dy_j
            }
        }
        if (k == k_ref) var_ref = var;
    }
    // R(t_k) = scale * sum_{i != j} F_ij W_i W_j; the exact discrete variance at t_ref
    // is var_ref, so the path is scaled to Var R(t_ref) = t_ref^{2H}.
    scale = std::pow(t_ref, h) / std::sqrt(var_ref);
}

SamplePath RosenblattGenerator::Impl::double_integral(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    const std::size_t m = sqrt_width.size();
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = sqrt_width[i] * standard_normal(rng);
    SamplePath p;
    p.dt = T / static_cast<double>(n);
    p.kind = NoiseKind{Kind::rosenblatt, h};
    p.seed = seed;
    p.values.assign(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        const auto& K = kernels[k - 1];
        const std::size_t a = active[k];
        double total = 0.0;
        for (std::size_t i = 1; i < a; ++i) {
            const double* row = K.data() + i * (i - 1) / 2;
            double acc = 0.0;
            for (std::size_t j = 0; j < i; ++j) acc += row[j] * w[j];
            total += w[i] * acc;
        }
        p.values[k] = scale * 2.0 * total;
    }
    return p;
}

RosenblattGenerator::RosenblattGenerator(HurstParam h, std::size_t n, double T, RosenblattOptions opt)
    : impl_(std::make_unique<Impl>()) {
    if (n == 0) throw ConfigError("Rosenblatt path needs at least one step");
    if (!(T > 0.0)) throw DomainError("Rosenblatt horizon must be positive");
    impl_->h = h.value();
    impl_->n = n;
    impl_->T = T;
    impl_->opt = opt;
    impl_->t_ref = std::min(1.0, T);
    if (opt.method == RosenblattMethod::hermite)
        impl_->init_hermite();
    else
        impl_->init_double_integral();
}

RosenblattGenerator::~RosenblattGenerator() = default;
RosenblattGenerator::RosenblattGenerator(RosenblattGenerator&&) noexcept = default;

SamplePath RosenblattGenerator::generate(std::uint64_t seed) const {
    return impl_->opt.method == RosenblattMethod::hermite ? impl_->hermite(seed)
                                                          : impl_->double_integral(seed);
}

double RosenblattGenerator::reference_time() const { return impl_->t_ref; }

SamplePath gen_rosenblatt(HurstParam h, std::size_t n, double T, std::uint64_t seed,
                          RosenblattMethod method, std::size_t upsampling) {
    RosenblattOptions opt;
    opt.method = method;
    opt.upsampling = upsampling;
    return RosenblattGenerator(h, n, T, opt).generate(seed);
}

PathEnsemble gen_ensemble(NoiseKind kind, std::size_t n, double T, std::size_t n_paths,
                          std::uint64_t base_seed, std::size_t workers, RosenblattOptions opt) {
    if (n == 0) throw ConfigError("ensemble paths need at least one step");
    if (!(T > 0.0)) throw DomainError("ensemble horizon must be positive");
    PathEnsemble ens;
    ens.base_seed = base_seed;
    ens.paths.resize(n_paths);
    const double dt = T / static_cast<double>(n);
    switch (kind.kind) {
        case Kind::brownian:
            parallel_for(n_paths, workers, [&](std::size_t i) {
                ens.paths[i] = gen_brownian(n, dt, derive_seed(base_seed, i));
            });
            break;
        case Kind::fbm: {
            FgnGenerator gen(kind.h, n);
            const double s = std::pow(dt, kind.h);
            parallel_for(n_paths, workers, [&](std::size_t i) {
                const auto seed = derive_seed(base_seed, i);
                std::mt19937_64 rng(seed);
                std::vector<double> x;
                gen.sample(rng, x);
                SamplePath p;
                p.dt = dt;
                p.kind = kind;
                p.seed = seed;
                p.values.resize(n + 1);
                double acc = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    acc += s * x[k];
                    p.values[k + 1] = acc;
                }
                ens.paths[i] = std::move(p);
            });
            break;
        }
        case Kind::rosenblatt: {
            RosenblattGenerator gen(HurstParam(kind.h), n, T, opt);
            parallel_for(n_paths, workers, [&](std::size_t i) {
                ens.paths[i] = gen.generate(derive_seed(base_seed, i));
            });
            break;
        }
    }
    return ens;
}

double covariance_rosenblatt(double s, double t, HurstParam hp) {
    if (s < 0.0 || t < 0.0) throw DomainError("covariance_rosenblatt: times must be nonnegative");
    const double e = 2.0 * hp.value();
    return 0.5 * (std::pow(t, e) + std::pow(s, e) - std::pow(std::abs(t - s), e));
}

std::vector<double> values_at(const PathEnsemble& ens, double t) {
    if (ens.paths.empty()) throw ConfigError("empty ensemble");
    const SamplePath& p0 = ens.paths.front();
    const double pos = (t - p0.t0) / p0.dt;
    const double idx = std::round(pos);
    if (idx < 0.0 || idx > static_cast<double>(p0.steps()) || std::abs(pos - idx) > 1e-9 * std::max(1.0, pos))
        throw DomainError("time " + std::to_string(t) + " is not a node of the ensemble grid");
    const auto k = static_cast<std::size_t>(idx);
    std::vector<double> v;
    v.reserve(ens.paths.size());
    for (const auto& p : ens.paths) v.push_back(p.values[k]);
    return v;
}

double self_similarity_stat(const PathEnsemble& ens, double c, double t) {
    if (ens.paths.empty()) throw ConfigError("empty ensemble");
    if (!(c > 0.0)) throw DomainError("self_similarity_stat: c must be positive");
    const SamplePath& p0 = ens.paths.front();
    if (p0.kind.kind != Kind::rosenblatt) throw ConfigError("self_similarity_stat needs a Rosenblatt ensemble");
    if (c * t > p0.horizon() * (1.0 + 1e-12) || t > p0.horizon() * (1.0 + 1e-12))
        throw DomainError("self_similarity_stat: c*t lies outside the grid");
    auto a = values_at(ens, c * t);
    auto b = values_at(ens, t);
    const double ch = std::pow(c, p0.kind.h);
    for (auto& x : b) x *= ch;
    return harness::wasserstein1(a, b);
}

void write_csv(std::ostream& os, const PathEnsemble& ens) {
    os << "t";
    for (std::size_t i = 0; i < ens.paths.size(); ++i) os << ",path_" << i;
    os << "\n";
    if (ens.paths.empty()) return;
    const SamplePath& p0 = ens.paths.front();
    for (std::size_t k = 0; k <= p0.steps(); ++k) {
        os << io::fmt(p0.time(k));
        for (const auto& p : ens.paths) os << ',' << io::fmt(p.values[k]);
        os << "\n";
    }
}

}  // namespace rosctl::noise
