#include "rosctl/cournot.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "rosctl/errors.hpp"
#include "rosctl/io.hpp"
#include "rosctl/noise.hpp"
#include "rosctl/parallel.hpp"

namespace rosctl::cournot {

using numerics::HurstParam;

void CournotSpec::validate(bool allow_single) const {
    if (n_producers < (allow_single ? 1u : 2u)) throw ConfigError("Cournot market needs at least two producers");
    if (c.size() != n_producers || r.size() != n_producers || rbar.size() != n_producers)
        throw ConfigError("Cournot per-producer sequences must have n_producers entries");
    if (!(epsilon > 0.0)) throw DomainError("price adjustment speed epsilon must be positive");
    for (std::size_t i = 0; i < n_producers; ++i) {
        if (!(r[i] > 0.0)) throw DomainError("r_i must be positive");
        if (!(rbar[i] >= 0.0)) throw DomainError("rbar_i must be nonnegative");
    }
}

std::optional<std::vector<double>> tilde_payoff(const std::vector<double>& eta, const CournotSpec& sp) {
    if (eta.size() != sp.r.size()) throw ConfigError("eta must have one entry per producer");
    double s = 1.0;
    for (double e : eta) s += e;
    if (!(s > 0.0)) return std::nullopt;
    const double H = sp.h.value();
    const double f = numerics::gamma_fn(2.0 * H + 1.0) / (2.0 * std::pow(s / sp.epsilon, 2.0 * H));
    std::vector<double> out(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) out[i] = f * (eta[i] - 0.5 * sp.r[i] * eta[i] * eta[i]);
    return out;
}

double best_response_eta(double a, double r_i, HurstParam hp) {
    const double H = hp.value();
    const double b = r_i * a + 2.0 * H - 1.0;
    const double disc = b * b + 4.0 * (1.0 - H) * r_i * a;
    if (disc < 0.0) throw DomainError("best_response_eta: negative discriminant");
    const double sq = std::sqrt(disc);
    // (-b + sq) / (2(1-H) r) rewritten without cancellation: 2a / (b + sq).
    if (b > 0.0) return 2.0 * a / (b + sq);
    return (-b + sq) / (2.0 * (1.0 - H) * r_i);
}

double foc_residual(double eta, double a, double r_i, HurstParam hp) {
    const double H = hp.value();
    return (H - 1.0) * r_i * eta * eta - (r_i * a + 2.0 * H - 1.0) * eta + a;
}

std::vector<double> eta_star_fixed_point(const CournotSpec& sp, double tol, std::size_t max_iter, double damping) {
    sp.validate(true);
    const std::size_t n = sp.n_producers;
    std::vector<double> eta(n, 0.0);
    double res = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < max_iter && !(res < tol); ++it) {
        double sum = 0.0;
        for (double e : eta) sum += e;
        std::vector<double> br(n);
        res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            br[i] = best_response_eta(1.0 + sum - eta[i], sp.r[i], sp.h);
            res = std::max(res, std::abs(br[i] - eta[i]));
        }
        for (std::size_t i = 0; i < n; ++i) eta[i] += damping * (br[i] - eta[i]);
    }
    if (!(res < tol)) throw ConvergenceError("Cournot eta fixed point did not converge", res);
    double sum = 1.0;
    for (double e : eta) sum += e;
    if (!(sum > 0.0)) throw InadmissibleError("Cournot eta fixed point violates 1 + sum eta > 0");
    return eta;
}

MeanMarket bar_market_equilibrium(const CournotSpec& sp) {
    sp.validate(true);
    MeanMarket m;
    double num = sp.a_intercept + sp.demand, den = 1.0;
    for (std::size_t i = 0; i < sp.n_producers; ++i) {
        const double rr = sp.r[i] + sp.rbar[i];
        if (!(rr > 0.0)) throw DomainError("r_i + rbar_i must be positive");
        num += sp.c[i] / rr;
        den += 1.0 / rr;
    }
    m.p_bar_star = num / den;
    double supply = 0.0;
    for (std::size_t i = 0; i < sp.n_producers; ++i) {
        const double rr = sp.r[i] + sp.rbar[i];
        m.eta_bar.push_back(1.0 / rr);
        m.rho.push_back(-sp.c[i] / rr);
        const double u = (m.p_bar_star - sp.c[i]) / rr;
        m.u_bar.push_back(u);
        m.payoffs_bar.push_back((m.p_bar_star - sp.c[i]) * (m.p_bar_star - sp.c[i]) / (2.0 * rr));
        supply += u;
    }
    m.consistency_residual = std::abs(m.p_bar_star - (sp.a_intercept + sp.demand - supply));
    return m;
}

double stationary_mean_payoff(std::size_t i, const std::vector<double>& eta_bar, const std::vector<double>& rho,
                              const CournotSpec& sp) {
    double srho = 0.0, seta = 1.0;
    for (std::size_t j = 0; j < eta_bar.size(); ++j) {
        srho += rho[j];
        seta += eta_bar[j];
    }
    if (!(seta > 0.0)) return -std::numeric_limits<double>::infinity();
    const double p = (sp.a_intercept + sp.demand - srho) / seta;
    const double rr = sp.r[i] + sp.rbar[i];
    const double e = eta_bar[i], rh = rho[i];
    return (e - 0.5 * rr * e * e) * p * p + (rh - sp.c[i] * e - rr * e * rh) * p - (sp.c[i] * rh + 0.5 * rr * rh * rh);
}

CournotEquilibrium full_equilibrium(const CournotSpec& sp) {
    CournotEquilibrium eq;
    eq.eta = eta_star_fixed_point(sp);
    const auto mean = bar_market_equilibrium(sp);
    eq.eta_bar = mean.eta_bar;
    eq.rho = mean.rho;
    eq.p_bar_star = mean.p_bar_star;
    const auto dev = tilde_payoff(eq.eta, sp);
    if (!dev) throw InadmissibleError("deviation gains are not admissible");
    eq.payoffs_dev = *dev;
    eq.payoffs_mean = mean.payoffs_bar;
    eq.stability_dev = 1.0;
    eq.stability_mean = 1.0;
    for (std::size_t i = 0; i < sp.n_producers; ++i) {
        eq.stability_dev += eq.eta[i];
        eq.stability_mean += eq.eta_bar[i];
        eq.payoffs.push_back(eq.payoffs_dev[i] + eq.payoffs_mean[i]);
    }
    for (std::size_t i = 0; i < sp.n_producers; ++i)
        eq.foc_residuals.push_back(std::abs(foc_residual(eq.eta[i], eq.stability_dev - eq.eta[i], sp.r[i], sp.h)));
    if (!(eq.stability_dev > 0.0) || !(eq.stability_mean > 0.0))
        throw InadmissibleError("Cournot equilibrium violates the admissibility constraints");
    return eq;
}

double price_of_simplicity(double p_mean, double c_i, double r_i, double rbar_i) {
    if (!(r_i > 0.0)) throw DomainError("price_of_simplicity: r_i must be positive");
    const double m = p_mean - c_i;
    return 0.5 * (1.0 / (r_i + rbar_i) - (r_i - rbar_i) / (r_i * r_i)) * m * m;
}

MfgBaseline mfg_baseline(const CournotSpec& sp, const std::vector<double>& p) {
    sp.validate(true);
    if (p.empty()) throw ConfigError("mfg_baseline needs price samples");
    MfgBaseline b;
    const double n = static_cast<double>(p.size());
    b.p_mean = harness::pairwise_sum(p) / n;
    std::vector<double> dev(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) dev[j] = (p[j] - b.p_mean) * (p[j] - b.p_mean);
    b.p_var = harness::pairwise_sum(dev) / n;
    for (std::size_t k = 0; k < sp.n_producers; ++k) {
        const double r = sp.r[k], rb = sp.rbar[k], c = sp.c[k];
        // The frozen mean-field term does not enter the best response, so rbar is absent here.
        b.slope.push_back(1.0 / r);
        b.intercept.push_back(-c / r);
        std::vector<double> sq(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) sq[j] = (p[j] - c) * (p[j] - c);
        const double gross = harness::pairwise_sum(sq) / n / (2.0 * r);
        const double mean_supply = (b.p_mean - c) / r;
        b.payoffs_mfg.push_back(gross - 0.5 * rb * mean_supply * mean_supply);
        const double m = b.p_mean - c;
        b.payoffs_mftg.push_back(b.p_var / (2.0 * r) + m * m / (2.0 * (r + rb)));
        b.gaps.push_back(b.payoffs_mftg.back() - b.payoffs_mfg.back());
        b.price_of_simplicity.push_back(price_of_simplicity(b.p_mean, c, r, rb));
    }
    return b;
}

std::vector<harness::MCEstimate> simulate_payoffs(const CournotSpec& sp, const CournotEquilibrium& eq, double T,
                                                  double dt, std::size_t n_paths, std::uint64_t seed,
                                                  std::size_t upsampling, std::size_t workers) {
    sp.validate(true);
    if (!(T > 0.0) || !(dt > 0.0) || dt > T) throw ConfigError("simulate_payoffs: need 0 < dt <= T");
    const auto steps = static_cast<std::size_t>(std::llround(T / dt));
    const double h = T / static_cast<double>(steps);
    const std::size_t n = sp.n_producers;
    noise::RosenblattOptions opt;
    opt.upsampling = upsampling;
    noise::RosenblattGenerator gen(sp.h, steps, T, opt);

    // Deterministic mean price: pbar' = (a + D - sum(eta_bar pbar + rho) - pbar)/eps, exact
    // exponential relaxation toward p*.
    const double kappa = eq.stability_mean / sp.epsilon;
    const double beta = eq.stability_dev / sp.epsilon;
    std::vector<double> pbar(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
        pbar[k] = eq.p_bar_star + (sp.p0 - eq.p_bar_star) * std::exp(-kappa * h * static_cast<double>(k));

    std::vector<std::vector<double>> per_path(n, std::vector<double>(n_paths));
    parallel_for(n_paths, workers, [&](std::size_t m) {
        const auto path = gen.generate(noise::derive_seed(seed, m));
        const double decay = std::exp(-beta * h), mid = std::exp(-0.5 * beta * h);
        double pt = 0.0;  // p - pbar
        std::vector<double> acc(n, 0.0);
        for (std::size_t k = 0; k < steps; ++k) {
            const double p = pbar[k] + pt;
            for (std::size_t i = 0; i < n; ++i) {
                const double ub = eq.eta_bar[i] * pbar[k] + eq.rho[i];
                const double u = eq.eta[i] * pt + ub;
                acc[i] += p * u - sp.c[i] * u - 0.5 * sp.r[i] * u * u - 0.5 * sp.rbar[i] * ub * ub;
            }
            pt = decay * pt + mid * (path.values[k + 1] - path.values[k]);
        }
        for (std::size_t i = 0; i < n; ++i) per_path[i][m] = acc[i] * h / T;
    });
    std::vector<harness::MCEstimate> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(harness::mean_estimate(per_path[i], seed));
    return out;
}

std::vector<double> simulate_prices(const CournotSpec& sp, const CournotEquilibrium& eq, double T, double dt,
                                    std::size_t n_paths, std::uint64_t seed, std::size_t upsampling,
                                    std::size_t workers) {
    sp.validate(true);
    if (!(T > 0.0) || !(dt > 0.0) || dt > T) throw ConfigError("simulate_prices: need 0 < dt <= T");
    const auto steps = static_cast<std::size_t>(std::llround(T / dt));
    const double h = T / static_cast<double>(steps);
    noise::RosenblattOptions opt;
    opt.upsampling = upsampling;
    noise::RosenblattGenerator gen(sp.h, steps, T, opt);
    const double kappa = eq.stability_mean / sp.epsilon;
    const double beta = eq.stability_dev / sp.epsilon;
    const double pbar_T = eq.p_bar_star + (sp.p0 - eq.p_bar_star) * std::exp(-kappa * T);
    std::vector<double> out(n_paths);
    parallel_for(n_paths, workers, [&](std::size_t m) {
        const auto path = gen.generate(noise::derive_seed(seed, m));
        const double decay = std::exp(-beta * h), mid = std::exp(-0.5 * beta * h);
        double pt = 0.0;
        for (std::size_t k = 0; k < steps; ++k) pt = decay * pt + mid * (path.values[k + 1] - path.values[k]);
        out[m] = pbar_T + pt;
    });
    return out;
}

void write_csv(std::ostream& os, const CournotEquilibrium& eq) {
    os << "i,eta,eta_bar,rho,payoff\n";
    for (std::size_t i = 0; i < eq.eta.size(); ++i)
        os << i << ',' << io::fmt(eq.eta[i]) << ',' << io::fmt(eq.eta_bar[i]) << ',' << io::fmt(eq.rho[i]) << ','
           << io::fmt(eq.payoffs[i]) << "\n";
}

}  // namespace rosctl::cournot
