#include "rosctl/predict.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rosctl/errors.hpp"
#include "rosctl/parallel.hpp"
#include "rosctl/sde.hpp"

namespace rosctl::predict {

using numerics::HurstParam;

void PredictorSpec::validate() const {
    if (!(window > 0.0)) throw DomainError("predictor window must be positive");
    if (!(horizon > 0.0)) throw DomainError("predictor horizon must be positive");
    if (!std::isfinite(b1)) throw DomainError("predictor drift must be finite");
}

double predict_martingale(const noise::SamplePath& history, double t_prime, double t) {
    if (!(t > t_prime)) throw DomainError("predict_martingale: t must exceed t'");
    if (history.values.empty()) throw ConfigError("predict_martingale: empty history");
    const double tol = 1e-9 * history.dt;
    if (t_prime < history.t0 - tol || t_prime > history.horizon() + tol)
        throw DomainError("predict_martingale: t' outside the history");
    const double k = std::floor((t_prime - history.t0) / history.dt + 1e-9);
    const auto idx = std::min(history.steps(), static_cast<std::size_t>(std::max(0.0, k)));
    return history.values[idx];
}

namespace {

// F_exp without the domain check; the stencil of g_exp reaches slightly past y = 1.
// With w = (x + s y)^{2H-1} the integrand becomes e^{-b1 (w^{1/(2H-1)} - s y)} / (2H - 1).
double f_raw(double y, const PredictorSpec& spec) {
    const double H = spec.h;
    const double p = 2.0 * H - 1.0;
    const double sy = spec.window * y;
    const double lo = std::pow(sy, p);
    const double hi = std::pow(spec.horizon + sy, p);
    double integral;
    auto f = [&](double w) { return std::exp(-spec.b1 * (std::pow(w, 1.0 / p) - sy)); };
    integral = numerics::integrate(f, lo, hi, 1e-12);
    return std::pow(spec.window, 1.0 - 2.0 * H) * integral / p;
}

// I(xi) = int_0^xi eta^a (xi - eta)^a F(eta) d eta with a = 1/2 - H.
double inner(double xi, const PredictorSpec& spec, const numerics::GaussRule& rule) {
    const double a = 0.5 - spec.h;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f_raw(xi * rule.nodes[i], spec);
    return std::pow(xi, 2.0 * a + 1.0) * acc;
}

// K(x) = int_x^1 xi^{2H-1} (xi - x)^a I'(xi) d xi.
double outer(double x, const PredictorSpec& spec, const numerics::GaussRule& in_rule,
             const numerics::GaussRule& out_rule, double d) {
    const double H = spec.h;
    const double a = 0.5 - H;
    const double len = 1.0 - x;
    double acc = 0.0;
    for (std::size_t i = 0; i < out_rule.nodes.size(); ++i) {
        const double xi = x + len * out_rule.nodes[i];
        const double di = (inner(xi + d, spec, in_rule) - inner(xi - d, spec, in_rule)) / (2.0 * d);
        acc += out_rule.weights[i] * std::pow(xi, 2.0 * H - 1.0) * di;
    }
    return std::pow(len, a + 1.0) * acc;
}

}  // namespace

double f_exp(double y, const PredictorSpec& spec) {
    spec.validate();
    if (!(y > 0.0 && y < 1.0)) throw DomainError("f_exp: y must lie in (0, 1)");
    return f_raw(y, spec);
}

double c_h(HurstParam h) {
    const double H = h;
    const double g = numerics::gamma_fn(1.5 - H);
    return 2.0 * std::cos(0.5 * std::numbers::pi * (1.0 - 2.0 * H)) * numerics::gamma_fn(2.0 * H - 1.0) * g * g;
}

double fd_step(double grid) { return std::pow(grid, 2.0 / 3.0); }

int quad_order(double grid) { return std::clamp(static_cast<int>(std::lround(8.0 * std::cbrt(1.0 / grid))), 16, 256); }

double g_exp(double x, const PredictorSpec& spec, double grid) {
    spec.validate();
    if (!(grid > 0.0 && grid < 1.0)) throw DomainError("g_exp: grid must lie in (0, 1)");
    const double d = fd_step(grid);
    const double lo = 2.0 * d;
    if (!(x > lo && x + d < 1.0)) {
        throw EvaluationError("g_exp: x=" + std::to_string(x) + " too close to the boundary; minimal offset from 0 is " +
                                  std::to_string(lo) + ", from 1 is " + std::to_string(d),
                              x <= lo ? lo : d);
    }
    const double a = 0.5 - spec.h;
    const int n = quad_order(grid);
    const auto& in_rule = numerics::gauss_jacobi01(n, a, a);
    const auto& out_rule = numerics::gauss_jacobi01(n, a, 0.0);
    const double dk = (outer(x + d, spec, in_rule, out_rule, d) - outer(x - d, spec, in_rule, out_rule, d)) / (2.0 * d);
    return -std::pow(x, a) * dk / c_h(spec.h);
}

LinearPredictor::LinearPredictor(const PredictorSpec& spec, std::size_t cells, double grid)
    : spec_(spec), cells_(cells) {
    spec.validate();
    if (cells == 0) throw ConfigError("linear predictor needs at least one history cell");
    const double d = fd_step(grid);
    const double z_lo = 2.0 * d * 1.0001;
    const double z_hi = 1.0 - d * 1.0001;
    const double a = 0.5 - spec.h;
    // G behaves like z^a near 0 and (1 - z)^a near 1; cells outside the stencil range use
    // those power laws anchored at the nearest admissible point.
    double g_lo = 0.0, g_hi = 0.0;
    bool have_lo = false, have_hi = false;
    const double du = spec.window / static_cast<double>(cells);
    g_hat_.resize(cells);
    for (std::size_t k = 0; k < cells; ++k) {
        const double u = -spec.window + du * (static_cast<double>(k) + 0.5);
        const double z = -u / spec.window;
        double g;
        if (z < z_lo) {
            if (!have_lo) g_lo = g_exp(z_lo, spec, grid), have_lo = true;
            g = g_lo * std::pow(z / z_lo, a);
        } else if (z > z_hi) {
            if (!have_hi) g_hi = g_exp(z_hi, spec, grid), have_hi = true;
            g = g_hi * std::pow((1.0 - z) / (1.0 - z_hi), a);
        } else {
            g = g_exp(z, spec, grid);
        }
        g_hat_[k] = std::exp(spec.b1 * u) * g;
    }
}

double LinearPredictor::predict(const noise::SamplePath& history) const {
    const double s = spec_.window;
    const double dt = s / static_cast<double>(cells_);
    if (std::abs(history.dt - dt) > 1e-9 * dt) throw ConfigError("history step does not match the predictor grid");
    const double tol = 1e-9 * dt;
    if (history.t0 > -s + tol) throw ConfigError("history shorter than the observation window");
    if (std::abs(history.horizon()) > tol + 1e-12) throw ConfigError("history must end at time 0");
    const auto first = static_cast<std::size_t>(std::llround((-s - history.t0) / dt));
    if (first + cells_ != history.steps()) throw ConfigError("history grid does not cover the window");
    const double b1 = spec_.b1;
    double acc = 0.0;
    for (std::size_t k = 0; k < cells_; ++k) {
        const std::size_t i = first + k;
        const double y0 = std::exp(-b1 * history.time(i)) * history.values[i];
        const double y1 = std::exp(-b1 * history.time(i + 1)) * history.values[i + 1];
        acc += g_hat_[k] * (y1 - y0);
    }
    const double e = std::exp(b1 * spec_.horizon);
    return e * history.values.back() + e * acc;
}

double predict_linear_ou(const noise::SamplePath& history, const PredictorSpec& spec, double grid) {
    spec.validate();
    if (!(history.dt > 0.0) || history.steps() == 0) throw ConfigError("predict_linear_ou: empty history");
    const double cells_f = spec.window / history.dt;
    const auto cells = static_cast<std::size_t>(std::llround(cells_f));
    if (cells == 0 || std::abs(cells_f - static_cast<double>(cells)) > 1e-6)
        throw ConfigError("predict_linear_ou: window is not a whole number of history steps");
    if (history.t0 > -spec.window + 1e-9 * history.dt) throw DomainError("predict_linear_ou: history shorter than window");
    return LinearPredictor(spec, cells, grid).predict(history);
}

PredictorComparison compare_predictors(const PredictorSpec& spec, std::size_t cells, std::size_t n_paths,
                                       std::uint64_t seed, double grid, std::size_t upsampling, std::size_t workers) {
    spec.validate();
    if (n_paths < 2) throw ConfigError("compare_predictors: need at least two paths");
    const LinearPredictor lp(spec, cells, grid);
    const double dt = spec.window / static_cast<double>(cells);
    const double ahead = spec.horizon / dt;
    const auto steps_ahead = static_cast<std::size_t>(std::llround(ahead));
    if (steps_ahead == 0 || std::abs(ahead - static_cast<double>(steps_ahead)) > 1e-6)
        throw ConfigError("compare_predictors: horizon must be a whole number of history steps");
    const std::size_t n = cells + steps_ahead;
    noise::RosenblattOptions opt;
    opt.upsampling = upsampling;
    noise::RosenblattGenerator gen(spec.h, n, dt * static_cast<double>(n), opt);
    std::vector<double> e_lin(n_paths), e_zero(n_paths), e_mart(n_paths);
    parallel_for(n_paths, workers, [&](std::size_t i) {
        const auto x = sde::rosenblatt_ou_exact(-spec.b1, 0.0, 1.0, 0.0, gen.generate(noise::derive_seed(seed, i)));
        noise::SamplePath hist;
        hist.t0 = -spec.window;
        hist.dt = dt;
        hist.values.assign(x.values.begin(), x.values.begin() + static_cast<std::ptrdiff_t>(cells + 1));
        const double target = x.values.back();
        const double lin = lp.predict(hist) - target;
        const double mart = predict_martingale(hist, 0.0, spec.horizon) - target;
        e_lin[i] = lin * lin;
        e_zero[i] = target * target;
        e_mart[i] = mart * mart;
    });
    return {harness::mean_estimate(e_lin, seed), harness::mean_estimate(e_zero, seed),
            harness::mean_estimate(e_mart, seed)};
}

}  // namespace rosctl::predict
