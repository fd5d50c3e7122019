#include "rosctl/sde.hpp"

#include <algorithm>
#include <cmath>

#include "rosctl/errors.hpp"

namespace rosctl::sde {

using noise::SamplePath;

namespace {

void check_grid(const SamplePath& noise, double dt) {
    if (noise.values.size() < 2) throw ConfigError("noise path needs at least two grid points");
    if (!(dt > 0.0) || std::abs(noise.dt - dt) > 1e-12 * std::max(1.0, dt))
        throw ConfigError("simulation step does not match the noise grid");
}

}  // namespace

SamplePath simulate_linear_sde(const LinearDynamics& dyn, double gain, const SamplePath& noise,
                               double dt) {
    check_grid(noise, dt);
    const double b = dyn.b1 + dyn.b2 * gain;
    if (!std::isfinite(b)) throw ConfigError("closed-loop coefficient is not finite");
    SamplePath x = noise;
    x.values[0] = dyn.x0;
    for (std::size_t k = 0; k + 1 < noise.values.size(); ++k)
        x.values[k + 1] = x.values[k] + b * x.values[k] * dt + (noise.values[k + 1] - noise.values[k]);
    return x;
}

SamplePath simulate_linear_sde_exp(const LinearDynamics& dyn, double gain, const SamplePath& noise) {
    check_grid(noise, noise.dt);
    const double b = dyn.b1 + dyn.b2 * gain;
    if (!std::isfinite(b)) throw ConfigError("closed-loop coefficient is not finite");
    const double decay = std::exp(b * noise.dt);
    const double mid = std::exp(0.5 * b * noise.dt);
    SamplePath x = noise;
    x.values[0] = dyn.x0;
    for (std::size_t k = 0; k + 1 < noise.values.size(); ++k)
        x.values[k + 1] = decay * x.values[k] + mid * (noise.values[k + 1] - noise.values[k]);
    return x;
}

SamplePath rosenblatt_ou_exact(double theta, double m, double sigma, double x0, const SamplePath& noise) {
    if (noise.values.size() < 2) throw ConfigError("noise path needs at least two grid points");
    const double dt = noise.dt;
    const double decay = std::exp(-theta * dt);
    SamplePath x = noise;
    double conv = 0.0;  // int_0^t e^{-theta(t-s)} R(s) ds, trapezoid on each cell
    for (std::size_t k = 0; k < noise.values.size(); ++k) {
        if (k > 0) conv = decay * conv + 0.5 * dt * (decay * noise.values[k - 1] + noise.values[k]);
        const double t = noise.time(k);
        const double e = std::exp(-theta * t);
        const double stoch = noise.values[k] - theta * conv;
        x.values[k] = e * x0 + (1.0 - e) * m + sigma * stoch;
    }
    return x;
}

double interpolate(const SamplePath& path, double t) {
    const double pos = (t - path.t0) / path.dt;
    if (pos <= 0.0) return path.values.front();
    const auto n = path.steps();
    if (pos >= static_cast<double>(n)) return path.values.back();
    const auto k = static_cast<std::size_t>(pos);
    const double w = pos - static_cast<double>(k);
    return (1.0 - w) * path.values[k] + w * path.values[k + 1];
}

CoeffTriple ito_transform_coeffs(const ScalarField& f, const CoeffTriple& d, const TimeFn& grad_x,
                                 const TimeFn& grad2_x, numerics::HurstParam h, const SamplePath& state) {
    const double c = numerics::rosenblatt_constants(h).c;
    auto x_at = [state](double t) { return interpolate(state, t); };
    CoeffTriple out;
    out.d1 = [=](double t) {
        const double x = x_at(t);
        const double g = grad_x(t);
        return f.f_t(t, x) + f.f_x(t, x) * d.d1(t) + 2.0 * c * f.f_xx(t, x) * g * d.d2(t) +
               c * f.f_xx(t, x) * grad2_x(t) * d.d3(t) + c * f.f_xxx(t, x) * g * g * d.d3(t);
    };
    out.d2 = [=](double t) {
        const double x = x_at(t);
        return f.f_x(t, x) * d.d2(t) + f.f_xx(t, x) * grad_x(t) * d.d3(t);
    };
    out.d3 = [=](double t) { return f.f_x(t, x_at(t)) * d.d3(t); };
    return out;
}

}  // namespace rosctl::sde
