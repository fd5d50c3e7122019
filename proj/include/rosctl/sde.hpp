#pragma once

#include <functional>

#include "rosctl/noise.hpp"
#include "rosctl/numerics.hpp"

namespace rosctl::sde {

struct LinearDynamics {
    double b1 = 0.0;
    double b2 = 1.0;
    double b3 = 0.0;
    double bbar0 = 0.0;
    double bbar1 = 0.0;
    double bbar2 = 0.0;
    double x0 = 0.0;
};

using TimeFn = std::function<double(double)>;

struct CoeffTriple {
    TimeFn d1, d2, d3;
};

// A scalar field f(t, x) together with the partial derivatives the transform needs.
struct ScalarField {
    std::function<double(double, double)> f, f_t, f_x, f_xx, f_xxx;
};

// Euler scheme x[k+1] = x[k] + b x[k] dt + (noise[k+1] - noise[k]), b = b1 + b2 * gain.
noise::SamplePath simulate_linear_sde(const LinearDynamics& dyn, double gain,
                                      const noise::SamplePath& noise, double dt);

// Exponential scheme x[k+1] = e^{b dt} x[k] + e^{b dt / 2} (noise[k+1] - noise[k]); second
// order in dt for the stationary moments. Used by the ergodic Monte Carlo harness.
noise::SamplePath simulate_linear_sde_exp(const LinearDynamics& dyn, double gain,
                                          const noise::SamplePath& noise);

// x(t) = e^{-theta t} x0 + (1 - e^{-theta t}) m + sigma int_0^t e^{-theta(t-s)} dR(s), the
// stochastic convolution evaluated as R(t) - theta int_0^t e^{-theta(t-s)} R(s) ds.
noise::SamplePath rosenblatt_ou_exact(double theta, double m, double sigma, double x0,
                                      const noise::SamplePath& noise);

// Coefficients of y = f(t, x) for x driven by (d1 dt, 2 c~ d2 dB^{(H+1)/2}, d3 dR^H). The
// returned functions evaluate the state by linear interpolation of `state`.
CoeffTriple ito_transform_coeffs(const ScalarField& f, const CoeffTriple& d, const TimeFn& grad_x,
                                 const TimeFn& grad2_x, numerics::HurstParam h,
                                 const noise::SamplePath& state);

// Linear interpolation of a path at time t (clamped to the grid).
double interpolate(const noise::SamplePath& path, double t);

}  // namespace rosctl::sde
