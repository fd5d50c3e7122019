#include "rosctl/control.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rosctl/errors.hpp"

namespace rosctl::control {

using numerics::gamma_fn;

double gain_formula(double b1, double b2, double q, double r, double h) {
    if (b2 == 0.0) throw DomainError("control coefficient b2 must be nonzero");
    if (!(q >= 0.0) || !(r > 0.0)) throw DomainError("weights must satisfy q >= 0, r > 0");
    if (!(h >= 0.5 && h < 1.0)) throw DomainError("Hurst index must lie in [1/2, 1)");
    const double d = 4.0 * h * (1.0 - h) * b2 * b2 * q / r;
    const double rad = std::sqrt(b1 * b1 + d);
    // b1 + rad cancels for b1 < 0; use (rad^2 - b1^2) / (rad - b1) there.
    const double num = b1 >= 0.0 ? b1 + rad : d / (rad - b1);
    return -num / (2.0 * b2 * (1.0 - h));
}

bool is_infinite_cost(double v) { return std::isinf(v) && v > 0.0; }

double ergodic_cost(double k, double b1, double b2, double q, double r, double h) {
    const double b = b1 + b2 * k;
    if (!(b < 0.0)) return std::numeric_limits<double>::infinity();
    return gamma_fn(2.0 * h + 1.0) * (q + r * k * k) / (2.0 * std::pow(-b, 2.0 * h));
}

double ergodic_cost_at_optimum(double k, double b1, double b2, double r, double h) {
    const double b = b1 + b2 * k;
    if (!(b < 0.0)) return std::numeric_limits<double>::infinity();
    return gamma_fn(2.0 * h) * (-r * k / b2) / std::pow(-b, 2.0 * h - 1.0);
}

ErgodicSolution optimal_gain(double b1, double b2, double q, double r, numerics::HurstParam hp) {
    const double h = hp.value();
    if (!(q > 0.0)) throw DomainError("optimal_gain: q must be positive");
    ErgodicSolution s;
    s.gain = gain_formula(b1, b2, q, r, h);
    s.closed_loop = b1 + b2 * s.gain;
    if (!(s.closed_loop < 0.0)) throw InadmissibleError("optimal_gain: closed loop is not stable");
    s.cost = ergodic_cost(s.gain, b1, b2, q, r, h);
    // (1-H)(b2^2/r) P^2 + b1 P - H q = 0; the root tied to the stabilizing gain is P = r K / b2.
    s.riccati_p = r * s.gain / b2;
    const double alt = ergodic_cost_at_optimum(s.gain, b1, b2, r, h);
    if (std::abs(alt - s.cost) > 1e-9 * std::abs(s.cost))
        throw std::logic_error("optimal_gain: cost expressions disagree");
    return s;
}

double stationary_second_moment(double b, double h) {
    if (!(b < 0.0)) throw DomainError("stationary_second_moment: b must be negative");
    if (!(h >= 0.5 && h < 1.0)) throw DomainError("Hurst index must lie in [1/2, 1)");
    return gamma_fn(2.0 * h + 1.0) / (2.0 * std::pow(-b, 2.0 * h));
}

SurrogateResult surrogate_gain(numerics::HurstParam h_true, double h_assumed, double b1, double b2,
                               double q, double r) {
    SurrogateResult s;
    s.gain = gain_formula(b1, b2, q, r, h_assumed);
    s.true_cost = ergodic_cost(s.gain, b1, b2, q, r, h_true.value());
    s.optimal_cost = optimal_gain(b1, b2, q, r, h_true).cost;
    s.gap = s.true_cost - s.optimal_cost;
    return s;
}

double mean_part_cost(double kbar, double b1, double b2, double bbar0, double bbar1, double bbar2,
                      double qbar, double rbar) {
    const double a = b1 + bbar1 + (b2 + bbar2) * kbar;
    if (!(a < 0.0)) return std::numeric_limits<double>::infinity();
    return (qbar + rbar * kbar * kbar) * bbar0 * bbar0 / (a * a);
}

MfErgodicSolution variance_aware_gains(double b1, double b2, double bbar0, double bbar1, double bbar2,
                                       double q, double qbar, double r, double rbar,
                                       numerics::HurstParam hp) {
    const double h = hp.value();
    const double a = b1 + bbar1, c = b2 + bbar2;
    if (a == 0.0) throw DomainError("variance_aware_gains: b1 + bbar1 must be nonzero");
    if (!(q > 0.0) || !(r > 0.0) || !(qbar >= 0.0) || !(rbar > 0.0))
        throw DomainError("variance_aware_gains: weights must be positive");
    MfErgodicSolution s;
    s.gain_dev = gain_formula(b1, b2, q, r, h);
    s.stability_dev = b1 + b2 * s.gain_dev;
    s.gain_mean = c * qbar / (rbar * a);
    s.stability_mean = a + c * s.gain_mean;
    if (!(s.stability_mean < 0.0))
        throw InadmissibleError("variance_aware_gains: mean closed loop " + std::to_string(s.stability_mean) +
                                " is not stable (requires b1 + bbar1 < 0)");
    if (!(s.stability_dev < 0.0)) throw InadmissibleError("variance_aware_gains: deviation loop unstable");
    s.cost_dev = ergodic_cost_at_optimum(s.gain_dev, b1, b2, r, h);
    s.cost_mean = bbar0 * bbar0 * qbar * rbar / (a * a * rbar + c * c * qbar);
    s.cost = s.cost_dev + s.cost_mean;
    return s;
}

}  // namespace rosctl::control
