#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rosctl::numerics {

// Long-memory index restricted to the open interval (1/2, 1).
class HurstParam {
public:
    explicit HurstParam(double h);
    double value() const noexcept { return h_; }
    operator double() const noexcept { return h_; }

private:
    double h_;
};

double gamma_fn(double x);
double beta_fn(double x, double y);

struct RosenblattConstants {
    double c_r;        // normalizer C_R^H as printed in the Rosenblatt definition
    double c;          // c_r * Gamma(H/2)^2
    double c_tilde;    // scale of the mixed fBm term in the change-of-variable formula
    double c_tilde_h;  // kernel constant 2 c_r B(H/2, 1-H/2)^2 / Gamma(H/2)^2
};

RosenblattConstants rosenblatt_constants(HurstParam h);

// Constant C for which R(t) = C * I_2(f_t), f_t(y1,y2) = int_0^t (u-y1)_+^{H/2-1}(u-y2)_+^{H/2-1} du,
// has E[R(1)^2] = 1. Differs from c_r (see README).
double unit_variance_kernel_constant(HurstParam h);

// Nodes and weights of an n-point Gauss rule on [0,1] for the weight s^a (1-s)^b.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_jacobi01(int n, double a, double b);
inline const GaussRule& gauss_legendre01(int n) { return gauss_jacobi01(n, 0.0, 0.0); }

using Fn1 = std::function<double(double)>;

// int_0^t int_0^t w1(u) w2(v) |u-v|^{-beta} du dv with a Duffy split along the diagonal and
// `order` Gauss-Jacobi nodes per direction (the refinement parameter).
double quad_singular_2d(double beta, double t, const Fn1& w1, const Fn1& w2, int order = 40);
double quad_singular_2d(double beta, double t, int order = 40);

// Adaptive Gauss-Kronrod on a finite interval.
double integrate(const Fn1& f, double a, double b, double rel_tol = 1e-12);
// Tanh-sinh on a finite interval; tolerates integrable endpoint singularities.
double integrate_singular(const Fn1& f, double a, double b, double rel_tol = 1e-12);

// o_n = sum_k int_{t_k}^{t_{k+1}} (t_n - s)^p exp(G(t_n) - G(s)) ds for n = 0..N on the grid
// t_k = k h, where G is linear on each cell with values growth[k] at the nodes (p > -1).
// Exact for piecewise-linear G up to the Gauss rule error.
std::vector<double> singular_exp_convolution(double p, double h, std::span<const double> growth,
                                             int order = 16);

// phi_1(z) = (e^z - 1)/z and phi_2(z) = (e^z - 1 - z)/z^2, stable near z = 0.
double phi1(double z);
double phi2(double z);

}  // namespace rosctl::numerics
