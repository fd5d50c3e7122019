#include "rosctl/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "rosctl/errors.hpp"

namespace rosctl::numerics {

HurstParam::HurstParam(double h) : h_(h) {
    if (!(h > 0.5 && h < 1.0))
        throw DomainError("Hurst index must lie in (1/2, 1), got " + std::to_string(h));
}

double gamma_fn(double x) {
    if (!(x > 0.0)) throw DomainError("gamma_fn: argument must be positive");
    return std::tgamma(x);
}

double beta_fn(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("beta_fn: arguments must be positive");
    return boost::math::beta(x, y);
}

RosenblattConstants rosenblatt_constants(HurstParam hp) {
    const double h = hp.value();
    RosenblattConstants k{};
    k.c_r = std::sqrt(2.0 * h * (2.0 * h - 1.0) / (2.0 * beta_fn(1.0 - h, h / 2.0)));
    const double g = gamma_fn(h / 2.0);
    k.c = k.c_r * g * g;
    k.c_tilde = std::sqrt((2.0 * h - 1.0) * gamma_fn(1.0 - h / 2.0) * g /
                          ((h + 1.0) * gamma_fn(1.0 - h)));
    const double b = beta_fn(h / 2.0, 1.0 - h / 2.0);
    k.c_tilde_h = 2.0 * k.c_r * b * b / (g * g);
    return k;
}

double unit_variance_kernel_constant(HurstParam hp) {
    // int_R (u-y)_+^{a}(v-y)_+^{a} dy = B(H/2, 1-H)|u-v|^{H-1}, a = H/2-1, and
    // int_0^1 int_0^1 |u-v|^{2H-2} = 1/(H(2H-1)); the factor 2 is E[I_2(f)^2] = 2|f|^2.
    const double h = hp.value();
    const double b = beta_fn(h / 2.0, 1.0 - h);
    return std::sqrt(h * (2.0 * h - 1.0) / 2.0) / b;
}

namespace {

GaussRule golub_welsch(int n, double alpha, double beta) {
    // Jacobi weight (1-x)^alpha (1+x)^beta on [-1,1].
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
    const double ab = alpha + beta;
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag(k) = (k == 0) ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        double b2;
        if (k == 1)
            b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        else
            b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        sub(k - 1) = std::sqrt(b2);
    }
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                                std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = diag(0);
        rule.weights[0] = mu0;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v * v;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_jacobi01(int n, double a, double b) {
    if (n < 1) throw DomainError("gauss_jacobi01: need at least one node");
    if (!(a > -1.0) || !(b > -1.0)) throw DomainError("gauss_jacobi01: exponents must exceed -1");
    static std::mutex mu;
    static std::map<std::tuple<int, double, double>, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{n, a, b}];
    if (!slot) {
        // s = (1+x)/2: s^a (1-s)^b = 2^{-(a+b)} (1+x)^a (1-x)^b, ds = dx/2.
        GaussRule r = golub_welsch(n, b, a);
        const double scale = std::pow(2.0, -(a + b + 1.0));
        for (int i = 0; i < n; ++i) {
            r.nodes[i] = 0.5 * (1.0 + r.nodes[i]);
            r.weights[i] *= scale;
        }
        slot = std::make_unique<GaussRule>(std::move(r));
    }
    return *slot;
}

namespace {

// int_0^t w1(u) int_0^u w2(v) (u-v)^{-beta} dv du with v = u(1-s), u = t z.
double duffy_triangle(double beta, double t, const Fn1& w1, const Fn1& w2, int order) {
    const GaussRule& inner = gauss_jacobi01(order, -beta, 0.0);
    const GaussRule& outer = gauss_jacobi01(order, 1.0 - beta, 0.0);
    double total = 0.0;
    for (int i = 0; i < order; ++i) {
        const double u = t * outer.nodes[i];
        double in = 0.0;
        for (int j = 0; j < order; ++j) in += inner.weights[j] * w2(u * (1.0 - inner.nodes[j]));
        total += outer.weights[i] * w1(u) * in;
    }
    return std::pow(t, 2.0 - beta) * total;
}

}  // namespace

double quad_singular_2d(double beta, double t, const Fn1& w1, const Fn1& w2, int order) {
    if (!(beta < 1.0)) throw DomainError("quad_singular_2d: kernel |u-v|^{-beta} is not integrable for beta >= 1");
    if (!(beta > 0.0)) throw DomainError("quad_singular_2d: exponent must lie in (0,1)");
    if (!(t >= 0.0)) throw DomainError("quad_singular_2d: t must be nonnegative");
    if (t == 0.0) return 0.0;
    return duffy_triangle(beta, t, w1, w2, order) + duffy_triangle(beta, t, w2, w1, order);
}

double quad_singular_2d(double beta, double t, int order) {
    const Fn1 one = [](double) { return 1.0; };
    return quad_singular_2d(beta, t, one, one, order);
}

double integrate(const Fn1& f, double a, double b, double rel_tol) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, rel_tol);
}

double integrate_singular(const Fn1& f, double a, double b, double rel_tol) {
    if (a == b) return 0.0;
    thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
    return ts.integrate(f, a, b, rel_tol);
}

std::vector<double> singular_exp_convolution(double p, double h, std::span<const double> growth,
                                             int order) {
    if (!(p > -1.0)) throw DomainError("singular_exp_convolution: exponent must exceed -1");
    const std::size_t N = growth.size() - 1;
    std::vector<double> out(N + 1, 0.0);
    if (N == 0) return out;
    const GaussRule& gl = gauss_legendre01(order);
    const GaussRule& gj = gauss_jacobi01(order, 0.0, p);  // weight (1-tau)^p on the last cell
    const auto m = static_cast<std::size_t>(order);

    // e[k*m+j]: weight times exp(-(G_{k+1}-G_k) tau_j), Legendre and Jacobi variants.
    std::vector<double> e_gl(N * m), e_gj(N * m);
    for (std::size_t k = 0; k < N; ++k) {
        const double dg = growth[k + 1] - growth[k];
        for (std::size_t j = 0; j < m; ++j) {
            e_gl[k * m + j] = gl.weights[j] * std::exp(-dg * gl.nodes[j]);
            e_gj[k * m + j] = gj.weights[j] * std::exp(-dg * gj.nodes[j]);
        }
    }
    // ker[d*m+j] = (d + 1 - tau_j)^p for cells at distance d >= 1 from the evaluation node.
    std::vector<double> ker(N * m);
    for (std::size_t d = 1; d < N; ++d)
        for (std::size_t j = 0; j < m; ++j)
            ker[d * m + j] = std::pow(static_cast<double>(d) + 1.0 - gl.nodes[j], p);

    const double scale = std::pow(h, p + 1.0);
    for (std::size_t n = 1; n <= N; ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t d = n - 1 - k;
            double cell = 0.0;
            if (d == 0) {
                for (std::size_t j = 0; j < m; ++j) cell += e_gj[k * m + j];
            } else {
                for (std::size_t j = 0; j < m; ++j) cell += ker[d * m + j] * e_gl[k * m + j];
            }
            acc += std::exp(growth[n] - growth[k]) * cell;
        }
        out[n] = scale * acc;
    }
    return out;
}

double phi1(double z) {
    if (std::abs(z) < 1e-5) return 1.0 + z / 2.0 + z * z / 6.0;
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 1e-3) return 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0;
    return (std::expm1(z) - z) / (z * z);
}

}  // namespace rosctl::numerics
