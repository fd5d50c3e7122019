#include "doctest.h"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <limits>

#include "rosctl/errors.hpp"
#include "rosctl/numerics.hpp"

using namespace rosctl;
using numerics::HurstParam;

namespace {

// int_0^c t^{a-1} g(t) dt with t = u^{1/a}, which removes the endpoint singularity.
template <class G>
double singular_at_zero(double a, double c, G g) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double u) { return g(std::pow(u, 1.0 / a)) / a; }, 0.0, std::pow(c, a), 15, 1e-14);
}

// Defining integral of Gamma, evaluated independently of gamma_fn.
double gamma_by_quadrature(double x) {
    boost::math::quadrature::exp_sinh<double> q;
    const double tail = q.integrate([x](double t) { return std::exp((x - 1.0) * std::log(t) - t); }, 1.0,
                                    std::numeric_limits<double>::infinity());
    return singular_at_zero(x, 1.0, [](double t) { return std::exp(-t); }) + tail;
}

double beta_by_quadrature(double a, double b) {
    return singular_at_zero(a, 0.5, [b](double t) { return std::pow(1.0 - t, b - 1.0); }) +
           singular_at_zero(b, 0.5, [a](double s) { return std::pow(1.0 - s, a - 1.0); });
}

}  // namespace

TEST_CASE("gamma function") {
    CHECK(numerics::gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(numerics::gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    for (double x : {0.3, 1.25, 2.5, 3.7}) CHECK(numerics::gamma_fn(x) == doctest::Approx(gamma_by_quadrature(x)).epsilon(1e-12));
    CHECK(numerics::gamma_fn(2.5) == doctest::Approx(1.3293404).epsilon(1e-7));
    CHECK_THROWS_AS(numerics::gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(numerics::gamma_fn(-1.5), DomainError);
}

TEST_CASE("beta function") {
    CHECK(numerics::beta_fn(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(numerics::beta_fn(0.25, 0.375) == doctest::Approx(beta_by_quadrature(0.25, 0.375)).epsilon(1e-10));
    CHECK(numerics::beta_fn(0.25, 0.375) == doctest::Approx(5.988).epsilon(1e-3));
    CHECK(numerics::beta_fn(2.0, 3.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK_THROWS_AS(numerics::beta_fn(0.0, 1.0), DomainError);
}

TEST_CASE("Hurst parameter is restricted to (1/2, 1)") {
    CHECK_THROWS_AS(HurstParam(0.5), DomainError);
    CHECK_THROWS_AS(HurstParam(1.0), DomainError);
    CHECK_NOTHROW(HurstParam(0.51));
}

TEST_CASE("Rosenblatt constants") {
    const auto c = numerics::rosenblatt_constants(HurstParam(0.75));
    CHECK(c.c_r == doctest::Approx(0.2503).epsilon(1e-3));
    const double near = numerics::rosenblatt_constants(HurstParam(0.5 + 1e-10)).c_r;
    CHECK(near < 1e-5);
    CHECK(near < numerics::rosenblatt_constants(HurstParam(0.5 + 1e-6)).c_r);

    // Unit variance: C^2 * 2 * ||f_1||^2 = 1 with ||f_1||^2 = B(H/2, 1-H)^2 / (H (2H-1)).
    for (double h : {0.6, 0.75, 0.9}) {
        const double C = numerics::unit_variance_kernel_constant(HurstParam(h));
        const double b = beta_by_quadrature(h / 2.0, 1.0 - h);
        CHECK(C * C * 2.0 * b * b / (h * (2.0 * h - 1.0)) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("Gauss-Jacobi rules integrate polynomials exactly") {
    const auto& g = numerics::gauss_jacobi01(8, 0.5, 0.0);
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * g.nodes[i] * g.nodes[i];
    // int_0^1 s^{1/2} s^2 ds = 2/7
    CHECK(s == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
    const auto& l = numerics::gauss_legendre01(5);
    double m = 0.0;
    for (std::size_t i = 0; i < l.nodes.size(); ++i) m += l.weights[i] * std::pow(l.nodes[i], 9);
    CHECK(m == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("weakly singular double integral") {
    // beta = 2 - 2H; unit weights give t^{2H} / (H (2H - 1)).
    CHECK(numerics::quad_singular_2d(0.5, 1.0) == doctest::Approx(1.0 / (0.75 * 0.5)).epsilon(1e-10));
    CHECK(numerics::quad_singular_2d(0.5, 2.0) == doctest::Approx(std::pow(2.0, 1.5) / (0.75 * 0.5)).epsilon(1e-10));
    auto e = [](double u) { return std::exp(u); };
    const double a = numerics::quad_singular_2d(0.5, 1.0, e, e, 20);
    const double b = numerics::quad_singular_2d(0.5, 1.0, e, e, 40);
    CHECK(std::abs(a - b) <= 1e-6 * b);
    CHECK_THROWS(numerics::quad_singular_2d(1.0, 1.0));
}

TEST_CASE("adaptive integrators") {
    CHECK(numerics::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(numerics::integrate_singular([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("singular exponential convolution") {
    // Constant growth rate g: o(t) = int_0^t (t-s)^p e^{g (t-s)} ds.
    const double p = -0.5, g = -1.0, h = 0.01;
    std::vector<double> growth(101);
    for (std::size_t k = 0; k < growth.size(); ++k) growth[k] = g * h * static_cast<double>(k);
    const auto o = numerics::singular_exp_convolution(p, h, growth);
    CHECK(o[0] == 0.0);
    const double t = 1.0;
    const double ref = numerics::integrate_singular([&](double u) { return std::pow(u, p) * std::exp(g * u); }, 0.0, t);
    CHECK(o[100] == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("phi functions are stable near zero") {
    CHECK(numerics::phi1(0.0) == doctest::Approx(1.0));
    CHECK(numerics::phi2(0.0) == doctest::Approx(0.5));
    CHECK(numerics::phi1(1e-9) == doctest::Approx(1.0 + 5e-10).epsilon(1e-15));
    CHECK(numerics::phi1(1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
    CHECK(numerics::phi2(2.0) == doctest::Approx((std::exp(2.0) - 3.0) / 4.0).epsilon(1e-15));
}
