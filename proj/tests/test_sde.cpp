#include "doctest.h"

#include <cmath>

#include "rosctl/control.hpp"
#include "rosctl/errors.hpp"
#include "rosctl/harness.hpp"
#include "rosctl/sde.hpp"

using namespace rosctl;
using numerics::HurstParam;

namespace {

noise::SamplePath zero_path(std::size_t n, double dt) {
    noise::SamplePath p;
    p.dt = dt;
    p.values.assign(n + 1, 0.0);
    return p;
}

}  // namespace

TEST_CASE("Euler scheme without noise") {
    sde::LinearDynamics dyn;
    dyn.b1 = -1.0;
    dyn.x0 = 1.0;
    const double dt = 1e-4;
    const auto x = sde::simulate_linear_sde(dyn, 0.0, zero_path(10000, dt), dt);
    CHECK(std::abs(x.values.back() - std::exp(-1.0)) < 1e-4);
    CHECK_THROWS_AS(sde::simulate_linear_sde(dyn, 0.0, zero_path(10, dt), 2 * dt), ConfigError);
}

TEST_CASE("pure integrator reproduces the noise") {
    sde::LinearDynamics dyn;
    dyn.b1 = 0.0;
    dyn.b2 = 1.0;
    const auto n = noise::gen_rosenblatt(HurstParam(0.7), 64, 1.0, 3);
    const auto x = sde::simulate_linear_sde(dyn, 0.0, n, n.dt);
    for (std::size_t i = 0; i < n.values.size(); ++i) CHECK(x.values[i] == doctest::Approx(n.values[i]).epsilon(1e-13));
}

TEST_CASE("Euler and the convolution solution agree") {
    sde::LinearDynamics dyn;
    dyn.b1 = -0.8;
    dyn.x0 = 0.5;
    const auto n = noise::gen_rosenblatt(HurstParam(0.75), 4096, 1.0, 17, noise::RosenblattMethod::hermite, 64);
    const auto e = sde::simulate_linear_sde(dyn, 0.0, n, n.dt);
    const auto c = sde::rosenblatt_ou_exact(0.8, 0.0, 1.0, 0.5, n);
    CHECK(std::abs(e.values.back() - c.values.back()) < 5e-3);
}

TEST_CASE("closed-form OU edge cases") {
    const auto n = noise::gen_rosenblatt(HurstParam(0.75), 32, 2.0, 5);
    const auto det = sde::rosenblatt_ou_exact(1.5, 2.0, 0.0, -1.0, n);
    for (std::size_t i = 0; i < det.values.size(); ++i) {
        const double t = n.time(i);
        CHECK(det.values[i] == doctest::Approx(std::exp(-1.5 * t) * -1.0 + (1 - std::exp(-1.5 * t)) * 2.0).epsilon(1e-14));
    }
    const auto free = sde::rosenblatt_ou_exact(0.0, 0.0, 2.0, 1.0, n);
    for (std::size_t i = 0; i < free.values.size(); ++i)
        CHECK(free.values[i] == doctest::Approx(1.0 + 2.0 * n.values[i]).epsilon(1e-14));
}

TEST_CASE("stationary variance of the Rosenblatt OU") {
    const auto kind = noise::NoiseKind::rosenblatt(HurstParam(0.75));
    const auto ens = noise::gen_ensemble(kind, 512, 16.0, 2000, 88, 0, {noise::RosenblattMethod::hermite, 64});
    std::vector<double> xt;
    for (const auto& p : ens.paths) xt.push_back(sde::rosenblatt_ou_exact(1.0, 0.0, 1.0, 0.0, p).values.back());
    const auto v = harness::variance_estimate(xt);
    CHECK(v.value == doctest::Approx(control::stationary_second_moment(-1.0, 0.75)).epsilon(0.1));
}

TEST_CASE("change-of-variable coefficients") {
    const HurstParam h(0.75);
    const double c = numerics::rosenblatt_constants(h).c;
    auto st = noise::gen_brownian(10, 0.1, 1);
    for (auto& v : st.values) v = 1.5;
    const double b = -0.7;
    sde::CoeffTriple d{[=](double) { return b * 1.5; }, [](double) { return 0.0; }, [](double) { return 1.0; }};
    auto g1 = [](double) { return 0.3; };
    auto g2 = [](double) { return 0.2; };

    SUBCASE("identity map") {
        sde::ScalarField f{[](double, double x) { return x; }, [](double, double) { return 0.0; },
                           [](double, double) { return 1.0; }, [](double, double) { return 0.0; },
                           [](double, double) { return 0.0; }};
        const auto o = sde::ito_transform_coeffs(f, d, g1, g2, h, st);
        CHECK(o.d1(0.5) == doctest::Approx(d.d1(0.5)));
        CHECK(o.d2(0.5) == doctest::Approx(0.0));
        CHECK(o.d3(0.5) == doctest::Approx(1.0));
    }
    SUBCASE("square") {
        sde::ScalarField f{[](double, double x) { return x * x; }, [](double, double) { return 0.0; },
                           [](double, double x) { return 2 * x; }, [](double, double) { return 2.0; },
                           [](double, double) { return 0.0; }};
        const auto o = sde::ito_transform_coeffs(f, d, g1, g2, h, st);
        CHECK(o.d1(0.5) == doctest::Approx(2 * b * 1.5 * 1.5 + 2 * c * 0.2));
        CHECK(o.d2(0.5) == doctest::Approx(2 * 0.3));
        CHECK(o.d3(0.5) == doctest::Approx(3.0));
    }
    SUBCASE("constant") {
        auto z = [](double, double) { return 0.0; };
        sde::ScalarField f{[](double, double) { return 4.0; }, z, z, z, z};
        const auto o = sde::ito_transform_coeffs(f, d, g1, g2, h, st);
        CHECK(o.d1(0.5) == 0.0);
        CHECK(o.d2(0.5) == 0.0);
        CHECK(o.d3(0.5) == 0.0);
    }
}

TEST_CASE("Rosenblatt stochastic integral has zero mean") {
    const auto ens = noise::gen_ensemble(noise::NoiseKind::rosenblatt(HurstParam(0.75)), 64, 1.0, 4000, 31, 0,
                                         {noise::RosenblattMethod::hermite, 64});
    std::vector<double> vals;
    for (const auto& p : ens.paths) {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < p.values.size(); ++i)
            s += std::cos(p.time(i)) * (p.values[i + 1] - p.values[i]);
        vals.push_back(s);
    }
    const auto m = harness::mean_estimate(vals);
    CHECK(std::abs(m.value) <= 3.0 * m.std_error);
}
