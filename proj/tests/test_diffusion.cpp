#include "doctest.h"

#include <cmath>
#include <random>

#include "rosctl/diffusion.hpp"
#include "rosctl/errors.hpp"
#include "rosctl/harness.hpp"

using namespace rosctl;
using numerics::HurstParam;

namespace {

diffusion::DiffusionSpec base() {
    diffusion::DiffusionSpec s;
    s.theta = diffusion::Rate::constant(1.0);
    s.T = 1.0;
    s.m_T = 0.0;
    s.sigma_T = 1.0;
    s.x0 = 0.0;
    return s;
}

}  // namespace

TEST_CASE("OU bridge parameters") {
    auto s = base();
    const auto bp = diffusion::ou_bridge_params(s);
    CHECK(bp.m == doctest::Approx(0.0));
    CHECK(bp.sigma == doctest::Approx(1.52088).epsilon(1e-5));
    // Forward law: mean and variance from the exact OU transition.
    CHECK(diffusion::ou_variance(1.0, s) == doctest::Approx(1.0).epsilon(1e-14));
    s.x0 = 0.7;
    s.m_T = 0.7;
    CHECK(diffusion::ou_bridge_params(s).m == doctest::Approx(0.7).epsilon(1e-14));
    s.theta = diffusion::Rate::constant(20.0);
    s.T = 5.0;
    CHECK(diffusion::ou_bridge_params(s).sigma == doctest::Approx(std::sqrt(40.0)).epsilon(1e-12));
}

TEST_CASE("OU forward terminal law") {
    auto s = base();
    const auto a = diffusion::ou_forward_terminal_check(s, 20000, 4);
    CHECK(std::abs(a.mean.value) <= 3 * a.mean.std_error);
    CHECK(std::abs(a.variance.value - 1.0) <= 3 * a.variance.std_error);
    s.sigma_T = 1e-3;
    s.m_T = 2.0;
    const auto c = diffusion::ou_forward_terminal_check(s, 2000, 4);
    CHECK(c.mean.value == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(c.variance.value < 1e-5);
}

TEST_CASE("OU reverse sampling returns to x0") {
    auto s = base();
    s.x0 = 1.5;
    s.m_T = 0.0;
    std::mt19937_64 rng(6);
    std::normal_distribution<double> nd(s.m_T, s.sigma_T);
    std::vector<double> mask(10000);
    for (auto& v : mask) v = nd(rng);
    const auto r = diffusion::ou_reverse_sample(s, mask, 400, 8);
    const auto m = harness::mean_estimate(r.samples);
    // The clamp time T - dt corresponds to forward time dt.
    CHECK(std::abs(m.value - diffusion::ou_mean(r.dt, s)) <= 3 * m.std_error);
    const auto coarse = diffusion::ou_reverse_sample(s, mask, 50, 8);
    CHECK(std::abs(harness::mean_estimate(coarse.samples).value - s.x0) > std::abs(m.value - s.x0));
    CHECK(harness::variance_estimate(r.samples).value < harness::variance_estimate(coarse.samples).value);
}

TEST_CASE("fractional forward moments") {
    auto s = base();
    s.m_T = 1.0;
    s.h = HurstParam(0.75);
    const auto end = diffusion::frac_forward_mv(1.0, s);
    CHECK(end.m == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(end.v2 == doctest::Approx(1.0).epsilon(1e-12));
    const auto start = diffusion::frac_forward_mv(1e-9, s);
    CHECK(std::abs(start.m - s.x0) < 1e-8);
    CHECK(start.v2 < 1e-10);
    for (double t : {0.2, 0.5, 0.9})
        CHECK(diffusion::frac_forward_v2_quadrature(t, s) ==
              doctest::Approx(diffusion::frac_forward_mv(t, s).v2).epsilon(1e-6));
}

TEST_CASE("fractional reverse drift") {
    auto s = base();
    s.m_T = 1.0;
    const double t = 0.4;
    const double m = diffusion::frac_forward_mv(t, s).m;
    CHECK(diffusion::frac_reverse_drift(m, t, s) ==
          doctest::Approx(1.0 * (diffusion::frac_target_level(s) - m)).epsilon(1e-14));
    CHECK_THROWS_AS(diffusion::frac_reverse_drift(0.0, 0.0, s), DomainError);
}

TEST_CASE("super-diffusion") {
    const HurstParam h(0.75);
    const auto det = diffusion::rosenblatt_superdiffusion_sample(1.0, 0.5, 0.0, 2.0, 1.0, h, 10, 3, 16, 64, 1);
    for (double v : det.samples) CHECK(v == doctest::Approx(std::exp(-1.0) * 2.0 + (1 - std::exp(-1.0)) * 0.5));
    // Closed form at theta -> 0: sigma^2 t^{2H}.
    CHECK(diffusion::superdiffusion_variance(1e-9, 1.0, 1.0, h) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(diffusion::chi_square_limit_check(1.0, 0.0, 0.0, 0.0, 1.0, 0.99, 50, 1, 16, 64, 1) == 0.0);
}
