#include "doctest.h"

#include <cmath>
#include <random>

#include <boost/math/tools/minima.hpp>

#include "rosctl/control.hpp"
#include "rosctl/errors.hpp"
#include "rosctl/numerics.hpp"

using namespace rosctl;
using numerics::HurstParam;

namespace {

// Golden-section search on the closed-form ergodic cost, independent of the radical formula.
double grid_argmin(double b1, double b2, double q, double r, double h) {
    const double edge = -b1 / b2;
    const double lo = b2 > 0 ? edge - 100.0 : edge + 1e-12;
    const double hi = b2 > 0 ? edge - 1e-12 : edge + 100.0;
    auto f = [&](double k) { return control::ergodic_cost(k, b1, b2, q, r, h); };
    return boost::math::tools::brent_find_minima(f, lo, hi, 52).first;
}

}  // namespace

TEST_CASE("optimal gain, worked example") {
    const auto s = control::optimal_gain(1, 1, 1, 1, HurstParam(0.75));
    CHECK(s.gain == doctest::Approx(-4.64575).epsilon(1e-5));
    CHECK(s.cost == doctest::Approx(2.1561).epsilon(1e-4));
    CHECK(s.closed_loop < 0);
    CHECK(s.gain == doctest::Approx(grid_argmin(1, 1, 1, 1, 0.75)).epsilon(1e-7));
    CHECK(control::ergodic_cost_at_optimum(s.gain, 1, 1, 1, 0.75) == doctest::Approx(s.cost).epsilon(1e-12));
}

TEST_CASE("gain limits") {
    // H = 1/2: classical LQ gain.
    const double b1 = 0.3, b2 = 2.0, q = 1.5, r = 0.7;
    CHECK(control::gain_formula(b1, b2, q, r, 0.5) ==
          doctest::Approx(-(b1 + std::sqrt(b1 * b1 + b2 * b2 * q / r)) / b2).epsilon(1e-14));
    CHECK(std::abs(control::optimal_gain(-1, 1, 1e-12, 1, HurstParam(0.75)).gain) < 1e-10);
}

TEST_CASE("optimal gain against a numerical minimizer") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 20; ++i) {
        const double b1 = -2 + 4 * u(rng), b2 = (u(rng) < 0.5 ? -1 : 1) * (0.5 + u(rng));
        const double q = 0.2 + u(rng), r = 0.2 + u(rng), h = 0.55 + 0.4 * u(rng);
        const auto s = control::optimal_gain(b1, b2, q, r, HurstParam(h));
        CHECK(s.gain == doctest::Approx(grid_argmin(b1, b2, q, r, h)).epsilon(1e-6));
        const double res = (1 - h) * (b2 * b2 / r) * s.riccati_p * s.riccati_p + b1 * s.riccati_p - h * q;
        CHECK(std::abs(res) < 1e-10);
    }
}

TEST_CASE("ergodic cost properties") {
    CHECK(control::is_infinite_cost(control::ergodic_cost(-1.0, 1.0, 1.0, 1, 1, 0.75)));
    CHECK(control::is_infinite_cost(control::ergodic_cost(0.0, 1.0, 1.0, 1, 1, 0.75)));
    const double a = control::ergodic_cost(-3.0, 1.0, 1.0, 1.0, 2.0, 0.75);
    CHECK(control::ergodic_cost(-3.0, 1.0, 1.0, 3.0, 6.0, 0.75) == doctest::Approx(3 * a).epsilon(1e-14));
}

TEST_CASE("stationary second moment") {
    CHECK(control::stationary_second_moment(-1.0, 0.75) == doctest::Approx(numerics::gamma_fn(2.5) / 2).epsilon(1e-14));
    CHECK(control::stationary_second_moment(-1.0, 0.75) == doctest::Approx(0.66467).epsilon(1e-5));
    CHECK(control::stationary_second_moment(-1.0, 0.5 + 1e-9) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(control::stationary_second_moment(-2.0, 0.75) ==
          doctest::Approx(std::pow(2.0, -1.5) * control::stationary_second_moment(-1.0, 0.75)).epsilon(1e-14));
    CHECK_THROWS_AS(control::stationary_second_moment(0.0, 0.75), DomainError);
}

TEST_CASE("surrogate gains") {
    const auto same = control::surrogate_gain(HurstParam(0.75), 0.75, 1, 1, 1, 1);
    CHECK(same.gap == 0.0);
    const auto bm = control::surrogate_gain(HurstParam(0.75), 0.5, 1, 1, 1, 1);
    CHECK(bm.gap > 0.0);
    double best = INFINITY, arg = 0;
    for (int i = 0; i < 10; ++i) {
        const double ha = 0.5 + 0.05 * i;
        const auto s = control::surrogate_gain(HurstParam(0.75), ha, 1, 1, 1, 1);
        CHECK(s.gap >= 0.0);
        if (s.gap < best) best = s.gap, arg = ha;
    }
    CHECK(arg == doctest::Approx(0.75));
}

TEST_CASE("variance-aware gains") {
    const auto s = control::variance_aware_gains(1, 1, 1, -3, 1, 1, 1, 1, 1, HurstParam(0.75));
    CHECK(s.gain_dev == doctest::Approx(-4.64575).epsilon(1e-5));
    CHECK(s.gain_mean == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(s.cost_mean == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(s.cost == doctest::Approx(2.2811).epsilon(1e-4));
    auto f = [](double k) { return control::mean_part_cost(k, 1, 1, 1, -3, 1, 1, 1); };
    const double k_num = boost::math::tools::brent_find_minima(f, -10.0, 1.0 - 1e-9, 52).first;
    CHECK(k_num == doctest::Approx(s.gain_mean).epsilon(1e-7));

    CHECK(control::variance_aware_gains(1, 1, 0, -3, 1, 1, 1, 1, 1, HurstParam(0.75)).cost_mean == 0.0);
    CHECK(control::variance_aware_gains(1, 1, 1, -3, 1, 1, 0, 1, 1, HurstParam(0.75)).gain_mean == 0.0);
    CHECK_THROWS_AS(control::variance_aware_gains(1, 1, 1, 0.5, 1, 1, 1, 1, 1, HurstParam(0.75)), InadmissibleError);
}
