#include "doctest.h"

#include <cmath>

#include "rosctl/control.hpp"
#include "rosctl/errors.hpp"
#include "rosctl/games.hpp"

using namespace rosctl;
using numerics::HurstParam;

TEST_CASE("zero-sum saddle") {
    const games::ZeroSumSpec sp(-1, 1, 1, 1, 1, 2, HurstParam(0.75));
    const auto s = games::zero_sum_saddle(sp);
    CHECK(s.k + (1.0 * 2.0 / (1.0 * 1.0)) * s.l == 0.0);
    CHECK(s.closed_loop < 0.0);
    CHECK(games::zero_sum_value_at(s.k, s.l, sp) == s.value);
    // Value via the closed form.
    const double b = -1 + s.k + s.l;
    CHECK(s.value == doctest::Approx(numerics::gamma_fn(2.5) * (1 + s.k * s.k - 2 * s.l * s.l) / (2 * std::pow(-b, 1.5)))
                         .epsilon(1e-13));
    // First-order conditions by central differences.
    const double d = 1e-5;
    CHECK(std::abs(games::zero_sum_value_at(s.k + d, s.l, sp) - games::zero_sum_value_at(s.k - d, s.l, sp)) / (2 * d) <
          1e-6);
    CHECK(std::abs(games::zero_sum_value_at(s.k, s.l + d, sp) - games::zero_sum_value_at(s.k, s.l - d, sp)) / (2 * d) <
          1e-6);
}

TEST_CASE("zero-sum value reductions") {
    const games::ZeroSumSpec sp(-1, 1, 1, 1, 1, 2, HurstParam(0.75));
    CHECK(games::zero_sum_value_at(-0.4, 0.0, sp) == doctest::Approx(control::ergodic_cost(-0.4, -1, 1, 1, 1, 0.75)));
    CHECK(games::zero_sum_value_at(0.0, 0.0, sp) ==
          doctest::Approx(control::stationary_second_moment(-1.0, 0.75) * 1.0).epsilon(1e-14));
}

TEST_CASE("best response and Nash") {
    CHECK(games::best_response_gain(1, 1, 1, 1, HurstParam(0.75)) == doctest::Approx(-4.64575).epsilon(1e-5));
    CHECK(games::best_response_gain(1, 1, 1, 1, HurstParam(0.75)) ==
          doctest::Approx(control::optimal_gain(1, 1, 1, 1, HurstParam(0.75)).gain).epsilon(1e-14));
    CHECK(std::abs(games::best_response_gain(-1, 1, 1e-12, 1, HurstParam(0.75))) < 1e-10);

    SUBCASE("symmetric pair against a scalar bisection") {
        const games::NashSpec sp(2, -1, {1, 1}, {1, 1}, {1, 1}, HurstParam(0.75));
        const auto s = games::nash_fixed_point(sp);
        CHECK(s.gains[0] == doctest::Approx(s.gains[1]).epsilon(1e-12));
        // Symmetric fixed point: K = BR(-1 + K).
        auto g = [](double k) { return k - games::best_response_gain(-1 + k, 1, 1, 1, HurstParam(0.75)); };
        double lo = -5.0, hi = 0.0;
        REQUIRE(g(lo) * g(hi) < 0);
        for (int i = 0; i < 200; ++i) {
            const double m = 0.5 * (lo + hi);
            (g(lo) * g(m) <= 0 ? hi : lo) = m;
        }
        CHECK(s.gains[0] == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));
        CHECK(s.residuals[0] < 1e-10);
    }
    SUBCASE("permutation equivariance") {
        const games::NashSpec a(3, 0.2, {1.0, 0.5, 2.0}, {1, 2, 3}, {3, 1, 2}, HurstParam(0.7));
        const games::NashSpec b(3, 0.2, {2.0, 1.0, 0.5}, {3, 1, 2}, {2, 3, 1}, HurstParam(0.7));
        const auto sa = games::nash_fixed_point(a);
        const auto sb = games::nash_fixed_point(b);
        CHECK(sa.gains[0] == doctest::Approx(sb.gains[1]).epsilon(1e-10));
        CHECK(sa.gains[1] == doctest::Approx(sb.gains[2]).epsilon(1e-10));
        CHECK(sa.gains[2] == doctest::Approx(sb.gains[0]).epsilon(1e-10));
    }
    CHECK_THROWS(games::NashSpec(2, 0, {1}, {1, 1}, {1, 1}, HurstParam(0.75)));
}
