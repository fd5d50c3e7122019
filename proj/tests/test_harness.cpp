#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rosctl/control.hpp"
#include "rosctl/harness.hpp"

using namespace rosctl;

TEST_CASE("Wasserstein-1 distance") {
    std::vector<double> xs{0.3, -1.0, 2.5, 0.7};
    CHECK(harness::wasserstein1(xs, xs) == 0.0);
    std::vector<double> ys = xs;
    for (auto& y : ys) y += 1.0;
    CHECK(harness::wasserstein1(xs, ys) == doctest::Approx(1.0));

    // Brute force over all matchings.
    std::vector<double> zs{1.1, -0.4, 0.0, 3.0};
    std::vector<int> perm{0, 1, 2, 3};
    double best = INFINITY;
    do {
        double c = 0.0;
        for (int i = 0; i < 4; ++i) c += std::abs(xs[i] - zs[perm[i]]);
        best = std::min(best, c / 4.0);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(harness::wasserstein1(xs, zs) == doctest::Approx(best).epsilon(1e-14));

    // Unequal sizes: point mass at 0 vs {0, 1} has distance 1/2.
    CHECK(harness::wasserstein1(std::vector<double>{0.0}, std::vector<double>{0.0, 1.0}) == doctest::Approx(0.5));
}

TEST_CASE("summary statistics") {
    const auto c = harness::summary_stats(std::vector<double>{2.0, 2.0, 2.0});
    CHECK(c.mean == 2.0);
    CHECK(c.variance == 0.0);
    CHECK_FALSE(c.skewness.has_value());
    const auto s = harness::summary_stats(std::vector<double>{1, -1, 1, -1});
    CHECK(*s.skewness == doctest::Approx(0.0));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    std::vector<double> chi(100000);
    for (auto& v : chi) {
        const double z = nd(rng);
        v = z * z - 1.0;
    }
    const auto st = harness::summary_stats(chi);
    // Skewness s.e. for chi-square(1) is dominated by higher moments; sqrt(6/n) understates it.
    CHECK(std::abs(*st.skewness - 2.0 * std::sqrt(2.0)) < 0.15);
}

TEST_CASE("mean and variance estimates") {
    std::vector<double> xs{1, 2, 3, 4};
    const auto m = harness::mean_estimate(xs, 9);
    CHECK(m.value == 2.5);
    CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(m.seed == 9);
    CHECK(harness::variance_estimate(xs).value == doctest::Approx(5.0 / 3.0));
    CHECK(harness::pairwise_sum(std::vector<double>(1000, 0.1)) == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("ergodic cost estimate") {
    sde::LinearDynamics dyn;
    dyn.b1 = -1.0;
    dyn.b2 = 1.0;
    SUBCASE("fBm noise shares the Rosenblatt second moment") {
        dyn.x0 = 1.0;
        harness::NoiseConfig nc{noise::NoiseKind::fbm(0.75), 64};
        const auto e = harness::estimate_ergodic_cost(dyn, 0.0, 1.0, 1.0, nc, 200.0, 1.0 / 64, 32, 1, 0);
        CHECK(e.value == doctest::Approx(control::stationary_second_moment(-1.0, 0.75)).epsilon(0.1));
    }
    SUBCASE("Brownian noise at the classical gain") {
        const double b1 = 1, b2 = 1, q = 1, r = 1;
        dyn.b1 = b1;
        dyn.b2 = b2;
        const double k = -(b1 + std::sqrt(b1 * b1 + b2 * b2 * q / r)) / b2;
        harness::NoiseConfig nc{noise::NoiseKind::brownian(), 64};
        const auto e = harness::estimate_ergodic_cost(dyn, k, q, r, nc, 200.0, 1.0 / 128, 40, 2, 0);
        const double b = b1 + b2 * k;
        CHECK(e.value == doctest::Approx((q + r * k * k) / (2.0 * -b)).epsilon(0.1));
    }
    SUBCASE("unstable gain diverges") {
        dyn.b1 = 1.0;
        harness::NoiseConfig nc{noise::NoiseKind::brownian(), 64};
        CHECK_THROWS(harness::estimate_ergodic_cost(dyn, 0.0, 1.0, 1.0, nc, 2000.0, 1.0 / 16, 2, 3, 1));
    }
}
