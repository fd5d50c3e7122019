#include "doctest.h"

#include <cmath>
#include <sstream>

#include "rosctl/errors.hpp"
#include "rosctl/harness.hpp"
#include "rosctl/noise.hpp"

using namespace rosctl;
using numerics::HurstParam;

TEST_CASE("fGn autocovariance") {
    CHECK(noise::fgn_autocov(0.875, 0) == doctest::Approx(1.0));
    CHECK(noise::fgn_autocov(0.875, 1) == doctest::Approx((std::pow(2.0, 1.75) - 2.0) / 2.0).epsilon(1e-14));
    CHECK(noise::fgn_autocov(0.5, 3) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("fGn lag-1 autocovariance matches the exact value") {
    const double h = 0.875;
    const std::size_t n = 1 << 16;
    noise::FgnGenerator gen(h, n);
    std::vector<double> xs, prods;
    for (std::uint64_t s = 0; s < 16; ++s) {
        std::mt19937_64 rng(noise::derive_seed(11, s));
        gen.sample(rng, xs);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) prods.push_back(xs[i] * xs[i + 1]);
    }
    const auto est = harness::mean_estimate(prods);
    // Long-range dependence inflates the naive standard error; allow a wider band.
    CHECK(std::abs(est.value - noise::fgn_autocov(h, 1)) < 0.02);
}

TEST_CASE("Brownian increments are uncorrelated") {
    const auto p = noise::gen_brownian(100000, 1.0, 3);
    CHECK(p.values[0] == 0.0);
    std::vector<double> prods;
    for (std::size_t i = 1; i + 1 < p.values.size(); ++i)
        prods.push_back((p.values[i] - p.values[i - 1]) * (p.values[i + 1] - p.values[i]));
    const auto est = harness::mean_estimate(prods);
    CHECK(std::abs(est.value) <= 3.0 * est.std_error);
}

TEST_CASE("paths start at zero and are deterministic") {
    for (double h : {0.6, 0.9}) {
        const auto a = noise::gen_fgn(h, 128, 0.01, 5);
        CHECK(a.values[0] == 0.0);
        const auto r1 = noise::gen_rosenblatt(HurstParam(h), 16, 1.0, 9);
        const auto r2 = noise::gen_rosenblatt(HurstParam(h), 16, 1.0, 9);
        CHECK(r1.values[0] == 0.0);
        CHECK(r1.values == r2.values);
    }
}

TEST_CASE("ensembles do not depend on the worker count") {
    const auto kind = noise::NoiseKind::rosenblatt(HurstParam(0.7));
    const auto a = noise::gen_ensemble(kind, 32, 1.0, 12, 77, 1);
    const auto b = noise::gen_ensemble(kind, 32, 1.0, 12, 77, 4);
    for (std::size_t i = 0; i < a.paths.size(); ++i) CHECK(a.paths[i].values == b.paths[i].values);
}

TEST_CASE("Rosenblatt covariance function") {
    const HurstParam h(0.75);
    CHECK(noise::covariance_rosenblatt(1, 1, h) == doctest::Approx(1.0));
    CHECK(noise::covariance_rosenblatt(0, 3, h) == 0.0);
    CHECK(noise::covariance_rosenblatt(1, 2, h) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(noise::covariance_rosenblatt(-1, 2, h), DomainError);
}

TEST_CASE("Rosenblatt marginals: unit variance, positive skew, self-similarity") {
    const auto ens = noise::gen_ensemble(noise::NoiseKind::rosenblatt(HurstParam(0.75)), 8, 2.0, 4000, 2024, 0);
    const auto v = noise::values_at(ens, 1.0);
    const auto st = harness::summary_stats(v);
    CHECK(std::abs(st.variance - 1.0) < 0.08);
    REQUIRE(st.skewness.has_value());
    CHECK(*st.skewness > 0.5);
    CHECK(noise::self_similarity_stat(ens, 1.0, 1.0) == 0.0);
    CHECK(noise::self_similarity_stat(ens, 2.0, 0.5) < 0.08);
    CHECK_THROWS(noise::self_similarity_stat(ens, 3.0, 1.0));
}

TEST_CASE("double-integral method is capped") {
    noise::RosenblattOptions o;
    o.method = noise::RosenblattMethod::double_integral;
    CHECK_THROWS_AS(noise::gen_ensemble(noise::NoiseKind::rosenblatt(HurstParam(0.75)), 65, 1.0, 2, 1, 1, o),
                    ResourceLimitError);
}

TEST_CASE("CSV writer") {
    const auto ens = noise::gen_ensemble(noise::NoiseKind::brownian(), 4, 1.0, 2, 1, 1);
    std::ostringstream os;
    noise::write_csv(os, ens);
    const std::string s = os.str();
    CHECK(s.find('\n') != std::string::npos);
    CHECK(std::count(s.begin(), s.end(), '\n') >= 5);
}
