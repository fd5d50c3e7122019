#include "doctest.h"

#include <cmath>
#include <numbers>

#include "rosctl/errors.hpp"
#include "rosctl/numerics.hpp"
#include "rosctl/predict.hpp"

using namespace rosctl;
using numerics::HurstParam;

TEST_CASE("martingale predictor") {
    noise::SamplePath p;
    p.t0 = -1.0;
    p.dt = 0.25;
    p.values = {1, 2, 3, 4, 5};
    CHECK(predict::predict_martingale(p, 0.0, 1.0) == 5.0);
    CHECK(predict::predict_martingale(p, -0.5, 3.0) == 3.0);
    CHECK_THROWS(predict::predict_martingale(p, 0.0, 0.0));
    p.values.assign(5, 5.0);
    CHECK(predict::predict_martingale(p, 0.0, 7.0) == 5.0);
}

TEST_CASE("F_exp") {
    const predict::PredictorSpec s{0.0, 1.0, 1.0, HurstParam(0.75)};
    CHECK(predict::f_exp(0.5, s) == doctest::Approx((std::sqrt(1.5) - std::sqrt(0.5)) / 0.5).epsilon(1e-10));
    CHECK(predict::f_exp(0.5, s) == doctest::Approx(1.03528).epsilon(1e-5));
    const predict::PredictorSpec e{-0.7, 2.0, 0.5, HurstParam(0.6)};
    const double near_one = predict::f_exp(1.0 - 1e-12, e);
    CHECK(std::isfinite(near_one));
    CHECK(near_one > 0.0);
    CHECK_THROWS_AS(predict::f_exp(0.0, s), DomainError);
    CHECK_THROWS_AS(predict::f_exp(1.0, s), DomainError);
}

TEST_CASE("G_exp") {
    const double v = 2.0 * std::cos(std::numbers::pi * (1.0 - 1.5) / 2.0) * numerics::gamma_fn(0.5) *
                     std::pow(numerics::gamma_fn(0.75), 2);
    CHECK(predict::c_h(HurstParam(0.75)) == doctest::Approx(v).epsilon(1e-14));
    CHECK(predict::c_h(HurstParam(0.75)) == doctest::Approx(2 * 0.707107 * 1.77245 * 1.22542 * 1.22542).epsilon(1e-5));
    const predict::PredictorSpec s{1.0, 1.0, 1.0, HurstParam(0.75)};
    const double g = predict::g_exp(0.5, s, 1.0 / 1024);
    CHECK(std::isfinite(g));
    try {
        predict::g_exp(1e-6, s, 1.0 / 1024);
        FAIL("expected an evaluation error");
    } catch (const EvaluationError& err) {
        CHECK(err.min_offset() > 1e-6);
    }
}

TEST_CASE("linear predictor") {
    const predict::PredictorSpec s{-1.0, 1.0, 1.0, HurstParam(0.75)};
    noise::SamplePath zero;
    zero.t0 = -1.0;
    zero.dt = 1.0 / 16;
    zero.values.assign(17, 0.0);
    CHECK(predict::predict_linear_ou(zero, s, 1.0 / 512) == 0.0);
    noise::SamplePath shorter = zero;
    shorter.t0 = -0.5;
    shorter.values.assign(9, 0.0);
    CHECK_THROWS(predict::predict_linear_ou(shorter, s, 1.0 / 512));
}

TEST_CASE("linear predictor beats the zero predictor") {
    const predict::PredictorSpec s{-1.0, 1.0, 1.0, HurstParam(0.75)};
    const auto c = predict::compare_predictors(s, 16, 300, 5, 1.0 / 512, 64, 0);
    CHECK(c.mse_linear.value < c.mse_zero.value);
}
