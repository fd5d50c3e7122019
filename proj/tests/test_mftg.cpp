#include "doctest.h"

#include <cmath>

#include "rosctl/control.hpp"
#include "rosctl/errors.hpp"
#include "rosctl/mftg.hpp"

using namespace rosctl;
using numerics::HurstParam;

namespace {

mftg::MftgSpec one_player() {
    mftg::MftgSpec sp;
    sp.n_players = 1;
    sp.grid = {1.0, 200};
    sp.b1 = mftg::constant(-0.5);
    sp.b1bar = mftg::constant(0.1);
    sp.b2 = {mftg::constant(1.0)};
    sp.b2bar = {mftg::constant(0.2)};
    sp.q = {mftg::constant(1.0)};
    sp.qbar = {mftg::constant(0.5)};
    sp.r = {mftg::constant(1.0)};
    sp.rbar = {mftg::constant(2.0)};
    sp.qT = {1.0};
    sp.qbarT = {0.5};
    sp.kbar = {1};
    sp.var_x0 = 0.3;
    sp.xbar0 = 1.0;
    return sp;
}

}  // namespace

TEST_CASE("lambda Riccati") {
    const double b1 = 0.4, b2 = 1.3, q = 0.8, r = 1.7;
    const double root = r * (b1 + std::sqrt(b1 * b1 + q * b2 * b2 / r)) / (b2 * b2);
    const auto lam = mftg::solve_lambda(mftg::constant(b1), mftg::constant(b2), mftg::constant(q), mftg::constant(r), root,
                                        {2.0, 100});
    for (double v : lam) CHECK(v == doctest::Approx(root).epsilon(1e-12));
    const auto zero = mftg::solve_lambda(mftg::constant(b1), mftg::constant(b2), mftg::constant(0.0), mftg::constant(r),
                                         0.0, {2.0, 100});
    for (double v : zero) CHECK(v == 0.0);

    // Closed-form Riccati solution for b1 = 0: lambda(t) = sqrt(qr)/b2 * tanh(...) family, compared numerically.
    const double a = std::sqrt(q * r) / b2, w = b2 * std::sqrt(q / r);
    const auto l = mftg::solve_lambda(mftg::constant(0.0), mftg::constant(b2), mftg::constant(q), mftg::constant(r), 0.0,
                                      {1.0, 400});
    CHECK(l[0] == doctest::Approx(a * std::tanh(w * 1.0)).epsilon(1e-10));
}

TEST_CASE("lambda_bar reduces to a Riccati at kbar = 1") {
    const mftg::Grid g{1.0, 200};
    mftg::LambdaBarCoeffs co{mftg::constant(-0.3), mftg::constant(1.2), mftg::constant(0.7), mftg::constant(1.5)};
    const auto lb = mftg::solve_lambda_bar(co, 1, {}, 0.4, g);
    const auto l = mftg::solve_lambda(co.a, co.c_own, co.qbar, co.rbar, 0.4, g);
    for (std::size_t k = 0; k < l.size(); ++k) CHECK(lb[k] == doctest::Approx(l[k]).epsilon(1e-12));
    mftg::LambdaBarCoeffs zq{mftg::constant(-0.3), mftg::constant(1.2), mftg::constant(0.0), mftg::constant(1.5)};
    for (double v : mftg::solve_lambda_bar(zq, 2, {}, 0.0, g)) CHECK(v == 0.0);
    // kbar = 2 self-convergence.
    const auto c = mftg::solve_lambda_bar(co, 2, {}, 0.4, {1.0, 100});
    const auto f = mftg::solve_lambda_bar(co, 2, {}, 0.4, {1.0, 1600});
    for (std::size_t k = 0; k <= 100; ++k) CHECK(std::abs(c[k] - f[16 * k]) < 1e-8);
}

TEST_CASE("kernel functions o and v2") {
    const HurstParam h(0.75);
    const auto short_run = mftg::compute_o_v2(mftg::constant(-1.0), h, 0.3, 0.25, {1.0, 50});
    CHECK(short_run.o[0] == 0.0);
    CHECK(short_run.v2[0] == 0.25);
    const auto ov = mftg::compute_o_v2(mftg::constant(-1.0), h, 0.3, 0.0, {40.0, 8000});
    CHECK(ov.o.back() == doctest::Approx(0.3 * numerics::gamma_fn(0.5)).epsilon(1e-6));
    mftg::MftgSpec sp;
    sp.h = h;
    const auto cal = mftg::compute_o_v2(mftg::constant(-2.0), h, sp.kernel_constant(), 0.0, {40.0, 8000});
    CHECK(cal.v2.back() == doctest::Approx(control::stationary_second_moment(-2.0, 0.75)).epsilon(1e-6));
}

TEST_CASE("equilibrium structure") {
    auto sp = one_player();
    const auto eq = mftg::mftg_equilibrium(sp);
    CHECK(eq.gamma[0].back() == 0.0);
    for (std::size_t k = 0; k < eq.t.size(); ++k) {
        CHECK(eq.lambda[0][k] > 0.0);
        CHECK(eq.lambda_bar[0][k] > 0.0);
        CHECK(eq.v2[k] >= 0.0);
        // First-order condition: eta = lambda b2 / r.
        CHECK(eq.eta[0][k] == doctest::Approx(eq.lambda[0][k] * 1.0 / 1.0).epsilon(1e-12));
    }
    SUBCASE("noise off") {
        sp.c3 = 0.0;
        sp.v2_init = 0.0;
        const auto z = mftg::mftg_equilibrium(sp);
        for (double g : z.gamma[0]) CHECK(g == 0.0);
    }
    SUBCASE("cooperative optimum with one player") {
        const auto co = mftg::cooperative_optimum(sp, {1.0});
        for (std::size_t k = 0; k < eq.t.size(); ++k) {
            CHECK(co.eta[0][k] == doctest::Approx(eq.eta[0][k]).epsilon(1e-10));
            CHECK(co.eta_bar[0][k] == doctest::Approx(eq.eta_bar[0][k]).epsilon(1e-10));
        }
    }
}

TEST_CASE("symmetric players and cooperative scaling") {
    mftg::MftgSpec sp = one_player();
    sp.n_players = 2;
    sp.b2 = {mftg::constant(1.0), mftg::constant(1.0)};
    sp.b2bar = {mftg::constant(0.2), mftg::constant(0.2)};
    sp.q = {mftg::constant(1.0), mftg::constant(1.0)};
    sp.qbar = {mftg::constant(0.5), mftg::constant(0.5)};
    sp.r = {mftg::constant(1.0), mftg::constant(1.0)};
    sp.rbar = {mftg::constant(2.0), mftg::constant(2.0)};
    sp.qT = {1.0, 1.0};
    sp.qbarT = {0.5, 0.5};
    sp.kbar = {1, 1};
    const auto eq = mftg::mftg_equilibrium(sp);
    for (std::size_t k = 0; k < eq.t.size(); ++k) {
        CHECK(eq.lambda[0][k] == doctest::Approx(eq.lambda[1][k]).epsilon(1e-12));
        CHECK(eq.eta_bar[0][k] == doctest::Approx(eq.eta_bar[1][k]).epsilon(1e-12));
        CHECK(eq.gamma[0][k] == doctest::Approx(eq.gamma[1][k]).epsilon(1e-12));
    }
    const auto a = mftg::cooperative_optimum(sp, {1.0, 2.0});
    const auto b = mftg::cooperative_optimum(sp, {3.0, 6.0});
    for (std::size_t k = 0; k < a.t.size(); ++k) CHECK(a.eta[1][k] == doctest::Approx(b.eta[1][k]).epsilon(1e-10));
}

TEST_CASE("invalid specs") {
    auto sp = one_player();
    sp.r = {mftg::constant(0.0)};
    CHECK_THROWS(mftg::mftg_equilibrium(sp));
    sp = one_player();
    sp.kbar = {};
    CHECK_THROWS(mftg::mftg_equilibrium(sp));
}
