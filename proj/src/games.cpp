#include "rosctl/games.hpp"

#include <cmath>
#include <limits>

#include "rosctl/control.hpp"
#include "rosctl/errors.hpp"

namespace rosctl::games {

using numerics::HurstParam;

ZeroSumSpec::ZeroSumSpec(double b1_, double b2_, double b3_, double q_, double r_, double s_, HurstParam h_)
    : b1(b1_), b2(b2_), b3(b3_), q(q_), r(r_), s(s_), h(h_) {
    if (b2 == 0.0 || b3 == 0.0) throw DomainError("zero-sum game needs b2 != 0 and b3 != 0");
    if (!(q > 0.0) || !(r > 0.0) || !(s > 0.0)) throw DomainError("zero-sum weights must be positive");
    if (discriminant() < 0.0)
        throw DomainError("zero-sum existence condition violated: discriminant " + std::to_string(discriminant()) +
                          " < 0");
}

// With K = -(b2 s / (b3 r)) L the maximizer's condition becomes A L^2 + B L + C = 0.
double ZeroSumSpec::coef_a() const {
    const double H = h.value();
    const double k = b2 * b2 * s * s / (b3 * r);
    return -k + s * b3 + H * k - H * b3 * s;
}
double ZeroSumSpec::coef_b() const { return s * b1; }
double ZeroSumSpec::coef_c() const { return h.value() * b3 * q; }
double ZeroSumSpec::discriminant() const {
    return coef_b() * coef_b() - 4.0 * coef_a() * coef_c();
}

double zero_sum_value_at(double k, double l, const ZeroSumSpec& sp) {
    const double b = sp.b1 + sp.b2 * k + sp.b3 * l;
    if (!(b < 0.0)) return std::numeric_limits<double>::infinity();
    const double H = sp.h.value();
    return numerics::gamma_fn(2.0 * H + 1.0) * (sp.q + sp.r * k * k - sp.s * l * l) / (2.0 * std::pow(-b, 2.0 * H));
}

SaddleSolution zero_sum_saddle(const ZeroSumSpec& sp) {
    const double A = sp.coef_a(), B = sp.coef_b(), C = sp.coef_c();
    std::vector<double> roots;
    if (std::abs(A) < 1e-300) {
        if (B == 0.0) throw InadmissibleError("zero-sum first-order conditions are degenerate");
        roots.push_back(-C / B);
    } else {
        const double disc = B * B - 4.0 * A * C;
        if (disc < 0.0) throw DomainError("zero-sum existence condition violated");
        const double sq = std::sqrt(disc);
        // Cancellation-free pair of roots.
        const double qq = -0.5 * (B + std::copysign(sq, B));
        if (qq != 0.0) {
            roots.push_back(qq / A);
            roots.push_back(C / qq);
        } else {
            roots.push_back(0.0);
        }
    }
    const double ratio = -(sp.b2 * sp.s) / (sp.b3 * sp.r);
    std::vector<SaddleSolution> stable;
    for (double l : roots) {
        SaddleSolution sol;
        sol.l = l;
        sol.k = ratio * l;
        sol.closed_loop = sp.b1 + sp.b2 * sol.k + sp.b3 * l;
        if (sol.closed_loop < 0.0) stable.push_back(sol);
    }
    if (stable.empty()) throw InadmissibleError("no stabilizing root: the zero-sum game has no saddle in this class");
    SaddleSolution best = stable.front();
    best.root_choice = "unique-stabilizing";
    if (stable.size() == 2) {
        if (std::abs(stable[1].l) < std::abs(best.l)) best = stable[1];
        best.root_choice = "smaller-|L|";
    }
    best.value = zero_sum_value_at(best.k, best.l, sp);
    return best;
}

NashSpec::NashSpec(std::size_t n, double b1_, std::vector<double> b2_, std::vector<double> q_,
                   std::vector<double> r_, HurstParam h_)
    : n_players(n), b1(b1_), b2(std::move(b2_)), q(std::move(q_)), r(std::move(r_)), h(h_) {
    if (n == 0) throw ConfigError("Nash game needs at least one player");
    if (b2.size() != n || q.size() != n || r.size() != n)
        throw ConfigError("Nash coefficient sequences must have length n_players");
    for (std::size_t i = 0; i < n; ++i) {
        if (b2[i] == 0.0) throw DomainError("Nash control coefficients must be nonzero");
        if (!(q[i] > 0.0) || !(r[i] > 0.0)) throw DomainError("Nash weights must be positive");
    }
}

double best_response_gain(double a, double b2i, double qi, double ri, HurstParam h) {
    return control::gain_formula(a, b2i, qi, ri, h.value());
}

double player_cost(std::size_t i, const std::vector<double>& gains, const NashSpec& sp) {
    double b = sp.b1;
    for (std::size_t j = 0; j < sp.n_players; ++j) b += sp.b2[j] * gains[j];
    if (!(b < 0.0)) return std::numeric_limits<double>::infinity();
    const double H = sp.h.value();
    return numerics::gamma_fn(2.0 * H + 1.0) * (sp.q[i] + sp.r[i] * gains[i] * gains[i]) /
           (2.0 * std::pow(-b, 2.0 * H));
}

namespace {

std::vector<double> best_responses(const std::vector<double>& k, const NashSpec& sp) {
    double total = sp.b1;
    for (std::size_t j = 0; j < sp.n_players; ++j) total += sp.b2[j] * k[j];
    std::vector<double> br(sp.n_players);
    for (std::size_t i = 0; i < sp.n_players; ++i) {
        const double a = total - sp.b2[i] * k[i];
        br[i] = best_response_gain(a, sp.b2[i], sp.q[i], sp.r[i], sp.h);
    }
    return br;
}

}  // namespace

NashSolution nash_fixed_point(const NashSpec& sp, double damping, double tol, std::size_t max_iter) {
    if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
    std::vector<double> k(sp.n_players, 0.0);
    double res = std::numeric_limits<double>::infinity();
    std::size_t it = 0;
    for (; it < max_iter; ++it) {
        const auto br = best_responses(k, sp);
        res = 0.0;
        for (std::size_t i = 0; i < sp.n_players; ++i) {
            res = std::max(res, std::abs(br[i] - k[i]));
            k[i] += damping * (br[i] - k[i]);
        }
        if (res < tol) break;
    }
    NashSolution sol;
    sol.gains = k;
    const auto br = best_responses(k, sp);
    sol.residuals.resize(sp.n_players);
    double worst = 0.0;
    for (std::size_t i = 0; i < sp.n_players; ++i) {
        sol.residuals[i] = std::abs(br[i] - k[i]);
        worst = std::max(worst, sol.residuals[i]);
    }
    sol.iterations = it;
    if (!(worst < tol))
        throw ConvergenceError("Nash iteration did not converge, residual " + std::to_string(worst), worst);
    sol.closed_loop = sp.b1;
    for (std::size_t j = 0; j < sp.n_players; ++j) sol.closed_loop += sp.b2[j] * k[j];
    if (!(sol.closed_loop < 0.0))
        throw InadmissibleError("Nash fixed point is not jointly stabilizing");
    sol.costs.resize(sp.n_players);
    for (std::size_t i = 0; i < sp.n_players; ++i) sol.costs[i] = player_cost(i, k, sp);
    return sol;
}

}  // namespace rosctl::games
