#pragma once

#include <string>
#include <vector>

#include "rosctl/numerics.hpp"

namespace rosctl::games {

// Zero-sum game: minimizer gain K (weight r), maximizer gain L (weight s).
class ZeroSumSpec {
public:
    ZeroSumSpec(double b1, double b2, double b3, double q, double r, double s, numerics::HurstParam h);

    double b1, b2, b3, q, r, s;
    numerics::HurstParam h;

    // Coefficients of A L^2 + B L + C = 0 obtained from the two first-order conditions.
    double coef_a() const;
    double coef_b() const;
    double coef_c() const;
    double discriminant() const;
};

struct SaddleSolution {
    double k = 0.0;
    double l = 0.0;
    double value = 0.0;
    double closed_loop = 0.0;
    std::string root_choice;  // "unique-stabilizing" or "smaller-|L|"
};

SaddleSolution zero_sum_saddle(const ZeroSumSpec& spec);
double zero_sum_value_at(double k, double l, const ZeroSumSpec& spec);

struct NashSpec {
    NashSpec(std::size_t n_players, double b1, std::vector<double> b2, std::vector<double> q,
             std::vector<double> r, numerics::HurstParam h);

    std::size_t n_players;
    double b1;
    std::vector<double> b2, q, r;
    numerics::HurstParam h;
};

struct NashSolution {
    std::vector<double> gains;
    std::vector<double> residuals;  // |K_i - BR_i(K_{-i})|
    std::vector<double> costs;
    double closed_loop = 0.0;
    std::size_t iterations = 0;
};

double best_response_gain(double a, double b2i, double qi, double ri, numerics::HurstParam h);

// Player i's ergodic cost Gamma(2H+1)(q_i + r_i K_i^2)/(2 (-(b1 + sum b2j Kj))^{2H}).
double player_cost(std::size_t i, const std::vector<double>& gains, const NashSpec& spec);

NashSolution nash_fixed_point(const NashSpec& spec, double damping = 0.5, double tol = 1e-12,
                              std::size_t max_iter = 100000);

}  // namespace rosctl::games
