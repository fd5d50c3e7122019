#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rosctl/numerics.hpp"

namespace rosctl::mftg {

using TimeFn = std::function<double(double)>;

inline TimeFn constant(double v) {
    return [v](double) { return v; };
}

// Uniform grid t_k = k T / n, k = 0..n.
struct Grid {
    double T = 1.0;
    std::size_t n = 100;
    double step() const { return T / static_cast<double>(n); }
    double time(std::size_t k) const { return T * static_cast<double>(k) / static_cast<double>(n); }
};

enum class KernelConstant { calibrated, raw_c_tilde_h };

struct MftgSpec {
    std::size_t n_players = 1;
    Grid grid;
    TimeFn b1 = constant(0.0), b1bar = constant(0.0);
    std::vector<TimeFn> b2, b2bar, q, qbar, r, rbar;
    std::vector<double> qT, qbarT;
    std::vector<int> kbar;
    double var_x0 = 0.0;  // E(x0 - xbar0)^2
    double xbar0 = 0.0;
    std::optional<double> v2_init;  // defaults to var_x0
    std::optional<double> c3;       // explicit kernel constant; overrides the policy below
    KernelConstant c3_policy = KernelConstant::calibrated;
    numerics::HurstParam h{0.75};
    double epsilon = 1e-12;  // lower bound for r, rbar on the grid

    void validate() const;
    double kernel_constant() const;
    double noise_constant() const;  // c = C_R^H Gamma(H/2)^2
};

struct MftgSolution {
    std::vector<double> t;
    std::vector<std::vector<double>> lambda, lambda_bar, gamma, eta, eta_bar;
    std::vector<double> o, v2;
    std::vector<double> cost;
    std::size_t iterations = 0;
    double residual = 0.0;
};

// Backward RK4 for -lambda' = q + 2 b1 lambda - (b2^2 / r) lambda^2, lambda(T) = terminal.
std::vector<double> solve_lambda(const TimeFn& b1, const TimeFn& b2i, const TimeFn& qi, const TimeFn& ri,
                                 double terminal, const Grid& grid);

struct LambdaBarCoeffs {
    TimeFn a;       // b1 + b1bar
    TimeFn c_own;   // b2i + b2bar_i
    TimeFn qbar;    // qbar_i
    TimeFn rbar;    // rbar_i
};

// Other player j enters through (b2j + b2bar_j)(t) and its eta_bar_j profile on the grid.
struct OtherPlayer {
    TimeFn c;
    std::vector<double> eta_bar;
};

std::vector<double> solve_lambda_bar(const LambdaBarCoeffs& coeffs, int kbar,
                                     const std::vector<OtherPlayer>& others, double terminal,
                                     const Grid& grid);

// ((c lambda_bar / rbar))^{1/(2 kbar - 1)}, rejecting negative bases for kbar >= 2.
double eta_bar_of(double c, double lambda_bar, double rbar, int kbar);

struct OV2 {
    std::vector<double> o, v2;
};

// o and v2 for a closed-loop coefficient given at the grid nodes.
OV2 compute_o_v2(const std::vector<double>& b, numerics::HurstParam h, double c3, double v2_init,
                 const Grid& grid);
OV2 compute_o_v2(const TimeFn& b, numerics::HurstParam h, double c3, double v2_init, const Grid& grid);

MftgSolution mftg_equilibrium(const MftgSpec& spec, double tol = 1e-10, std::size_t max_iter = 200);
MftgSolution cooperative_optimum(const MftgSpec& spec, const std::vector<double>& weights,
                                 double tol = 1e-10, std::size_t max_iter = 200);

void write_csv(std::ostream& os, const MftgSolution& sol);

}  // namespace rosctl::mftg
