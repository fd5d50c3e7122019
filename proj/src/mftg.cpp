#include "rosctl/mftg.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "rosctl/errors.hpp"
#include "rosctl/io.hpp"
#include "rosctl/parallel.hpp"

namespace rosctl::mftg {

namespace {

constexpr double kBlowUp = 1e12;

// Value of a grid profile at half-index j (node j/2, or the midpoint of a cell), the
// midpoints by 4-point Lagrange interpolation.
double at_half(const std::vector<double>& f, std::size_t j) {
    if (j % 2 == 0) return f[j / 2];
    const std::size_t k = j / 2;  // midpoint of [k, k+1]
    const std::size_t n = f.size() - 1;
    if (n < 3) return 0.5 * (f[k] + f[k + 1]);
    if (k == 0) return (5.0 * f[0] + 15.0 * f[1] - 5.0 * f[2] + f[3]) / 16.0;
    if (k + 1 == n) return (5.0 * f[n] + 15.0 * f[n - 1] - 5.0 * f[n - 2] + f[n - 3]) / 16.0;
    return (-f[k - 1] + 9.0 * f[k] + 9.0 * f[k + 1] - f[k + 2]) / 16.0;
}

// Backward RK4 of -y' = F(t, y, half_index) from y(T) = terminal.
template <class F>
std::vector<double> rk4_backward(F&& rhs, double terminal, const Grid& g, const char* what) {
    if (g.n == 0 || !(g.T > 0.0)) throw ConfigError("MFTG grid needs T > 0 and n >= 1");
    const double h = g.step();
    std::vector<double> y(g.n + 1);
    y[g.n] = terminal;
    for (std::size_t k = g.n; k > 0; --k) {
        const double t = g.time(k), tm = t - 0.5 * h, tp = g.time(k - 1);
        const double v = y[k];
        const double k1 = rhs(t, v, 2 * k);
        const double k2 = rhs(tm, v + 0.5 * h * k1, 2 * k - 1);
        const double k3 = rhs(tm, v + 0.5 * h * k2, 2 * k - 1);
        const double k4 = rhs(tp, v + h * k3, 2 * k - 2);
        const double next = v + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(next) || next > kBlowUp || next < 0.0)
            throw BlowUpError(std::string(what) + " left the positive bounded region (no equilibrium certificate) at t=" +
                                  std::to_string(tp),
                              tp);
        y[k - 1] = next;
    }
    return y;
}

double signed_power(double base, int kbar, double expo) {
    if (kbar >= 2 && base < 0.0)
        throw DomainError("negative base raised to a fractional power (coefficient-sign error)");
    return std::pow(base, expo);
}

std::vector<double> sample(const TimeFn& f, const Grid& g) {
    std::vector<double> v(g.n + 1);
    for (std::size_t k = 0; k <= g.n; ++k) v[k] = f(g.time(k));
    return v;
}

}  // namespace

void MftgSpec::validate() const {
    const std::size_t n = n_players;
    if (n == 0) throw ConfigError("MFTG needs at least one player");
    auto chk = [n](std::size_t sz, const char* name) {
        if (sz != n) throw ConfigError(std::string("MFTG field ") + name + " must have n_players entries");
    };
    chk(b2.size(), "b2");
    chk(b2bar.size(), "b2bar");
    chk(q.size(), "q");
    chk(qbar.size(), "qbar");
    chk(r.size(), "r");
    chk(rbar.size(), "rbar");
    chk(qT.size(), "qT");
    chk(qbarT.size(), "qbarT");
    chk(kbar.size(), "kbar");
    if (grid.n == 0 || !(grid.T > 0.0)) throw ConfigError("MFTG grid needs T > 0 and n >= 1");
    for (std::size_t i = 0; i < n; ++i) {
        if (kbar[i] < 1) throw DomainError("kbar must be a positive integer");
        bool b2_nonzero = false, b2bar_nonzero = false;
        for (std::size_t j = 0; j <= 2 * grid.n; ++j) {
            const double t = 0.5 * grid.step() * static_cast<double>(j);
            if (!(r[i](t) >= epsilon) || !(rbar[i](t) >= epsilon))
                throw DomainError("r_i and rbar_i must stay above epsilon on the grid");
            if (q[i](t) < 0.0 || qbar[i](t) < 0.0) throw DomainError("q_i and qbar_i must be nonnegative");
            b2_nonzero = b2_nonzero || b2[i](t) != 0.0;
            b2bar_nonzero = b2bar_nonzero || (b2[i](t) + b2bar[i](t)) != 0.0;
        }
        if (!b2_nonzero || !b2bar_nonzero) throw DomainError("b2_i and b2_i + b2bar_i must not vanish identically");
        if (qT[i] < 0.0 || qbarT[i] < 0.0) throw DomainError("terminal weights must be nonnegative");
    }
}

double MftgSpec::noise_constant() const { return numerics::rosenblatt_constants(h).c; }

double MftgSpec::kernel_constant() const {
    if (c3) return *c3;
    const double H = h.value();
    if (c3_policy == KernelConstant::raw_c_tilde_h) return numerics::rosenblatt_constants(h).c_tilde_h;
    return H * (2.0 * H - 1.0) / noise_constant();
}

std::vector<double> solve_lambda(const TimeFn& b1, const TimeFn& b2i, const TimeFn& qi, const TimeFn& ri,
                                 double terminal, const Grid& grid) {
    if (terminal < 0.0) throw DomainError("solve_lambda: terminal value must be nonnegative");
    auto rhs = [&](double t, double y, std::size_t) {
        const double b2 = b2i(t);
        return qi(t) + 2.0 * b1(t) * y - b2 * b2 / ri(t) * y * y;
    };
    return rk4_backward(rhs, terminal, grid, "lambda");
}

double eta_bar_of(double c, double lambda_bar, double rbar, int kbar) {
    const double base = c * lambda_bar / rbar;
    return signed_power(base, kbar, 1.0 / (2.0 * kbar - 1.0));
}

std::vector<double> solve_lambda_bar(const LambdaBarCoeffs& co, int kbar, const std::vector<OtherPlayer>& others,
                                     double terminal, const Grid& grid) {
    if (kbar < 1) throw DomainError("kbar must be a positive integer");
    if (terminal < 0.0) throw DomainError("solve_lambda_bar: terminal value must be nonnegative");
    for (const auto& o : others)
        if (o.eta_bar.size() != grid.n + 1) throw ConfigError("other player's eta_bar profile does not match the grid");
    const double k2 = 2.0 * kbar;
    const double pw = k2 / (k2 - 1.0);
    auto rhs = [&](double t, double y, std::size_t j) {
        double cross = 0.0;
        for (const auto& o : others) cross += o.c(t) * at_half(o.eta_bar, j);
        const double rb = co.rbar(t);
        const double base = co.c_own(t) * y / rb;
        return co.qbar(t) + k2 * co.a(t) * y - k2 * y * cross - (k2 - 1.0) * rb * signed_power(base, kbar, pw);
    };
    return rk4_backward(rhs, terminal, grid, "lambda_bar");
}

OV2 compute_o_v2(const std::vector<double>& b, numerics::HurstParam hp, double c3, double v2_init, const Grid& g) {
    if (b.size() != g.n + 1) throw ConfigError("closed-loop coefficient does not match the grid");
    const double H = hp.value();
    const double c = numerics::rosenblatt_constants(hp).c;
    const double h = g.step();
    std::vector<double> B(g.n + 1, 0.0);
    for (std::size_t k = 0; k < g.n; ++k) B[k + 1] = B[k] + 0.5 * h * (b[k] + b[k + 1]);
    OV2 out;
    out.o = numerics::singular_exp_convolution(2.0 * H - 2.0, h, B);
    for (auto& v : out.o) v *= c3;
    // v2' = 2 b v2 + 2 c o; exact for o linear and b constant on each cell.
    out.v2.assign(g.n + 1, 0.0);
    out.v2[0] = v2_init;
    for (std::size_t k = 0; k < g.n; ++k) {
        const double z = 2.0 * (B[k + 1] - B[k]);
        const double o0 = out.o[k], o1 = out.o[k + 1];
        out.v2[k + 1] = std::exp(z) * out.v2[k] + 2.0 * c * h * (o0 * numerics::phi1(z) + (o1 - o0) * numerics::phi2(z));
    }
    return out;
}

OV2 compute_o_v2(const TimeFn& b, numerics::HurstParam h, double c3, double v2_init, const Grid& g) {
    return compute_o_v2(sample(b, g), h, c3, v2_init, g);
}

namespace {

// gamma(T) = 0, -gamma' = integrand, backward cumulative trapezoid.
std::vector<double> integrate_backward(const std::vector<double>& integrand, const Grid& g) {
    std::vector<double> out(g.n + 1, 0.0);
    const double h = g.step();
    for (std::size_t k = g.n; k > 0; --k) out[k - 1] = out[k] + 0.5 * h * (integrand[k] + integrand[k - 1]);
    return out;
}

double max_abs_diff(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a[i].size(); ++k) m = std::max(m, std::abs(a[i][k] - b[i][k]));
    return m;
}

double power_int(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

}  // namespace

MftgSolution mftg_equilibrium(const MftgSpec& sp, double tol, std::size_t max_iter) {
    sp.validate();
    const Grid& g = sp.grid;
    const std::size_t n = sp.n_players;
    const double c = sp.noise_constant();
    const double c3 = sp.kernel_constant();
    const double v2_init = sp.v2_init.value_or(sp.var_x0);

    MftgSolution sol;
    sol.t.resize(g.n + 1);
    for (std::size_t k = 0; k <= g.n; ++k) sol.t[k] = g.time(k);

    // (i)-(ii): lambda_i does not involve eta; eta_i = lambda_i b2i / r_i.
    sol.lambda.resize(n);
    parallel_for(n, 0, [&](std::size_t i) {
        sol.lambda[i] = solve_lambda(sp.b1, sp.b2[i], sp.q[i], sp.r[i], sp.qT[i], g);
    });
    sol.eta.assign(n, std::vector<double>(g.n + 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k <= g.n; ++k) {
            const double t = g.time(k);
            sol.eta[i][k] = sol.lambda[i][k] * sp.b2[i](t) / sp.r[i](t);
        }

    sol.eta_bar.assign(n, std::vector<double>(g.n + 1, 0.0));
    sol.lambda_bar.assign(n, {});
    double res = 0.0;
    std::size_t it = 0;
    for (; it < max_iter; ++it) {
        // (iii) closed loop, o and v2
        std::vector<double> b(g.n + 1);
        for (std::size_t k = 0; k <= g.n; ++k) {
            const double t = g.time(k);
            double v = sp.b1(t);
            for (std::size_t j = 0; j < n; ++j) v -= sp.b2[j](t) * sol.eta[j][k];
            b[k] = v;
        }
        auto ov = compute_o_v2(b, sp.h, c3, v2_init, g);
        sol.o = std::move(ov.o);
        sol.v2 = std::move(ov.v2);

        // (iv) Jacobi update of every lambda_bar_i against the previous eta_bar profiles
        auto prev = sol.eta_bar;
        std::vector<std::vector<double>> next_eta_bar(n);
        parallel_for(n, 0, [&](std::size_t i) {
            LambdaBarCoeffs co;
            co.a = [&](double t) { return sp.b1(t) + sp.b1bar(t); };
            co.c_own = [&, i](double t) { return sp.b2[i](t) + sp.b2bar[i](t); };
            co.qbar = sp.qbar[i];
            co.rbar = sp.rbar[i];
            std::vector<OtherPlayer> others;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) others.push_back({[&, j](double t) { return sp.b2[j](t) + sp.b2bar[j](t); }, prev[j]});
            sol.lambda_bar[i] = solve_lambda_bar(co, sp.kbar[i], others, sp.qbarT[i], g);
            std::vector<double> eb(g.n + 1);
            for (std::size_t k = 0; k <= g.n; ++k) {
                const double t = g.time(k);
                eb[k] = eta_bar_of(co.c_own(t), sol.lambda_bar[i][k], sp.rbar[i](t), sp.kbar[i]);
            }
            next_eta_bar[i] = std::move(eb);
        });
        res = max_abs_diff(next_eta_bar, prev);
        sol.eta_bar = std::move(next_eta_bar);
        if (res < tol) {
            ++it;
            break;
        }
    }
    sol.iterations = it;
    sol.residual = res;
    if (!(res < tol))
        throw ConvergenceError("MFTG fixed point did not converge, residual " + std::to_string(res), res);

    // (v) gamma_i
    sol.gamma.assign(n, {});
    sol.cost.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> integrand(g.n + 1);
        for (std::size_t k = 0; k <= g.n; ++k) {
            const double t = g.time(k);
            const double ri = sp.r[i](t);
            const double dev = sol.eta[i][k] - sol.lambda[i][k] * sp.b2[i](t) / ri;
            double cross = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) cross += sp.b2[j](t) * sol.eta[j][k];
            integrand[k] = ri * dev * dev * sol.v2[k] - 2.0 * sol.lambda[i][k] * cross * sol.v2[k] +
                           2.0 * c * sol.lambda[i][k] * sol.o[k];
        }
        sol.gamma[i] = integrate_backward(integrand, g);
        const int kb = sp.kbar[i];
        sol.cost[i] = sol.lambda[i][0] * sp.var_x0 + sol.lambda_bar[i][0] * power_int(sp.xbar0, 2 * kb) / (2.0 * kb) +
                      sol.gamma[i][0];
    }
    return sol;
}

MftgSolution cooperative_optimum(const MftgSpec& sp, const std::vector<double>& w, double, std::size_t) {
    sp.validate();
    const std::size_t n = sp.n_players;
    if (w.size() != n) throw ConfigError("cooperative weights must have n_players entries");
    for (double x : w)
        if (!(x > 0.0)) throw DomainError("cooperative weights must be positive");
    for (std::size_t i = 1; i < n; ++i)
        if (sp.kbar[i] != sp.kbar[0]) throw ConfigError("cooperative optimum needs a common kbar");
    const Grid& g = sp.grid;
    const int kb = sp.kbar[0];
    const double k2 = 2.0 * kb;
    const double c = sp.noise_constant();
    const double c3 = sp.kernel_constant();
    const double v2_init = sp.v2_init.value_or(sp.var_x0);

    double lamT = 0.0, lambarT = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lamT += w[i] * sp.qT[i];
        lambarT += w[i] * sp.qbarT[i];
    }
    auto lam = rk4_backward(
        [&](double t, double y, std::size_t) {
            double qs = 0.0, agg = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                qs += w[i] * sp.q[i](t);
                const double b2 = sp.b2[i](t);
                agg += b2 * b2 / (w[i] * sp.r[i](t));
            }
            return qs + 2.0 * sp.b1(t) * y - agg * y * y;
        },
        lamT, g, "lambda");
    auto lambar = rk4_backward(
        [&](double t, double y, std::size_t) {
            double qs = 0.0, nl = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                qs += w[i] * sp.qbar[i](t);
                const double wr = w[i] * sp.rbar[i](t);
                const double base = (sp.b2[i](t) + sp.b2bar[i](t)) * y / wr;
                nl += wr * signed_power(base, kb, k2 / (k2 - 1.0));
            }
            return qs + k2 * y * (sp.b1(t) + sp.b1bar(t)) - (k2 - 1.0) * nl;
        },
        lambarT, g, "lambda_bar");

    MftgSolution sol;
    sol.t.resize(g.n + 1);
    for (std::size_t k = 0; k <= g.n; ++k) sol.t[k] = g.time(k);
    sol.lambda.assign(n, lam);
    sol.lambda_bar.assign(n, lambar);
    sol.eta.assign(n, std::vector<double>(g.n + 1));
    sol.eta_bar.assign(n, std::vector<double>(g.n + 1));
    std::vector<double> b(g.n + 1);
    for (std::size_t k = 0; k <= g.n; ++k) {
        const double t = g.time(k);
        double v = sp.b1(t);
        for (std::size_t i = 0; i < n; ++i) {
            sol.eta[i][k] = lam[k] * sp.b2[i](t) / (w[i] * sp.r[i](t));
            sol.eta_bar[i][k] = eta_bar_of(sp.b2[i](t) + sp.b2bar[i](t), lambar[k], w[i] * sp.rbar[i](t), kb);
            v -= sp.b2[i](t) * sol.eta[i][k];
        }
        b[k] = v;
    }
    auto ov = compute_o_v2(b, sp.h, c3, v2_init, g);
    sol.o = std::move(ov.o);
    sol.v2 = std::move(ov.v2);
    std::vector<double> integrand(g.n + 1);
    for (std::size_t k = 0; k <= g.n; ++k) {
        const double t = g.time(k);
        double quad = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double wr = w[i] * sp.r[i](t);
            const double dev = sol.eta[i][k] - lam[k] * sp.b2[i](t) / wr;
            quad += wr * dev * dev;
        }
        integrand[k] = quad * sol.v2[k] + 2.0 * c * lam[k] * sol.o[k];
    }
    auto gam = integrate_backward(integrand, g);
    sol.gamma.assign(n, gam);
    const double total = lam[0] * sp.var_x0 + lambar[0] * power_int(sp.xbar0, 2 * kb) / k2 + gam[0];
    sol.cost.assign(n, total);
    sol.iterations = 1;
    sol.residual = 0.0;
    return sol;
}

void write_csv(std::ostream& os, const MftgSolution& sol) {
    const std::size_t n = sol.lambda.size();
    os << "t";
    for (std::size_t i = 0; i < n; ++i) os << ",lambda_" << i;
    for (std::size_t i = 0; i < n; ++i) os << ",lambda_bar_" << i;
    for (std::size_t i = 0; i < n; ++i) os << ",eta_" << i;
    for (std::size_t i = 0; i < n; ++i) os << ",eta_bar_" << i;
    os << ",o,v2";
    for (std::size_t i = 0; i < n; ++i) os << ",gamma_" << i;
    os << "\n";
    for (std::size_t k = 0; k < sol.t.size(); ++k) {
        os << io::fmt(sol.t[k]);
        for (const auto& v : sol.lambda) os << ',' << io::fmt(v[k]);
        for (const auto& v : sol.lambda_bar) os << ',' << io::fmt(v[k]);
        for (const auto& v : sol.eta) os << ',' << io::fmt(v[k]);
        for (const auto& v : sol.eta_bar) os << ',' << io::fmt(v[k]);
        os << ',' << io::fmt(sol.o[k]) << ',' << io::fmt(sol.v2[k]);
        for (const auto& v : sol.gamma) os << ',' << io::fmt(v[k]);
        os << "\n";
    }
}

}  // namespace rosctl::mftg
