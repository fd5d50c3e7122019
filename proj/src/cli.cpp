#include "rosctl/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "rosctl/acceptance.hpp"
#include "rosctl/control.hpp"
#include "rosctl/cournot.hpp"
#include "rosctl/diffusion.hpp"
#include "rosctl/errors.hpp"
#include "rosctl/games.hpp"
#include "rosctl/harness.hpp"
#include "rosctl/io.hpp"
#include "rosctl/mftg.hpp"
#include "rosctl/noise.hpp"
#include "rosctl/predict.hpp"

namespace rosctl::cli {

using io::Json;

namespace {

Json typed(const std::string& s) {
    if (s == "true") return true;
    if (s == "false") return false;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    std::uint64_t u = 0;
    if (auto r = std::from_chars(b, e, u); r.ec == std::errc{} && r.ptr == e) return u;
    std::int64_t i = 0;
    if (auto r = std::from_chars(b, e, i); r.ec == std::errc{} && r.ptr == e) return i;
    double d = 0.0;
    if (auto r = std::from_chars(b, e, d); r.ec == std::errc{} && r.ptr == e) return d;
    return s;
}

Json option_value(const CLI::Option* opt) {
    if (opt->get_expected_min() == 0) return opt->count() > 0;
    std::vector<std::string> items;
    if (opt->count() > 0) {
        items = opt->results();
    } else {
        std::string d = opt->get_default_str();
        if (d.size() >= 2 && d.front() == '[' && d.back() == ']') {
            std::stringstream ss(d.substr(1, d.size() - 2));
            for (std::string item; std::getline(ss, item, ',');) items.push_back(item);
        } else {
            items.push_back(d);
        }
    }
    const bool list = opt->get_expected_max() > 1 || items.size() > 1;
    if (!list) return items.empty() || items[0].empty() ? Json(nullptr) : typed(items[0]);
    Json arr = Json::array();
    for (const auto& it : items) arr.push_back(typed(it));
    return arr;
}

void collect(const CLI::App* app, Json& into) {
    for (const CLI::Option* opt : app->get_options()) {
        const std::string name = opt->get_single_name();
        if (name.empty() || name == "help" || name == "config") continue;
        into[name] = option_value(opt);
    }
}

Json estimate(const harness::MCEstimate& e) {
    return Json{{"value", e.value}, {"std_error", e.std_error}, {"n", e.n}, {"seed", e.seed}};
}

Json array(const std::vector<double>& v) { return Json(v); }

std::vector<double> parse_grid(const std::string& spec) {
    double lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(spec);
    if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || hi < lo)
        throw ConfigError("grid must have the form lo:hi:step with step > 0");
    const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
    std::vector<double> out;
    for (std::size_t i = 0; i <= n; ++i) out.push_back(std::round((lo + step * static_cast<double>(i)) * 1e12) / 1e12);
    return out;
}

std::vector<double> broadcast(const std::vector<double>& v, std::size_t n, const char* what) {
    if (v.size() == n) return v;
    if (v.size() == 1) return std::vector<double>(n, v[0]);
    throw ConfigError(std::string(what) + " needs 1 or n values");
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file " + path);
    f << content;
    if (!f) throw ConfigError("failed to write " + path);
}

void print_text(std::ostream& out, const Json& doc) {
    out << "command: " << doc["command"].get<std::string>() << "\n";
    for (const auto& [k, v] : doc["result"].items()) out << k << ": " << v.dump() << "\n";
}

// Output of one subcommand: the JSON result and optional CSV content.
struct Outcome {
    Json result = Json::object();
    std::string csv;
    bool has_csv = false;
    int exit_code = 0;
};

noise::Kind parse_kind(const std::string& k) {
    if (k == "brownian") return noise::Kind::brownian;
    if (k == "fbm") return noise::Kind::fbm;
    if (k == "rosenblatt") return noise::Kind::rosenblatt;
    throw ConfigError("unknown noise kind " + k);
}

noise::NoiseKind noise_kind(const std::string& k, double h) {
    switch (parse_kind(k)) {
        case noise::Kind::brownian: return noise::NoiseKind::brownian();
        case noise::Kind::fbm:
            if (!(h > 0.0 && h < 1.0)) throw DomainError("fbm needs h in (0, 1)");
            return noise::NoiseKind::fbm(h);
        case noise::Kind::rosenblatt: return noise::NoiseKind::rosenblatt(numerics::HurstParam(h));
    }
    return noise::NoiseKind::brownian();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rosenblatt-noise control, games and diffusion toolkit", "rosctl"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "TOML-style key = value file; flags override file values");
    app.require_subcommand(1);
    app.fallthrough();

    bool json = false;
    std::size_t workers = 0;
    app.add_flag("--json", json, "Print the JSON document on stdout");
    app.add_option("--workers", workers, "Worker threads (0 = hardware)")->envname("ROSCTL_WORKERS");

    std::function<Outcome()> action;
    std::optional<std::uint64_t> seed_used;
    std::string csv_path;
    CLI::App* chosen = nullptr;

    auto add_csv = [&](CLI::App* sub) { sub->add_option("--csv", csv_path, "CSV output path (metadata in PATH.json)"); };

    // simulate -----------------------------------------------------------------------------
    std::string sim_kind = "rosenblatt", sim_method = "hermite";
    double sim_h = 0.75, sim_t = 1.0;
    std::size_t sim_n = 1024, sim_paths = 10, sim_up = 256;
    std::uint64_t sim_seed = 1;
    auto* sim = app.add_subcommand("simulate", "Noise sample paths");
    sim->add_option("--kind", sim_kind)->check(CLI::IsMember({"brownian", "fbm", "rosenblatt"}));
    sim->add_option("--h", sim_h);
    sim->add_option("--n", sim_n, "Steps per path");
    sim->add_option("--t", sim_t, "Horizon");
    sim->add_option("--paths", sim_paths);
    sim->add_option("--method", sim_method)->check(CLI::IsMember({"hermite", "double-integral"}));
    sim->add_option("--upsampling", sim_up);
    sim->add_option("--seed", sim_seed);
    add_csv(sim);
    sim->callback([&] {
        chosen = sim;
        action = [&] {
            noise::RosenblattOptions opt;
            opt.method = sim_method == "hermite" ? noise::RosenblattMethod::hermite
                                                 : noise::RosenblattMethod::double_integral;
            opt.upsampling = sim_up;
            const auto ens = noise::gen_ensemble(noise_kind(sim_kind, sim_h), sim_n, sim_t, sim_paths, sim_seed,
                                                 workers, opt);
            seed_used = sim_seed;
            Outcome o;
            std::ostringstream os;
            noise::write_csv(os, ens);
            o.csv = os.str();
            o.has_csv = true;
            const auto last = noise::values_at(ens, sim_t);
            const auto st = harness::summary_stats(last);
            o.result["terminal_mean"] = st.mean;
            o.result["terminal_variance"] = st.variance;
            o.result["terminal_skewness"] = st.skewness ? Json(*st.skewness) : Json(nullptr);
            return o;
        };
    });

    // ergodic ------------------------------------------------------------------------------
    double e_b1 = 1, e_b2 = 1, e_q = 1, e_r = 1, e_h = 0.75, e_T = 200, e_dt = 1.0 / 128;
    bool e_mc = false;
    std::size_t e_paths = 200, e_up = 64;
    std::uint64_t e_seed = 1;
    std::string e_noise = "rosenblatt";
    auto* erg = app.add_subcommand("ergodic", "Optimal stationary gain and ergodic cost");
    erg->add_option("--b1", e_b1);
    erg->add_option("--b2", e_b2);
    erg->add_option("--q", e_q);
    erg->add_option("--r", e_r);
    erg->add_option("--h", e_h);
    erg->add_flag("--mc", e_mc, "Also estimate the cost by Monte Carlo");
    erg->add_option("--noise", e_noise)->check(CLI::IsMember({"brownian", "fbm", "rosenblatt"}));
    erg->add_option("--T", e_T);
    erg->add_option("--dt", e_dt);
    erg->add_option("--paths", e_paths);
    erg->add_option("--upsampling", e_up);
    erg->add_option("--seed", e_seed);
    erg->callback([&] {
        chosen = erg;
        action = [&] {
            const auto sol = control::optimal_gain(e_b1, e_b2, e_q, e_r, numerics::HurstParam(e_h));
            Outcome o;
            o.result["gain"] = sol.gain;
            o.result["cost"] = sol.cost;
            o.result["cost_optimum_form"] = control::ergodic_cost_at_optimum(sol.gain, e_b1, e_b2, e_r, e_h);
            o.result["riccati_p"] = sol.riccati_p;
            o.result["closed_loop"] = sol.closed_loop;
            if (e_mc) {
                sde::LinearDynamics dyn;
                dyn.b1 = e_b1;
                dyn.b2 = e_b2;
                harness::NoiseConfig nc{noise_kind(e_noise, e_h), e_up};
                seed_used = e_seed;
                o.result["monte_carlo"] = estimate(
                    harness::estimate_ergodic_cost(dyn, sol.gain, e_q, e_r, nc, e_T, e_dt, e_paths, e_seed, workers));
            }
            return o;
        };
    });

    // suboptimality ------------------------------------------------------------------------
    double s_h = 0.75, s_b1 = 1, s_b2 = 1, s_q = 1, s_r = 1;
    std::string s_grid = "0.5:0.95:0.05";
    auto* sub = app.add_subcommand("suboptimality", "Cost gap of gains designed for a wrong Hurst index");
    sub->add_option("--h", s_h, "True Hurst index");
    sub->add_option("--h-grid", s_grid, "Assumed indices lo:hi:step");
    sub->add_option("--b1", s_b1);
    sub->add_option("--b2", s_b2);
    sub->add_option("--q", s_q);
    sub->add_option("--r", s_r);
    add_csv(sub);
    sub->callback([&] {
        chosen = sub;
        action = [&] {
            Outcome o;
            std::ostringstream os;
            os << "h_assumed,gain,true_cost,gap\n";
            Json rows = Json::array();
            double best = INFINITY, best_h = 0;
            for (double ha : parse_grid(s_grid)) {
                const auto res = control::surrogate_gain(numerics::HurstParam(s_h), ha, s_b1, s_b2, s_q, s_r);
                os << io::fmt(ha) << ',' << io::fmt(res.gain) << ',' << io::fmt(res.true_cost) << ','
                   << io::fmt(res.gap) << "\n";
                rows.push_back(Json{{"h_assumed", ha}, {"gain", res.gain}, {"true_cost", res.true_cost}, {"gap", res.gap}});
                if (res.gap < best) best = res.gap, best_h = ha;
            }
            o.csv = os.str();
            o.has_csv = true;
            o.result["rows"] = rows;
            o.result["argmin_h_assumed"] = best_h;
            return o;
        };
    });

    // variance-aware -----------------------------------------------------------------------
    double v_b1 = 1, v_b2 = 1, v_bb0 = 1, v_bb1 = -3, v_bb2 = 1, v_q = 1, v_qb = 1, v_r = 1, v_rb = 1, v_h = 0.75;
    auto* va = app.add_subcommand("variance-aware", "Mean-field feedback gains K* and Kbar*");
    va->add_option("--b1", v_b1);
    va->add_option("--b2", v_b2);
    va->add_option("--bbar0", v_bb0);
    va->add_option("--bbar1", v_bb1);
    va->add_option("--bbar2", v_bb2);
    va->add_option("--q", v_q);
    va->add_option("--qbar", v_qb);
    va->add_option("--r", v_r);
    va->add_option("--rbar", v_rb);
    va->add_option("--h", v_h);
    va->callback([&] {
        chosen = va;
        action = [&] {
            const auto s = control::variance_aware_gains(v_b1, v_b2, v_bb0, v_bb1, v_bb2, v_q, v_qb, v_r, v_rb,
                                                         numerics::HurstParam(v_h));
            Outcome o;
            o.result = Json{{"gain_dev", s.gain_dev},         {"gain_mean", s.gain_mean},
                            {"cost", s.cost},                 {"cost_dev", s.cost_dev},
                            {"cost_mean", s.cost_mean},       {"stability_dev", s.stability_dev},
                            {"stability_mean", s.stability_mean}};
            return o;
        };
    });

    // zero-sum -----------------------------------------------------------------------------
    double z_b1 = -1, z_b2 = 1, z_b3 = 1, z_q = 1, z_r = 1, z_s = 2, z_h = 0.75;
    auto* zs = app.add_subcommand("zero-sum", "Saddle-point gains of the zero-sum game");
    zs->add_option("--b1", z_b1);
    zs->add_option("--b2", z_b2);
    zs->add_option("--b3", z_b3);
    zs->add_option("--q", z_q);
    zs->add_option("--r", z_r);
    zs->add_option("--s", z_s);
    zs->add_option("--h", z_h);
    zs->callback([&] {
        chosen = zs;
        action = [&] {
            const games::ZeroSumSpec spec(z_b1, z_b2, z_b3, z_q, z_r, z_s, numerics::HurstParam(z_h));
            const auto sol = games::zero_sum_saddle(spec);
            Outcome o;
            o.result = Json{{"k", sol.k},
                            {"l", sol.l},
                            {"value", sol.value},
                            {"closed_loop", sol.closed_loop},
                            {"root_choice", sol.root_choice},
                            {"discriminant", spec.discriminant()}};
            return o;
        };
    });

    // nash ---------------------------------------------------------------------------------
    std::size_t n_n = 2, n_iter = 100000;
    double n_b1 = -1, n_h = 0.75, n_damp = 0.5, n_tol = 1e-12;
    std::vector<double> n_b2{1.0}, n_q{1.0}, n_r{1.0};
    auto* nash = app.add_subcommand("nash", "Nash fixed point in stationary linear feedback");
    nash->add_option("--n", n_n, "Players");
    nash->add_option("--b1", n_b1);
    nash->add_option("--b2", n_b2)->delimiter(',');
    nash->add_option("--q", n_q)->delimiter(',');
    nash->add_option("--r", n_r)->delimiter(',');
    nash->add_option("--h", n_h);
    nash->add_option("--damping", n_damp);
    nash->add_option("--tol", n_tol);
    nash->add_option("--max-iter", n_iter);
    add_csv(nash);
    nash->callback([&] {
        chosen = nash;
        action = [&] {
            const games::NashSpec spec(n_n, n_b1, broadcast(n_b2, n_n, "--b2"), broadcast(n_q, n_n, "--q"),
                                       broadcast(n_r, n_n, "--r"), numerics::HurstParam(n_h));
            const auto sol = games::nash_fixed_point(spec, n_damp, n_tol, n_iter);
            Outcome o;
            std::ostringstream os;
            os << "player,gain,residual\n";
            for (std::size_t i = 0; i < n_n; ++i)
                os << i << ',' << io::fmt(sol.gains[i]) << ',' << io::fmt(sol.residuals[i]) << "\n";
            o.csv = os.str();
            o.has_csv = true;
            o.result = Json{{"gains", array(sol.gains)},       {"residuals", array(sol.residuals)},
                            {"costs", array(sol.costs)},       {"closed_loop", sol.closed_loop},
                            {"iterations", sol.iterations}};
            return o;
        };
    });

    // mftg ---------------------------------------------------------------------------------
    std::size_t m_n = 2, m_steps = 400, m_iter = 200;
    double m_T = 1, m_b1 = -1, m_b1bar = 0, m_h = 0.75, m_varx0 = 0.1, m_xbar0 = 1, m_tol = 1e-10;
    std::optional<double> m_v2init, m_c3;
    std::string m_policy = "calibrated";
    std::vector<double> m_b2{1}, m_b2bar{0}, m_q{1}, m_qbar{1}, m_r{1}, m_rbar{1}, m_qT{1}, m_qbarT{1}, m_kbar{1},
        m_w{1};
    bool m_coop = false;
    auto* mf = app.add_subcommand("mftg", "Mean-field-type game equilibrium (constant coefficients)");
    mf->add_option("--n", m_n, "Players");
    mf->add_option("--T", m_T);
    mf->add_option("--steps", m_steps);
    mf->add_option("--b1", m_b1);
    mf->add_option("--b1bar", m_b1bar);
    mf->add_option("--b2", m_b2)->delimiter(',');
    mf->add_option("--b2bar", m_b2bar)->delimiter(',');
    mf->add_option("--q", m_q)->delimiter(',');
    mf->add_option("--qbar", m_qbar)->delimiter(',');
    mf->add_option("--r", m_r)->delimiter(',');
    mf->add_option("--rbar", m_rbar)->delimiter(',');
    mf->add_option("--qT", m_qT)->delimiter(',');
    mf->add_option("--qbarT", m_qbarT)->delimiter(',');
    mf->add_option("--kbar", m_kbar)->delimiter(',');
    mf->add_option("--var-x0", m_varx0);
    mf->add_option("--xbar0", m_xbar0);
    mf->add_option("--v2-init", m_v2init);
    mf->add_option("--c3", m_c3, "Explicit kernel constant");
    mf->add_option("--c3-policy", m_policy)->check(CLI::IsMember({"calibrated", "raw"}));
    mf->add_option("--h", m_h);
    mf->add_option("--tol", m_tol);
    mf->add_option("--max-iter", m_iter);
    mf->add_flag("--cooperative", m_coop, "Solve the weighted cooperative optimum instead");
    mf->add_option("--weights", m_w)->delimiter(',');
    add_csv(mf);
    mf->callback([&] {
        chosen = mf;
        action = [&] {
            mftg::MftgSpec spec;
            spec.n_players = m_n;
            spec.grid = {m_T, m_steps};
            spec.b1 = mftg::constant(m_b1);
            spec.b1bar = mftg::constant(m_b1bar);
            auto fns = [&](const std::vector<double>& v, const char* what) {
                std::vector<mftg::TimeFn> out;
                for (double x : broadcast(v, m_n, what)) out.push_back(mftg::constant(x));
                return out;
            };
            spec.b2 = fns(m_b2, "--b2");
            spec.b2bar = fns(m_b2bar, "--b2bar");
            spec.q = fns(m_q, "--q");
            spec.qbar = fns(m_qbar, "--qbar");
            spec.r = fns(m_r, "--r");
            spec.rbar = fns(m_rbar, "--rbar");
            spec.qT = broadcast(m_qT, m_n, "--qT");
            spec.qbarT = broadcast(m_qbarT, m_n, "--qbarT");
            for (double k : broadcast(m_kbar, m_n, "--kbar")) {
                if (k != std::floor(k) || k < 1) throw ConfigError("--kbar values must be positive integers");
                spec.kbar.push_back(static_cast<int>(k));
            }
            spec.var_x0 = m_varx0;
            spec.xbar0 = m_xbar0;
            spec.v2_init = m_v2init;
            spec.c3 = m_c3;
            spec.c3_policy = m_policy == "raw" ? mftg::KernelConstant::raw_c_tilde_h : mftg::KernelConstant::calibrated;
            spec.h = numerics::HurstParam(m_h);
            const auto sol = m_coop ? mftg::cooperative_optimum(spec, broadcast(m_w, m_n, "--weights"), m_tol, m_iter)
                                    : mftg::mftg_equilibrium(spec, m_tol, m_iter);
            Outcome o;
            std::ostringstream os;
            mftg::write_csv(os, sol);
            o.csv = os.str();
            o.has_csv = true;
            Json players = Json::array();
            for (std::size_t i = 0; i < sol.lambda.size(); ++i) {
                players.push_back(Json{{"cost", sol.cost[i]},
                                       {"lambda0", sol.lambda[i].front()},
                                       {"lambda_bar0", sol.lambda_bar[i].front()},
                                       {"gamma0", sol.gamma[i].front()},
                                       {"eta0", sol.eta[i].front()},
                                       {"eta_bar0", sol.eta_bar[i].front()}});
            }
            o.result["players"] = players;
            o.result["kernel_constant"] = spec.kernel_constant();
            o.result["o_T"] = sol.o.back();
            o.result["v2_T"] = sol.v2.back();
            o.result["iterations"] = sol.iterations;
            o.result["residual"] = sol.residual;
            return o;
        };
    });

    // cournot ------------------------------------------------------------------------------
    std::size_t c_n = 2, c_paths = 200, c_up = 64;
    double c_a = 2, c_D = 8, c_eps = 1, c_h = 0.75, c_p0 = 0, c_T = 50, c_dt = 1.0 / 16;
    std::vector<double> c_c{1}, c_r{1}, c_rbar{1};
    bool c_pos = false;
    std::uint64_t c_seed = 1;
    auto* cn = app.add_subcommand("cournot", "Renewable-energy Cournot market equilibrium");
    cn->add_option("--n", c_n, "Producers");
    cn->add_option("--a", c_a, "Price-dynamics intercept");
    cn->add_option("--demand", c_D);
    cn->add_option("--c", c_c)->delimiter(',');
    cn->add_option("--r", c_r)->delimiter(',');
    cn->add_option("--rbar", c_rbar)->delimiter(',');
    cn->add_option("--epsilon", c_eps);
    cn->add_option("--h", c_h);
    cn->add_option("--p0", c_p0);
    cn->add_flag("--price-of-simplicity", c_pos, "Compare against the multi-population MFG baseline");
    cn->add_option("--paths", c_paths, "Simulated markets for the baseline");
    cn->add_option("--T", c_T);
    cn->add_option("--dt", c_dt);
    cn->add_option("--upsampling", c_up);
    cn->add_option("--seed", c_seed);
    add_csv(cn);
    cn->callback([&] {
        chosen = cn;
        action = [&] {
            cournot::CournotSpec spec;
            spec.n_producers = c_n;
            spec.a_intercept = c_a;
            spec.demand = c_D;
            spec.c = broadcast(c_c, c_n, "--c");
            spec.r = broadcast(c_r, c_n, "--r");
            spec.rbar = broadcast(c_rbar, c_n, "--rbar");
            spec.epsilon = c_eps;
            spec.h = numerics::HurstParam(c_h);
            spec.p0 = c_p0;
            const auto eq = cournot::full_equilibrium(spec);
            Outcome o;
            std::ostringstream os;
            cournot::write_csv(os, eq);
            o.csv = os.str();
            o.has_csv = true;
            o.result = Json{{"p_bar_star", eq.p_bar_star},       {"eta", array(eq.eta)},
                            {"eta_bar", array(eq.eta_bar)},      {"rho", array(eq.rho)},
                            {"payoffs", array(eq.payoffs)},      {"payoffs_dev", array(eq.payoffs_dev)},
                            {"payoffs_mean", array(eq.payoffs_mean)}, {"stability_dev", eq.stability_dev},
                            {"stability_mean", eq.stability_mean}, {"foc_residuals", array(eq.foc_residuals)}};
            if (c_pos) {
                seed_used = c_seed;
                const auto prices = cournot::simulate_prices(spec, eq, c_T, c_dt, c_paths, c_seed, c_up, workers);
                const auto base = cournot::mfg_baseline(spec, prices);
                o.result["baseline"] = Json{{"p_mean", base.p_mean},
                                            {"p_var", base.p_var},
                                            {"slope", array(base.slope)},
                                            {"intercept", array(base.intercept)},
                                            {"payoffs_mfg", array(base.payoffs_mfg)},
                                            {"payoffs_mftg", array(base.payoffs_mftg)},
                                            {"gaps", array(base.gaps)},
                                            {"price_of_simplicity", array(base.price_of_simplicity)},
                                            {"independent_of_rbar", base.independent_of_rbar}};
            }
            return o;
        };
    });

    // diffusion ----------------------------------------------------------------------------
    std::string d_mode = "bridge";
    double d_theta = 1, d_T = 1, d_mT = 0, d_sT = 1, d_x0 = 0, d_h = 0.75, d_t = 0.5, d_m = 0, d_sigma = 1;
    std::size_t d_paths = 10000, d_steps = 1000, d_up = 64;
    std::uint64_t d_seed = 1;
    auto* df = app.add_subcommand("diffusion", "Forward/reverse generative diffusion checks");
    df->add_option("--mode", d_mode)
        ->check(CLI::IsMember({"bridge", "ou-forward", "ou-reverse", "frac-forward", "frac-reverse", "super",
                               "chi-square"}));
    df->add_option("--theta", d_theta);
    df->add_option("--T", d_T);
    df->add_option("--m-T", d_mT);
    df->add_option("--sigma-T", d_sT);
    df->add_option("--x0", d_x0);
    df->add_option("--h", d_h);
    df->add_option("--t", d_t, "Evaluation time (frac-forward, frac-reverse, super, chi-square)");
    df->add_option("--m", d_m, "Long-run level (super, chi-square)");
    df->add_option("--sigma", d_sigma, "Noise scale (super, chi-square)");
    df->add_option("--paths", d_paths);
    df->add_option("--steps", d_steps);
    df->add_option("--upsampling", d_up);
    df->add_option("--seed", d_seed);
    add_csv(df);
    df->callback([&] {
        chosen = df;
        action = [&] {
            diffusion::DiffusionSpec spec;
            spec.theta = diffusion::Rate::constant(d_theta);
            spec.T = d_T;
            spec.m_T = d_mT;
            spec.sigma_T = d_sT;
            spec.x0 = d_x0;
            Outcome o;
            auto samples_csv = [&](const std::vector<double>& xs) {
                std::ostringstream os;
                os << "i,x\n";
                for (std::size_t i = 0; i < xs.size(); ++i) os << i << ',' << io::fmt(xs[i]) << "\n";
                o.csv = os.str();
                o.has_csv = true;
            };
            if (d_mode == "bridge") {
                const auto bp = diffusion::ou_bridge_params(spec);
                o.result = Json{{"m", bp.m}, {"sigma", bp.sigma}};
            } else if (d_mode == "ou-forward") {
                seed_used = d_seed;
                const auto tc = diffusion::ou_forward_terminal_check(spec, d_paths, d_seed);
                o.result = Json{{"terminal_mean", estimate(tc.mean)}, {"terminal_variance", estimate(tc.variance)}};
            } else if (d_mode == "ou-reverse") {
                seed_used = d_seed;
                std::mt19937_64 rng(noise::derive_seed(d_seed, ~0ULL));
                std::normal_distribution<double> nd(d_mT, d_sT);
                std::vector<double> mask(d_paths);
                for (auto& m : mask) m = nd(rng);
                const auto res = diffusion::ou_reverse_sample(spec, mask, d_steps, d_seed);
                o.result = Json{{"mean", estimate(harness::mean_estimate(res.samples, d_seed))},
                                {"variance", estimate(harness::variance_estimate(res.samples, d_seed))},
                                {"clamp_time", res.clamp_time},
                                {"dt", res.dt}};
                samples_csv(res.samples);
            } else if (d_mode == "frac-forward") {
                spec.h = numerics::HurstParam(d_h);
                const auto mv = diffusion::frac_forward_mv(d_t, spec);
                o.result = Json{{"m", mv.m}, {"v2", mv.v2}};
                if (d_t > 0.0) o.result["v2_quadrature"] = diffusion::frac_forward_v2_quadrature(d_t, spec);
            } else if (d_mode == "frac-reverse") {
                spec.h = numerics::HurstParam(d_h);
                seed_used = d_seed;
                const auto xs = diffusion::frac_reverse_sample(spec, d_paths, d_steps, d_t, d_seed, workers);
                o.result = Json{{"mean", estimate(harness::mean_estimate(xs, d_seed))},
                                {"target_mean", diffusion::frac_forward_mv(d_t, spec).m}};
                samples_csv(xs);
            } else if (d_mode == "super") {
                seed_used = d_seed;
                const auto rep = diffusion::rosenblatt_superdiffusion_sample(
                    d_theta, d_m, d_sigma, d_x0, d_t, numerics::HurstParam(d_h), d_paths, d_seed, d_steps, d_up, workers);
                o.result = Json{{"variance", estimate(rep.variance)},
                                {"quadrature_variance", rep.quadrature_variance},
                                {"skewness", rep.skewness ? Json(*rep.skewness) : Json(nullptr)}};
                samples_csv(rep.samples);
            } else {
                seed_used = d_seed;
                o.result["wasserstein1"] = diffusion::chi_square_limit_check(d_theta, d_m, d_sigma, d_x0, d_t, d_h,
                                                                             d_paths, d_seed, d_steps, d_up, workers);
            }
            return o;
        };
    });

    // predict ------------------------------------------------------------------------------
    std::string p_mode = "compare", p_history;
    double p_b1 = -1, p_s = 1, p_t = 1, p_h = 0.75, p_y = 0.5, p_x = 0.5, p_grid = 1.0 / 4096;
    std::size_t p_cells = 32, p_paths = 1000, p_up = 256;
    std::uint64_t p_seed = 1;
    auto* pr = app.add_subcommand("predict", "Martingale and linear predictors");
    pr->add_option("--mode", p_mode)->check(CLI::IsMember({"f-exp", "g-exp", "linear", "martingale", "compare"}));
    pr->add_option("--b1", p_b1);
    pr->add_option("--window", p_s, "Observation window s");
    pr->add_option("--horizon", p_t, "Prediction time t");
    pr->add_option("--h", p_h);
    pr->add_option("--y", p_y, "Argument of F_exp");
    pr->add_option("--x", p_x, "Argument of G_exp");
    pr->add_option("--grid", p_grid, "Refinement parameter of G_exp");
    pr->add_option("--history", p_history, "CSV with columns t,x covering [-s, 0]");
    pr->add_option("--cells", p_cells, "History steps for compare");
    pr->add_option("--paths", p_paths);
    pr->add_option("--upsampling", p_up);
    pr->add_option("--seed", p_seed);
    pr->callback([&] {
        chosen = pr;
        action = [&] {
            predict::PredictorSpec spec{p_b1, p_s, p_t, numerics::HurstParam(p_h)};
            Outcome o;
            if (p_mode == "f-exp") {
                o.result["f_exp"] = predict::f_exp(p_y, spec);
            } else if (p_mode == "g-exp") {
                o.result["g_exp"] = predict::g_exp(p_x, spec, p_grid);
                o.result["c_h"] = predict::c_h(spec.h);
            } else if (p_mode == "compare") {
                seed_used = p_seed;
                const auto c = predict::compare_predictors(spec, p_cells, p_paths, p_seed, p_grid, p_up, workers);
                o.result = Json{{"mse_linear", estimate(c.mse_linear)},
                                {"mse_zero", estimate(c.mse_zero)},
                                {"mse_martingale", estimate(c.mse_martingale)}};
            } else {
                if (p_history.empty()) throw ConfigError("--history is required for this mode");
                std::ifstream f(p_history);
                if (!f) throw ConfigError("cannot read " + p_history);
                std::string line;
                std::getline(f, line);
                std::vector<double> ts, xs;
                while (std::getline(f, line)) {
                    if (line.empty()) continue;
                    const auto comma = line.find(',');
                    if (comma == std::string::npos) throw ConfigError("history rows need two columns");
                    ts.push_back(std::stod(line.substr(0, comma)));
                    xs.push_back(std::stod(line.substr(comma + 1)));
                }
                if (ts.size() < 2) throw ConfigError("history needs at least two rows");
                noise::SamplePath hist;
                hist.t0 = ts.front();
                hist.dt = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
                hist.values = xs;
                o.result["prediction"] = p_mode == "linear" ? predict::predict_linear_ou(hist, spec, p_grid)
                                                            : predict::predict_martingale(hist, hist.horizon(), p_t);
            }
            return o;
        };
    });

    // verify -------------------------------------------------------------------------------
    std::vector<int> v_only;
    std::uint64_t v_seed = acceptance::Options{}.seed;
    auto* ver = app.add_subcommand("verify", "Run the acceptance suite");
    ver->add_option("--only", v_only, "Criterion ids")->delimiter(',');
    ver->add_option("--seed", v_seed);
    ver->callback([&] {
        chosen = ver;
        action = [&] {
            seed_used = v_seed;
            acceptance::Options opt{v_seed, workers};
            const auto results = acceptance::run_all(opt, v_only, json ? nullptr : &out);
            Outcome o;
            Json arr = Json::array();
            bool all = true;
            for (const auto& r : results) {
                all = all && r.passed;
                arr.push_back(Json{{"id", r.id},
                                   {"name", r.name},
                                   {"passed", r.passed},
                                   {"detail", r.detail},
                                   {"metrics", r.metrics},
                                   {"seconds", r.seconds}});
            }
            o.result["criteria"] = arr;
            o.result["all_passed"] = all;
            o.exit_code = all ? 0 : 1;
            return o;
        };
    });

    std::vector<const char*> argv{"rosctl"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "rosctl: " << e.what() << "\n";
        return 2;
    }
    if (!action || !chosen) {
        err << "rosctl: no subcommand\n";
        return 2;
    }

    try {
        Outcome o = action();
        Json doc;
        doc["command"] = chosen->get_name();
        Json cfg = Json::object();
        collect(&app, cfg);
        collect(chosen, cfg);
        doc["config"] = cfg;
        doc["seed"] = seed_used ? Json(*seed_used) : Json(nullptr);
        doc["result"] = o.result;
        if (o.has_csv && !csv_path.empty()) {
            write_text(csv_path, o.csv);
            write_text(csv_path + ".json", io::dump(doc));
        }
        if (json) {
            out << io::dump(doc);
        } else if (o.has_csv && csv_path.empty()) {
            out << o.csv;
        } else if (chosen != ver) {
            print_text(out, doc);
        }
        return o.exit_code;
    } catch (const ConvergenceError& e) {
        err << "rosctl: no convergence: " << e.what() << "\n";
        return 3;
    } catch (const BlowUpError& e) {
        err << "rosctl: no convergence: " << e.what() << "\n";
        return 3;
    } catch (const DivergenceError& e) {
        err << "rosctl: no convergence: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        err << "rosctl: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "rosctl: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const InadmissibleError& e) {
        err << "rosctl: inadmissible: " << e.what() << "\n";
        return 2;
    } catch (const EvaluationError& e) {
        err << "rosctl: evaluation error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceLimitError& e) {
        err << "rosctl: resource limit: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "rosctl: internal error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace rosctl::cli
