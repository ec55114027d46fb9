#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "nonlocal/analysis.hpp"
#include "nonlocal/error.hpp"
#include "nonlocal/evolution_solver.hpp"
#include "nonlocal/kernel_catalog.hpp"
#include "nonlocal/nonlinearity.hpp"
#include "nonlocal/scenario_config.hpp"
#include "nonlocal/special_functions.hpp"
#include "nonlocal/spectral_operator.hpp"
#include "nonlocal/time_mesh.hpp"
#include "nonlocal/version.hpp"
#include "nonlocal/volterra_resolvent.hpp"

namespace nonlocal {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_usage = 2 };

/// NONLOCAL_OUT if set, else the fallback.
inline std::string output_directory(const std::string& fallback) {
    const char* env = std::getenv("NONLOCAL_OUT");
    return env && *env ? std::string(env) : fallback;
}

namespace runner_detail {

using json = nlohmann::json;

inline std::string fmt_num(double x, int precision = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    return buf;
}

inline json num(double x) { return std::isfinite(x) ? json(x) : json(fmt_num(x)); }

inline json echo(const ScenarioConfig& c) {
    json j;
    j["kernel"]["family"] = family_name(c.pair.family);
    switch (c.pair.family) {
        case KernelFamily::Fractional: j["kernel"]["alpha"] = c.pair.alpha; break;
        case KernelFamily::DistributedOrder: break;
        case KernelFamily::TemperedFractional:
            j["kernel"]["alpha"] = c.pair.alpha;
            j["kernel"]["gamma"] = c.pair.mu_temper;
            break;
        case KernelFamily::TwoTerm:
            j["kernel"]["alpha"] = c.pair.alpha;
            j["kernel"]["beta"] = c.pair.beta;
            j["kernel"]["mu"] = c.pair.mu_temper;
            break;
    }
    j["operator"]["type"] = c.operator_type;
    j["operator"]["modes"] = c.modes;
    if (c.operator_type == "diagonal") {
        j["operator"]["eigenvalues"] = c.eigenvalues;
    } else {
        j["operator"]["theta"] = c.theta;
        j["operator"]["gamma_pow"] = c.gamma_pow;
    }
    j["nonlinearity"]["type"] = c.nonlinearity_type;
    if (c.nonlinearity_type == "global_lipschitz") {
        j["nonlinearity"]["kappa_const"] = c.kappa_const;
        j["nonlinearity"]["offset"] = c.offset;
    } else if (c.nonlinearity_type == "energy") {
        j["nonlinearity"]["a"] = c.energy.a;
        j["nonlinearity"]["b"] = c.energy.b;
        j["nonlinearity"]["nu"] = c.energy.nu;
        j["nonlinearity"]["h_sup"] = c.energy.h_sup;
        j["nonlinearity"]["grid_points"] = c.grid_points;
    }
    j["initial_data"]["coefficients"] = c.u0;
    j["time"]["T"] = c.T;
    j["time"]["steps"] = c.steps;
    j["time"]["grading"] = c.grading.is_uniform() ? "uniform" : "graded";
    if (!c.grading.is_uniform()) j["time"]["rho"] = c.grading.rho;
    j["solver"]["picard_tol"] = c.solver.picard_tol;
    j["solver"]["picard_max_iters"] = c.solver.picard_max_iters;
    if (c.solver.near_cells == ResolventContext::auto_near_cells)
        j["solver"]["near_cells"] = "auto";
    else
        j["solver"]["near_cells"] = c.solver.near_cells;
    j["solver"]["mode_parallelism"] = c.solver.mode_parallelism;
    auto& a = j["analysis"];
    a["envelope"] = c.envelope;
    a["theta_margin"] = c.theta_margin ? json(*c.theta_margin) : json("default");
    a["envelope_tol"] = c.envelope_tol;
    a["decay_ratio_max"] = c.decay_ratio_max ? json(*c.decay_ratio_max) : json(nullptr);
    a["residual"] = c.residual;
    a["residual_tol"] = c.residual_tol;
    a["holder"] = c.holder;
    a["holder_delta"] = c.holder_delta;
    a["holder_min"] = c.holder_min;
    a["oracle"] = c.oracle == Tristate::On ? "on" : c.oracle == Tristate::Off ? "off" : "auto";
    a["oracle_tol"] = c.oracle_tol;
    a["oracle_t_min"] = c.oracle_t_min;
    a["seed"] = c.seed;
    a["eta"] = c.eta ? json(*c.eta) : json("default");
    a["lipschitz_samples"] = c.lipschitz_samples;
    j["output"]["directory"] = c.output_directory;
    j["output"]["precision"] = c.precision;
    return j;
}

struct CheckLog {
    json records = json::array();
    bool all_pass = true;

    void add(const std::string& name, bool pass, double value, double tol, json extra = json::object()) {
        extra["name"] = name;
        extra["pass"] = pass;
        extra["value"] = num(value);
        extra["tolerance"] = num(tol);
        records.push_back(std::move(extra));
        all_pass = all_pass && pass;
    }
};

inline void write_manifest(const std::string& dir, const json& manifest, std::ostream& err) {
    try {
        std::filesystem::create_directories(dir);
        std::ofstream out(std::filesystem::path(dir) / "manifest.json");
        out << manifest.dump(2) << "\n";
        if (!out) err << "warning: could not write manifest.json in " << dir << "\n";
    } catch (const std::exception& e) {
        err << "warning: could not write manifest: " << e.what() << "\n";
    }
}

inline void write_relaxation_pair(const RelaxationTable& s, const RelaxationTable& r, const std::string& path, int precision) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    out << "t,s,r\n";
    const TimeMesh& mesh = s.mesh();
    for (std::size_t m = 0; m < mesh.size(); ++m) {
        out << fmt_num(mesh[m], precision) << ',' << fmt_num(s.values[m], precision) << ',';
        if (m > 0) out << fmt_num(r.values[m], precision);
        out << "\n";
    }
}

// Largest ||f(v) - f(w)|| / (kappa(rho) ||v - w||) over random pairs in the ball of radius rho.
inline double sampled_lipschitz_ratio(const Nonlinearity& f, std::size_t dim, double rho, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> G(0.0, 1.0);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto draw = [&] {
        StateVector v(dim);
        for (std::size_t n = 0; n < dim; ++n) v[n] = G(rng);
        double scale = rho * U(rng) / std::max(norm(v), 1e-300);
        for (std::size_t n = 0; n < dim; ++n) v[n] *= scale;
        return v;
    };
    const double kappa = f.kappa(rho);
    double worst = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        StateVector v = draw(), w = draw();
        double d = distance(v, w);
        if (d == 0.0) continue;
        double lhs = distance(f(v), f(w));
        if (kappa == 0.0) {
            if (lhs > 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        worst = std::max(worst, lhs / (kappa * d));
    }
    return worst;
}

}  // namespace runner_detail

/// Runs one scenario file. Writes CSV artifacts and manifest.json; returns 0, 1 (solver or check
/// failure) or 2 (bad configuration).
inline int run_scenario(const std::string& config_path, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    using runner_detail::json;
    using runner_detail::num;
    json manifest;
    manifest["library"] = {{"name", library_name}, {"version", library_version}};
    manifest["command"] = "run";
    manifest["config_path"] = config_path;

    std::string dir = output_directory("out");
    ScenarioConfig cfg;
    try {
        cfg = parse_scenario(config_path);
    } catch (const ConfigError& e) {
        std::string where = config_path + (e.line ? ":" + std::to_string(e.line) : std::string());
        err << "config error: " << where << ": " << e.what() << "\n";
        manifest["status"] = "config_error";
        manifest["exit_code"] = int(exit_usage);
        manifest["failure_reason"] = where + ": " + e.what();
        runner_detail::write_manifest(dir, manifest, err);
        return exit_usage;
    }
    dir = output_directory(cfg.output_directory);
    manifest["config"] = runner_detail::echo(cfg);
    manifest["seed"] = cfg.seed;
    manifest["output_directory"] = dir;

    runner_detail::CheckLog checks;
    json diag;
    json outputs = json::array();
    int code = exit_ok;
    std::string status = "ok", reason;

    try {
        std::filesystem::create_directories(dir);
        const std::filesystem::path base(dir);
        const int prec = cfg.precision;

        EvolutionProblem prob;
        prob.op = build_operator(cfg);
        prob.pair = cfg.pair;
        prob.u0 = StateVector(cfg.u0);
        prob.mesh = make_mesh(cfg.T, cfg.steps, cfg.grading);
        prob.f = build_nonlinearity(cfg, prob.op);
        const double lambda1 = prob.op.lambda1();
        const double u0_norm = norm(prob.u0);
        const bool linear = !prob.f.has_value();

        Trajectory traj = solve_semilinear(prob, cfg.solver);
        write_trajectory_csv(traj, prob.op, (base / "trajectory.csv").string(), prec);
        outputs.push_back("trajectory.csv");
        const std::vector<double> norms = traj.norms();

        diag["lambda1"] = lambda1;
        diag["u0_norm"] = u0_norm;
        diag["max_picard_iterations"] = traj.max_picard_iterations();
        diag["terminal_norm"] = norms.back();
        diag["terminal_ratio"] = u0_norm > 0.0 ? num(norms.back() / u0_norm) : json(nullptr);

        auto ctx = make_context(prob.pair, prob.mesh, cfg.solver.near_cells);
        diag["near_cells"] = ctx->near_cells();
        {
            RelaxationTable s1 = solve_s(ctx, lambda1), r1 = solve_r(ctx, lambda1);
            runner_detail::write_relaxation_pair(s1, r1, (base / "relaxation_mode1.csv").string(), prec);
            outputs.push_back("relaxation_mode1.csv");
        }

        checks.add("picard_convergence", traj.max_picard_iterations() <= cfg.solver.picard_max_iters,
                   traj.max_picard_iterations(), cfg.solver.picard_max_iters);

        if (cfg.residual) {
            ResidualReport rr = residual_check(traj, prob, cfg.residual_tol);
            checks.add("residual", rr.pass, rr.max_residual, cfg.residual_tol,
                       {{"worst_node", rr.worst_node}, {"worst_time", prob.mesh[rr.worst_node]}, {"worst_mode", rr.worst_mode + 1}, {"scale", rr.scale}});
        }

        const double rate = linear ? 0.0 : prob.f->small_data_rate;
        const double theta = cfg.theta_margin.value_or(default_theta_margin(lambda1, rate));
        const double mu_eff = lambda1 - rate - theta;
        diag["small_data_rate"] = rate;
        diag["theta_margin"] = theta;
        diag["effective_rate"] = mu_eff;
        if (cfg.nonlinearity_type == "energy") {
            const double eta = cfg.eta.value_or(default_eta(theta, cfg.energy.b, cfg.energy.nu, cfg.energy.h_sup));
            const double delta = stability_radius(rate, lambda1, eta);
            diag["eta"] = eta;
            diag["stability_radius"] = delta;
            diag["u0_within_radius"] = u0_norm <= delta;
        }

        if (cfg.envelope) {
            if (!(mu_eff > 0.0)) {
                checks.add("envelope", false, mu_eff, 0.0, {{"reason", "effective rate lambda1 - rate - theta is not positive"}});
            } else {
                const double beta = linear ? 0.0 : prob.f->f_zero_norm;
                RelaxationTable s = solve_s(ctx, mu_eff);
                std::vector<double> env(prob.mesh.size());
                for (std::size_t m = 0; m < env.size(); ++m) env[m] = s.values[m] * u0_norm + beta / mu_eff * (1.0 - s.values[m]);
                DecayReport d = check_decay(norms, env, cfg.envelope_tol);
                checks.add("envelope", d.pass, d.max_ratio, 1.0 + cfg.envelope_tol,
                           {{"violations", d.violations}, {"max_excess", num(d.max_excess)}, {"rate", mu_eff}, {"forcing", beta}});
                std::ofstream ecsv(base / "envelope.csv");
                ecsv << "t,norm,envelope\n";
                for (std::size_t m = 0; m < env.size(); ++m)
                    ecsv << runner_detail::fmt_num(prob.mesh[m], prec) << ',' << runner_detail::fmt_num(norms[m], prec) << ','
                         << runner_detail::fmt_num(env[m], prec) << "\n";
                outputs.push_back("envelope.csv");
            }
        }

        if (cfg.decay_ratio_max) {
            double ratio = u0_norm > 0.0 ? norms.back() / u0_norm : 0.0;
            checks.add("terminal_decay", ratio < *cfg.decay_ratio_max, ratio, *cfg.decay_ratio_max);
        }

        const bool oracle_applicable = cfg.pair.family == KernelFamily::Fractional && linear;
        if (cfg.oracle == Tristate::On && !oracle_applicable)
            throw ConfigError("[analysis] oracle: the closed form needs the fractional family with a zero nonlinearity");
        if (cfg.oracle != Tristate::Off && oracle_applicable) {
            double worst = 0.0;
            for (std::size_t m = 1; m < prob.mesh.size(); ++m) {
                const double t = prob.mesh[m];
                if (t < cfg.oracle_t_min) continue;
                for (std::size_t n = 0; n < prob.op.modes(); ++n) {
                    if (prob.u0[n] == 0.0) continue;
                    double exact = prob.u0[n] * ml_value(cfg.pair.alpha, 1.0, -prob.op.eigenvalues[n] * std::pow(t, cfg.pair.alpha));
                    worst = std::max(worst, std::abs(traj.states[m][n] - exact) / std::abs(exact));
                }
            }
            checks.add("oracle", worst <= cfg.oracle_tol, worst, cfg.oracle_tol, {{"t_min", cfg.oracle_t_min}});
        }

        if (cfg.holder) {
            HolderEstimate h = estimate_holder_exponent(traj, cfg.holder_delta);
            checks.add("holder", h.gamma_est >= cfg.holder_min, h.gamma_est, cfg.holder_min,
                       {{"delta", cfg.holder_delta}, {"c_est", num(h.c_est)}});
        }

        if (!linear && cfg.lipschitz_samples > 0) {
            const double rho = std::max(u0_norm, *std::max_element(norms.begin(), norms.end()));
            double ratio = runner_detail::sampled_lipschitz_ratio(*prob.f, prob.op.modes(), rho, cfg.lipschitz_samples, cfg.seed);
            checks.add("lipschitz_sample", ratio <= 1.0 + 1e-9, ratio, 1.0, {{"rho", rho}, {"kappa", prob.f->kappa(rho)}});
        }

        if (!checks.all_pass) {
            code = exit_failure;
            status = "check_failed";
            for (const auto& r : checks.records)
                if (!r["pass"].get<bool>()) reason += (reason.empty() ? "" : ", ") + r["name"].get<std::string>();
            reason = "failed checks: " + reason;
        }
    } catch (const SolverError& e) {
        code = exit_failure;
        status = "solver_failed";
        reason = std::string(e.what()) + " at node " + std::to_string(e.node) + " (t = " + runner_detail::fmt_num(e.time, 6) +
                 ", residual = " + runner_detail::fmt_num(e.residual, 6) + ")";
        if (e.mode != SolverError::npos) reason += " in mode " + std::to_string(e.mode + 1);
    } catch (const ConfigError& e) {
        code = exit_usage;
        status = "config_error";
        reason = e.what();
    } catch (const UsageError& e) {
        code = exit_usage;
        status = "config_error";
        reason = e.what();
    } catch (const DomainError& e) {
        code = exit_usage;
        status = "config_error";
        reason = e.what();
    } catch (const Unsupported& e) {
        code = exit_usage;
        status = "config_error";
        reason = e.what();
    } catch (const std::exception& e) {
        code = exit_failure;
        status = "error";
        reason = e.what();
    }

    manifest["status"] = status;
    manifest["exit_code"] = code;
    manifest["failure_reason"] = reason.empty() ? json(nullptr) : json(reason);
    manifest["checks"] = checks.records;
    manifest["diagnostics"] = diag;
    manifest["outputs"] = outputs;
    runner_detail::write_manifest(dir, manifest, err);

    for (const auto& r : checks.records) {
        char line[160];
        std::snprintf(line, sizeof line, "%-20s %-4s  value %-14s tol %s\n", r["name"].get<std::string>().c_str(),
                      r["pass"].get<bool>() ? "ok" : "FAIL", r["value"].dump().c_str(), r["tolerance"].dump().c_str());
        out << line;
    }
    if (code == exit_ok)
        out << "run ok, artifacts in " << dir << "\n";
    else
        err << status << ": " << reason << "\n";
    return code;
}

/// Parameter presets used by verify and tables.
inline KernelPair preset_pair(KernelFamily f) {
    switch (f) {
        case KernelFamily::Fractional: return make_fractional(0.5);
        case KernelFamily::DistributedOrder: return make_distributed_order();
        case KernelFamily::TemperedFractional: return make_tempered(0.5, 1.0);
        case KernelFamily::TwoTerm: return make_two_term(0.4, 0.7, 1.0);
    }
    throw Unsupported("preset_pair: unknown family");
}

struct VerifyRow {
    std::string name;
    double value;
    double tol;
    bool pass;
};

/// Property suites for one kernel family on [0,1] with 256 (quick) or 1024 (full) uniform steps.
inline std::vector<VerifyRow> verify_suites(const KernelPair& pair, std::size_t steps, std::uint64_t seed = 42) {
    std::vector<VerifyRow> rows;
    auto add = [&](std::string name, double value, double tol, bool pass) { rows.push_back({std::move(name), value, tol, pass}); };
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const TimeMesh mesh = make_mesh(1.0, steps);

    PcIdentityReport pc = verify_pc_identity(pair, mesh, 1e-8);
    add("pc_identity", pc.max_residual, 1e-8, pc.pass);

    auto ctx = make_context(pair, mesh);
    const std::vector<double> mus{1.0, pi2, 100.0};
    double sr_int = 0.0, sr_k = 0.0, mono_t = -1.0, mono_mu = -1.0, r_min = 1.0, s_out = 0.0, bound = -1.0;
    std::vector<double> prev;
    for (double mu : mus) {
        RelaxationTable s = solve_s(ctx, mu), r = solve_r(ctx, mu);
        SrReport sr = verify_sr_relations(s, r, pair, 5e-3);
        sr_int = std::max(sr_int, sr.res_integral);
        sr_k = std::max(sr_k, sr.res_kconv);
        for (std::size_t m = 1; m < mesh.size(); ++m) {
            mono_t = std::max(mono_t, s.values[m] - s.values[m - 1]);
            r_min = std::min(r_min, r.values[m]);
        }
        for (double v : s.values) s_out = std::max({s_out, v - 1.0, -v});
        bound = std::max(bound, s_bound_excess(s));
        if (!prev.empty())
            for (std::size_t m = 0; m < mesh.size(); ++m) mono_mu = std::max(mono_mu, s.values[m] - prev[m]);
        prev = s.values;
    }
    add("sr_integral", sr_int, 5e-3, sr_int <= 5e-3);
    add("sr_kconv", sr_k, 5e-3, sr_k <= 5e-3);
    add("s_monotone_t", mono_t, 1e-10, mono_t <= 1e-10);
    add("s_monotone_mu", mono_mu, 1e-10, mono_mu <= 1e-10);
    add("s_in_unit_interval", s_out, 1e-10, s_out <= 1e-10);
    add("r_nonnegative", r_min, -1e-10, r_min >= -1e-10);
    add("s_bound", bound, 1e-8, bound <= 1e-8);

    GronwallSuiteReport g = gronwall_random_suite(pair, make_mesh(2.0, 256), 200, seed);
    add("gronwall_200", g.worst_excess, 1e-8, g.pass);

    {
        EvolutionProblem prob{dirichlet_laplacian_1d(1.0, 1.0, 4), pair, StateVector({1.0, 0.5, 0.25, 0.125}), mesh, {}, std::nullopt};
        SolverConfig sc;
        sc.near_cells = ctx->near_cells();
        Trajectory tr = solve_linear(prob, sc);
        DecayReport d = check_decay(tr, decay_envelope(ctx, prob.op.lambda1(), norm(prob.u0)), 1e-6);
        add("linear_decay", d.max_ratio, 1.0 + 1e-6, d.pass);
    }

    DerivativeBoundReport db = check_derivative_bound(pair, mus, mesh);
    add("derivative_bound", db.ratio, 2.0, db.bounded);

    if (pair.family == KernelFamily::Fractional || pair.family == KernelFamily::DistributedOrder) {
        const TimeMesh long_mesh = make_mesh(8.0, steps);
        RelaxationTable s = solve_s(pair, pi2, long_mesh);
        const std::size_t q = steps / 4;
        double s2 = s.values[q], s4 = s.values[2 * q], s8 = s.values[steps];
        add("attractivity", s8 / s2, 1.0, s8 < s4 && s4 < s2);
    }

    if (pair.family == KernelFamily::TwoTerm) {
        std::vector<double> grid(61);
        for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = std::pow(10.0, -3.0 + 6.0 * double(i) / 60.0);
        RegularityReport reg = check_2_regular(pair, grid);
        add("two_regular_c1", reg.c1, 1.0 + 1e-12, reg.c1 <= 1.0 + 1e-12);
        add("two_regular_c2", reg.c2, 3.0 + 1e-12, reg.c2 <= 3.0 + 1e-12);
    }
    return rows;
}

/// verify <family> [--full]: prints one row per invariant; 0 iff all pass, 2 for an unknown family.
inline int run_verify(const std::string& family, bool full, std::ostream& out = std::cout, std::ostream& err = std::cerr,
                      std::uint64_t seed = 42) {
    KernelFamily f;
    try {
        f = parse_family(family);
    } catch (const UsageError& e) {
        err << e.what() << "\n";
        return exit_usage;
    }
    const std::size_t steps = full ? 1024 : 256;
    std::vector<VerifyRow> rows;
    try {
        rows = verify_suites(preset_pair(f), steps, seed);
    } catch (const std::exception& e) {
        err << "verify " << family_name(f) << ": " << e.what() << "\n";
        return exit_failure;
    }
    char line[160];
    std::snprintf(line, sizeof line, "verify %s (%s, %zu steps, seed %llu)\n", family_name(f).c_str(), full ? "full" : "quick", steps,
                  static_cast<unsigned long long>(seed));
    out << line;
    std::snprintf(line, sizeof line, "%-20s %-15s %-15s %s\n", "invariant", "value", "tolerance", "status");
    out << line;
    bool ok = true;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-20s %-15.8g %-15.8g %s\n", r.name.c_str(), r.value, r.tol, r.pass ? "ok" : "FAIL");
        out << line;
        ok = ok && r.pass;
    }
    if (!ok) {
        err << "verify " << family_name(f) << " failed:";
        for (const auto& r : rows)
            if (!r.pass) err << " " << r.name;
        err << "\n";
    }
    return ok ? exit_ok : exit_failure;
}

/// tables <family>: writes s and r for one mu to <dir>/tables_s.csv and <dir>/tables_r.csv.
inline int dump_tables(const KernelPair& pair, double mu, std::size_t steps, double T, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
    try {
        if (!(mu > 0.0)) throw DomainError("tables: mu must be positive");
        const std::string dir = output_directory("out");
        std::filesystem::create_directories(dir);
        auto ctx = make_context(pair, make_mesh(T, steps));
        RelaxationTable s = solve_s(ctx, mu), r = solve_r(ctx, mu);
        const auto sp = (std::filesystem::path(dir) / "tables_s.csv").string();
        const auto rp = (std::filesystem::path(dir) / "tables_r.csv").string();
        write_csv(s, sp);
        write_csv(r, rp);
        out << "wrote " << sp << " and " << rp << "\n";
        return exit_ok;
    } catch (const UsageError& e) {
        err << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError& e) {
        err << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return exit_failure;
    }
}

}  // namespace nonlocal
