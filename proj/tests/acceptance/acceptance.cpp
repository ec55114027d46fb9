// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nonlocal/runner.hpp"

using namespace nonlocal;

namespace {

constexpr double pi2 = std::numbers::pi * std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome ml_oracle() {
    const TimeMesh mesh = make_mesh(1.0, 1024);
    double worst_s = 0.0, worst_r = 0.0, slowest = 0.0;
    for (double a : {0.3, 0.5, 0.8}) {
        auto ctx = make_context(make_fractional(a), mesh);
        for (double mu : {1.0, 4.0, pi2}) {
            auto t0 = std::chrono::steady_clock::now();
            RelaxationTable s = solve_s(ctx, mu), r = solve_r(ctx, mu);
            slowest = std::max(slowest, seconds_since(t0));
            for (std::size_t m = 1; m < mesh.size(); ++m) {
                const double t = mesh[m], ta = std::pow(t, a);
                if (t >= 0.01) {
                    double e = ml_value(a, 1.0, -mu * ta);
                    worst_s = std::max(worst_s, std::abs(s[m] - e) / e);
                }
                if (t >= 0.05) {
                    double e = std::pow(t, a - 1.0) * ml_value(a, a, -mu * ta);
                    worst_r = std::max(worst_r, std::abs(r[m] - e) / e);
                }
            }
        }
    }
    return {worst_s <= 1e-3 && worst_r <= 2e-3 && slowest <= 5.0,
            fmt("s rel err %.3g (<= 1e-3), r rel err %.3g (<= 2e-3), slowest case %.2f s", worst_s, worst_r, slowest)};
}

Outcome structural() {
    const TimeMesh mesh = make_mesh(1.0, 1024);
    double sr = 0.0, mono_t = 0.0, mono_mu = 0.0, bound = -1.0;
    for (KernelFamily f : {KernelFamily::Fractional, KernelFamily::DistributedOrder, KernelFamily::TemperedFractional, KernelFamily::TwoTerm}) {
        KernelPair p = preset_pair(f);
        auto ctx = make_context(p, mesh);
        std::vector<double> prev;
        for (double mu : {1.0, pi2, 100.0}) {
            RelaxationTable s = solve_s(ctx, mu), r = solve_r(ctx, mu);
            SrReport rep = verify_sr_relations(s, r, p, 5e-3);
            sr = std::max({sr, rep.res_integral, rep.res_kconv});
            for (std::size_t m = 1; m < mesh.size(); ++m) mono_t = std::max(mono_t, s[m] - s[m - 1]);
            if (!prev.empty())
                for (std::size_t m = 0; m < mesh.size(); ++m) mono_mu = std::max(mono_mu, s[m] - prev[m]);
            prev = s.values;
            bound = std::max(bound, s_bound_excess(s));
        }
    }
    return {sr <= 5e-3 && mono_t <= 1e-10 && mono_mu <= 1e-10 && bound <= 1e-8,
            fmt("s/r residual %.3g (<= 5e-3), monotonicity excess t %.3g mu %.3g (<= 1e-10)", sr, mono_t, mono_mu) +
                fmt(", bound excess %.3g (<= 1e-8)", bound)};
}

Outcome gronwall() {
    const TimeMesh mesh = make_mesh(2.0, 256);
    auto t0 = std::chrono::steady_clock::now();
    double worst = -1.0;
    std::size_t cases = 0;
    for (KernelFamily f : {KernelFamily::Fractional, KernelFamily::DistributedOrder, KernelFamily::TemperedFractional, KernelFamily::TwoTerm}) {
        GronwallSuiteReport rep = gronwall_random_suite(preset_pair(f), mesh, 200, 42);
        worst = std::max(worst, rep.worst_excess);
        cases += rep.cases;
    }
    double secs = seconds_since(t0);
    return {worst <= 1e-8 && secs <= 30.0 && cases == 800,
            fmt("%.0f cases, worst excess %.3g (<= 1e-8), %.2f s", double(cases), worst, secs)};
}

EvolutionProblem heat_problem() {
    EvolutionProblem p;
    p.op = dirichlet_laplacian_1d(1.0, 1.0, 4);
    p.pair = make_fractional(0.5);
    p.u0 = StateVector(std::vector<double>{1.0, 0.5, 0.25, 0.125});
    p.mesh = make_mesh(1.0, 1024);
    return p;
}

Outcome linear_solver(Trajectory& traj) {
    EvolutionProblem p = heat_problem();
    traj = solve_linear(p);
    double worst = 0.0;
    for (std::size_t m = 1; m < p.mesh.size(); ++m) {
        const double t = p.mesh[m];
        if (t < 0.01) continue;
        for (std::size_t n = 0; n < 4; ++n) {
            double e = p.u0[n] * ml_value(0.5, 1.0, -p.op.eigenvalues[n] * std::sqrt(t));
            worst = std::max(worst, std::abs(traj.states[m][n] - e) / std::abs(e));
        }
    }
    return {worst <= 2e-3, fmt("max per-mode rel err %.3g (<= 2e-3)", worst)};
}

Outcome contraction() {
    EvolutionProblem p = heat_problem();
    const double kappa = 0.5 * p.op.lambda1();
    p.f = make_global_lipschitz(kappa, StateVector(std::vector<double>{0.2, 0.0, 0.1, 0.0}));
    EvolutionProblem q = p;
    StateVector eps(std::vector<double>{1e-2, -5e-3, 2e-3, 1e-3});
    for (std::size_t n = 0; n < 4; ++n) q.u0[n] += eps[n];
    Trajectory a = solve_semilinear(p), b = solve_semilinear(q);
    RelaxationTable s = solve_s(make_context(p.pair, p.mesh), p.op.lambda1() - kappa);
    double worst = 0.0;
    for (std::size_t m = 0; m < p.mesh.size(); ++m)
        worst = std::max(worst, distance(a.states[m], b.states[m]) / (s[m] * norm(eps)));
    return {worst <= 1.0 + 1e-2, fmt("max ||u-v|| / (s(t, lambda1-kappa) ||eps||) = %.4f (<= 1.01)", worst)};
}

Outcome stability() {
    const auto dir = std::filesystem::temp_directory_path() / "nonlocal_acceptance" / "ap5_stable";
    std::filesystem::remove_all(dir);
    setenv("NONLOCAL_OUT", dir.c_str(), 1);
    std::ostringstream out, err;
    int code = run_scenario(std::string(NONLOCAL_SOURCE_DIR) + "/scenarios/ap5_stable.cfg", out, err);
    unsetenv("NONLOCAL_OUT");
    std::ifstream in(dir / "manifest.json");
    auto m = nlohmann::json::parse(in);
    double env_ratio = -1.0, terminal = m["diagnostics"].value("terminal_ratio", -1.0);
    for (const auto& c : m["checks"])
        if (c["name"] == "envelope") env_ratio = c["value"].get<double>();
    bool pass = code == exit_ok && env_ratio >= 0.0 && env_ratio <= 1.05 && terminal >= 0.0 && terminal < 0.9;
    return {pass, fmt("exit %.0f, max ||u|| / envelope %.4f (<= 1.05), ||u(T)||/||u0|| %.4f (< 0.9)", code, env_ratio, terminal)};
}

Outcome two_regular() {
    std::vector<double> grid;
    for (int i = 0; i <= 60; ++i) grid.push_back(std::pow(10.0, -3.0 + 0.1 * i));
    RegularityReport rep = check_2_regular(make_two_term(0.4, 0.7, 1.0), grid);
    bool pass = rep.pass && rep.c1 <= 1.0 + 1e-12 && rep.c2 <= 3.0 + 1e-12;
    return {pass, fmt("c1 %.4f (<= 1), c2 %.4f (<= 3)", rep.c1, rep.c2)};
}

Outcome holder(const Trajectory& traj) {
    HolderEstimate h = estimate_holder_exponent(traj, 0.25);
    return {h.gamma_est >= 0.5, fmt("gamma_est %.3f (>= 0.5)", h.gamma_est)};
}

Outcome full_verify() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string failed;
    for (const char* f : {"fractional", "distributed_order", "tempered", "two_term"}) {
        std::ostringstream out, err;
        if (run_verify(f, true, out, err) != exit_ok) {
            ok = false;
            failed += std::string(" ") + f;
        }
    }
    double secs = seconds_since(t0);
    return {ok && secs <= 180.0, fmt("all four families, %.1f s (<= 180 s)", secs) + (failed.empty() ? "" : ", failed:" + failed)};
}

}  // namespace

int main() {
    Trajectory heat;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Mittag-Leffler oracle", ml_oracle},
        {"structural identities", structural},
        {"Gronwall suite", gronwall},
        {"linear solver", [&] { return linear_solver(heat); }},
        {"semilinear contraction", contraction},
        {"small-data stability", stability},
        {"two-term 2-regularity", two_regular},
        {"Hoelder sanity", [&] { return holder(heat); }},
        {"full verify suite", full_verify},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("criterion %zu %-24s %s  %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
