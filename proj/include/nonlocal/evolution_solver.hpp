#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "nonlocal/error.hpp"
#include "nonlocal/kernel_catalog.hpp"
#include "nonlocal/nonlinearity.hpp"
#include "nonlocal/spectral_operator.hpp"
#include "nonlocal/time_mesh.hpp"
#include "nonlocal/volterra_resolvent.hpp"

namespace nonlocal {

struct SolverConfig {
    double picard_tol = 1e-10;
    int picard_max_iters = 50;
    bool mode_parallelism = false;
    std::size_t near_cells = ResolventContext::auto_near_cells;
};

/// Either fixed per-mode forcing samples g[n][m] or a nonlinearity (or neither).
struct EvolutionProblem {
    SpectralOperator op;
    KernelPair pair;
    StateVector u0;
    TimeMesh mesh;
    std::vector<std::vector<double>> forcing;
    std::optional<Nonlinearity> f;
};

struct Trajectory {
    TimeMesh mesh;
    std::vector<StateVector> states;
    std::vector<int> picard_iterations;
    std::vector<double> picard_residuals;

    std::size_t size() const { return states.size(); }
    std::vector<double> norms() const {
        std::vector<double> out(states.size());
        for (std::size_t m = 0; m < states.size(); ++m) out[m] = norm(states[m]);
        return out;
    }
    int max_picard_iterations() const {
        return picard_iterations.empty() ? 0 : *std::max_element(picard_iterations.begin(), picard_iterations.end());
    }
};

/// Runs body(i) for i in [0, n), on hardware threads when parallel is set.
template <class Body>
void parallel_for(std::size_t n, bool parallel, Body&& body) {
    std::size_t workers = parallel ? std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency())) : 1;
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Hybrid s tables for every eigenvalue, sharing the mesh weights.
inline std::vector<RelaxationTable> mode_s_tables(const ContextPtr& ctx, const SpectralOperator& op, bool parallel) {
    ctx->l_weights();
    if (ctx->near_cells() < ctx->mesh().steps()) ctx->l_near();
    std::vector<RelaxationTable> tabs(op.modes());
    parallel_for(op.modes(), parallel, [&](std::size_t n) {
        try {
            tabs[n] = solve_s(ctx, op.eigenvalues[n]);
        } catch (const SolverError& e) {
            throw SolverError(e.what(), e.node, e.time, e.residual, n);
        }
    });
    return tabs;
}

namespace evolution_detail {

inline void check_problem(const EvolutionProblem& prob) {
    if (prob.u0.size() != prob.op.modes()) throw UsageError("evolution: u0 length does not match the operator");
    for (double c : prob.u0.coeffs)
        if (!std::isfinite(c)) throw UsageError("evolution: u0 has non-finite entries");
    if (!prob.forcing.empty()) {
        if (prob.forcing.size() != prob.op.modes()) throw UsageError("evolution: forcing needs one sample row per mode");
        for (const auto& row : prob.forcing)
            if (row.size() != prob.mesh.size()) throw UsageError("evolution: forcing row does not match the mesh");
    }
}

// u_n(t_m) = s_n(t_m) u0_n + v_n(t_m), v_n = (I + lambda_n W)^{-1} W g_n marched node by node.
class Marcher {
public:
    Marcher(const EvolutionProblem& prob, const SolverConfig& cfg)
        : prob_(prob), N_(prob.op.modes()), M_(prob.mesh.steps()) {
        ctx_ = make_context(prob.pair, prob.mesh, cfg.near_cells);
        s_ = mode_s_tables(ctx_, prob.op, cfg.mode_parallelism);
        v_.assign(N_, std::vector<double>(M_ + 1, 0.0));
        y_.assign(N_, std::vector<double>(M_ + 1, 0.0));
    }

    const ContextPtr& context() const { return ctx_; }

    // Value at node m for a trial current forcing g_m (per mode), given frozen history.
    void candidate(std::size_t m, const std::vector<double>& hist, const StateVector& g_m, StateVector& out) const {
        const ProductWeights& W = ctx_->l_weights();
        const double d = W.diag(m);
        for (std::size_t n = 0; n < N_; ++n) {
            const double lam = prob_.op.eigenvalues[n];
            out[n] = s_[n].values[m] * prob_.u0[n] + (hist[n] + d * g_m[n]) / (1.0 + lam * d);
        }
    }

    std::vector<double> history(std::size_t m) const {
        const ProductWeights& W = ctx_->l_weights();
        std::vector<double> h(N_);
        for (std::size_t n = 0; n < N_; ++n) h[n] = W.history(m, y_[n].data());
        return h;
    }

    void commit(std::size_t m, const StateVector& u_m, const StateVector& g_m) {
        for (std::size_t n = 0; n < N_; ++n) {
            v_[n][m] = u_m[n] - s_[n].values[m] * prob_.u0[n];
            y_[n][m] = g_m[n] - prob_.op.eigenvalues[n] * v_[n][m];
        }
    }

private:
    const EvolutionProblem& prob_;
    std::size_t N_, M_;
    ContextPtr ctx_;
    std::vector<RelaxationTable> s_;
    std::vector<std::vector<double>> v_, y_;
};

}  // namespace evolution_detail

/// Mild solution of the linear problem with fixed forcing (zero forcing if none given).
inline Trajectory solve_linear(const EvolutionProblem& prob, const SolverConfig& cfg = {}) {
    evolution_detail::check_problem(prob);
    const std::size_t N = prob.op.modes(), M = prob.mesh.steps();
    Trajectory traj{prob.mesh, std::vector<StateVector>(M + 1, StateVector(N)), std::vector<int>(M + 1, 0),
                    std::vector<double>(M + 1, 0.0)};
    traj.states[0] = prob.u0;
    evolution_detail::Marcher march(prob, cfg);
    auto g_at = [&](std::size_t m) {
        StateVector g(N);
        if (!prob.forcing.empty())
            for (std::size_t n = 0; n < N; ++n) g[n] = prob.forcing[n][m];
        return g;
    };
    march.commit(0, prob.u0, g_at(0));
    for (std::size_t m = 1; m <= M; ++m) {
        StateVector g = g_at(m);
        march.candidate(m, march.history(m), g, traj.states[m]);
        march.commit(m, traj.states[m], g);
    }
    return traj;
}

/// Mild solution with u-dependent forcing f(u): implicit in the current node, solved by Picard
/// iteration with the history frozen.
inline Trajectory solve_semilinear(const EvolutionProblem& prob, const SolverConfig& cfg = {}) {
    evolution_detail::check_problem(prob);
    if (!prob.f) return solve_linear(prob, cfg);
    if (!(cfg.picard_tol > 0.0) || cfg.picard_max_iters < 1) throw UsageError("solver: picard_tol must be > 0 and picard_max_iters >= 1");
    const Nonlinearity& f = *prob.f;
    const std::size_t N = prob.op.modes(), M = prob.mesh.steps();
    Trajectory traj{prob.mesh, std::vector<StateVector>(M + 1, StateVector(N)), std::vector<int>(M + 1, 0),
                    std::vector<double>(M + 1, 0.0)};
    traj.states[0] = prob.u0;
    if (f.is_zero && norm(prob.u0) == 0.0) return traj;

    evolution_detail::Marcher march(prob, cfg);
    march.commit(0, prob.u0, f(prob.u0));
    StateVector next(N);
    for (std::size_t m = 1; m <= M; ++m) {
        const std::vector<double> hist = march.history(m);
        StateVector u = traj.states[m - 1];
        StateVector g = f(u);
        double res = 0.0;
        int it = 0;
        bool converged = false;
        while (it < cfg.picard_max_iters) {
            march.candidate(m, hist, g, next);
            ++it;
            res = distance(next, u);
            u = next;
            if (!std::isfinite(res)) break;
            if (res <= cfg.picard_tol * std::max(1.0, norm(u))) {
                converged = true;
                break;
            }
            g = f(u);
        }
        if (!converged)
            throw SolverError("Picard iteration did not converge", m, prob.mesh[m], res);
        traj.states[m] = u;
        traj.picard_iterations[m] = it;
        traj.picard_residuals[m] = res;
        march.commit(m, u, g);
    }
    return traj;
}

struct ResidualReport {
    double max_residual = 0.0;  // relative to the data scale
    double scale = 0.0;
    std::size_t worst_node = 0;
    std::size_t worst_mode = 0;
    bool pass = false;
};

/// Checks u_n + lambda_n (l*u_n) = u0_n + (l*g_n) at nodes t_m >= t_from. The convolutions use
/// a freshly built piecewise-linear product rule over the whole history, independent of the
/// solver's starting block and resolvent recursion.
inline ResidualReport residual_check(const Trajectory& traj, const EvolutionProblem& prob, double tol, double t_from = -1.0) {
    evolution_detail::check_problem(prob);
    const TimeMesh& mesh = traj.mesh;
    const std::size_t N = prob.op.modes(), M = mesh.steps();
    if (traj.states.size() != M + 1) throw UsageError("residual_check: trajectory does not match the mesh");
    if (t_from < 0.0) t_from = 0.05 * mesh.horizon;

    std::vector<std::vector<double>> u(N, std::vector<double>(M + 1)), g(N, std::vector<double>(M + 1, 0.0));
    for (std::size_t m = 0; m <= M; ++m) {
        StateVector gm(N);
        if (prob.f)
            gm = (*prob.f)(traj.states[m]);
        else if (!prob.forcing.empty())
            for (std::size_t n = 0; n < N; ++n) gm[n] = prob.forcing[n][m];
        for (std::size_t n = 0; n < N; ++n) {
            u[n][m] = traj.states[m][n];
            g[n][m] = gm[n];
        }
    }
    const ProductWeights W(prob.pair, mesh, KernelSide::L);

    ResidualReport rep;
    double worst = 0.0;
    for (std::size_t m = 1; m <= M; ++m) {
        if (mesh[m] < t_from) continue;
        for (std::size_t n = 0; n < N; ++n) {
            double lu = W.apply(m, u[n].data());
            double lg = W.apply(m, g[n].data());
            double r = u[n][m] + prob.op.eigenvalues[n] * lu - prob.u0[n] - lg;
            rep.scale = std::max(rep.scale, std::abs(prob.u0[n]) + std::abs(lg));
            if (std::abs(r) > worst) {
                worst = std::abs(r);
                rep.worst_node = m;
                rep.worst_mode = n;
            }
        }
    }
    rep.max_residual = rep.scale > 0.0 ? worst / rep.scale : worst;
    rep.pass = rep.max_residual <= tol;
    return rep;
}

/// CSV columns t, ||u||, ||u||_{1/2}, u_1 .. u_min(N,8).
inline void write_trajectory_csv(const Trajectory& traj, const SpectralOperator& op, const std::string& path, int precision = 17) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    const std::size_t shown = std::min<std::size_t>(op.modes(), 8);
    out << "t,norm,norm_half";
    for (std::size_t n = 1; n <= shown; ++n) out << ",u_" << n;
    out << "\n";
    char buf[64];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        out << buf;
    };
    for (std::size_t m = 0; m < traj.states.size(); ++m) {
        put(traj.mesh[m]);
        out << ',';
        put(norm(traj.states[m]));
        out << ',';
        put(norm_gamma(op, traj.states[m], 0.5));
        for (std::size_t n = 0; n < shown; ++n) {
            out << ',';
            put(traj.states[m][n]);
        }
        out << "\n";
    }
}

}  // namespace nonlocal
