#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "nonlocal/error.hpp"
#include "nonlocal/kernel_catalog.hpp"
#include "nonlocal/laplace_inversion.hpp"
#include "nonlocal/product_weights.hpp"
#include "nonlocal/quadrature.hpp"
#include "nonlocal/time_mesh.hpp"

namespace nonlocal {

enum class RelaxationKind { S, R };

/// Hybrid: the first near_cells nodes come from contour inversion of the exact transforms,
/// later nodes from product integration. ProductIntegration: product integration throughout
/// (s only); its discrete algebra is exact, which the comparison principle relies on.
enum class SolveMethod { Hybrid, ProductIntegration };

// Transforms of s, r and their running integrals.
inline std::complex<double> s_hat(const KernelPair& p, double mu, std::complex<double> z) {
    return 1.0 / (z * (1.0 + mu * laplace_l(p, z)));
}
inline std::complex<double> r_hat(const KernelPair& p, double mu, std::complex<double> z) {
    std::complex<double> lh = laplace_l(p, z);
    return lh / (1.0 + mu * lh);
}

/// s(t, mu) by inversion of 1/(z(1 + mu l^)).
inline double s_exact(const KernelPair& p, double mu, double t) {
    if (t == 0.0) return 1.0;
    return invert_laplace([&](std::complex<double> z) { return s_hat(p, mu, z); }, t);
}
/// r(t, mu) by inversion of l^/(1 + mu l^).
inline double r_exact(const KernelPair& p, double mu, double t) {
    return invert_laplace([&](std::complex<double> z) { return r_hat(p, mu, z); }, t);
}
inline double s_integral_exact(const KernelPair& p, double mu, double t) {
    if (t == 0.0) return 0.0;
    return invert_laplace([&](std::complex<double> z) { return s_hat(p, mu, z) / z; }, t);
}
inline double r_integral_exact(const KernelPair& p, double mu, double t) {
    if (t == 0.0) return 0.0;
    return invert_laplace([&](std::complex<double> z) { return r_hat(p, mu, z) / z; }, t);
}

/// Everything that depends only on (pair, mesh). Built lazily, then read-only; share it
/// across the per-mu solves.
class ResolventContext {
public:
    /// Sentinel for the default starting block: max(16, M/16) cells, i.e. a fixed share of the
    /// horizon once M >= 256, which keeps the scheme second order in the step.
    static constexpr std::size_t auto_near_cells = static_cast<std::size_t>(-1);

    static std::size_t resolve_near_cells(std::size_t requested, std::size_t steps) {
        if (requested == auto_near_cells) requested = std::max<std::size_t>(16, steps / 16);
        return std::min(requested, steps);
    }

    ResolventContext(const KernelPair& pair, const TimeMesh& mesh,
                     std::size_t near_cells = auto_near_cells)
        : pair_(pair), mesh_(mesh), near_cells_(resolve_near_cells(near_cells, mesh.steps())) {
        validate(pair_);
    }

    const KernelPair& pair() const { return pair_; }
    const TimeMesh& mesh() const { return mesh_; }
    std::size_t near_cells() const { return near_cells_; }

    const ProductWeights& l_weights() const {
        std::call_once(l_w_once_, [&] { l_w_ = std::make_unique<ProductWeights>(pair_, mesh_, KernelSide::L); });
        return *l_w_;
    }
    const ProductWeights& k_weights() const {
        std::call_once(k_w_once_, [&] { k_w_ = std::make_unique<ProductWeights>(pair_, mesh_, KernelSide::K); });
        return *k_w_;
    }
    const NearField& l_near() const {
        std::call_once(l_n_once_, [&] { l_n_ = std::make_unique<NearField>(pair_, mesh_, KernelSide::L, near_cells_); });
        return *l_n_;
    }
    const NearField& k_near() const {
        std::call_once(k_n_once_, [&] { k_n_ = std::make_unique<NearField>(pair_, mesh_, KernelSide::K, near_cells_); });
        return *k_n_;
    }
    /// l(t_m); index 0 holds +inf when l is singular at 0.
    const std::vector<double>& l_nodes() const {
        std::call_once(l_v_once_, [&] {
            l_v_.assign(mesh_.size(), std::numeric_limits<double>::infinity());
            for (std::size_t m = 1; m < mesh_.size(); ++m) l_v_[m] = eval_l(pair_, mesh_[m]);
        });
        return l_v_;
    }

private:
    KernelPair pair_;
    TimeMesh mesh_;
    std::size_t near_cells_;
    mutable std::once_flag l_w_once_, k_w_once_, l_n_once_, k_n_once_, l_v_once_;
    mutable std::unique_ptr<ProductWeights> l_w_, k_w_;
    mutable std::unique_ptr<NearField> l_n_, k_n_;
    mutable std::vector<double> l_v_;
};

using ContextPtr = std::shared_ptr<const ResolventContext>;

inline ContextPtr make_context(const KernelPair& pair, const TimeMesh& mesh,
                               std::size_t near_cells = ResolventContext::auto_near_cells) {
    return std::make_shared<const ResolventContext>(pair, mesh, near_cells);
}

/// Sampled s(., mu) or r(., mu). For kind R, values[0] is NaN (r may be unbounded at 0).
struct RelaxationTable {
    ContextPtr context;
    double mu = 0.0;
    RelaxationKind kind = RelaxationKind::S;
    SolveMethod method = SolveMethod::Hybrid;
    std::vector<double> values;

    const TimeMesh& mesh() const { return context->mesh(); }
    const KernelPair& pair() const { return context->pair(); }
    std::size_t size() const { return values.size(); }
    double operator[](std::size_t m) const { return values[m]; }
};

namespace resolvent_detail {

struct NearSamples {
    std::vector<double> f_q;
    double tail = 0.0;
};

inline NearSamples sample_near(const ResolventContext& ctx, const NearField& nf, double mu, RelaxationKind kind) {
    NearSamples s;
    s.f_q.resize(nf.nodes().size());
    const KernelPair& p = ctx.pair();
    for (std::size_t q = 0; q < s.f_q.size(); ++q)
        s.f_q[q] = kind == RelaxationKind::S ? s_exact(p, mu, nf.nodes()[q]) : r_exact(p, mu, nf.nodes()[q]);
    s.tail = kind == RelaxationKind::S ? s_integral_exact(p, mu, nf.eps()) : r_integral_exact(p, mu, nf.eps());
    return s;
}

inline void check_finite(double v, std::size_t m, const char* what) {
    if (!std::isfinite(v)) throw SolverError(std::string(what) + ": non-finite value", m);
}

}  // namespace resolvent_detail

/// Solves s + mu (l*s) = 1 on the context mesh.
inline RelaxationTable solve_s(const ContextPtr& ctx, double mu, SolveMethod method = SolveMethod::Hybrid) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("solve_s: mu must be finite and >= 0");
    const TimeMesh& mesh = ctx->mesh();
    const std::size_t M = mesh.steps();
    RelaxationTable tab{ctx, mu, RelaxationKind::S, method, std::vector<double>(M + 1, 1.0)};
    if (mu == 0.0) return tab;
    auto& s = tab.values;
    const ProductWeights& W = ctx->l_weights();

    std::size_t K = 0;
    resolvent_detail::NearSamples near;
    if (method == SolveMethod::Hybrid) {
        K = ctx->near_cells();
        for (std::size_t m = 1; m <= K; ++m) {
            s[m] = s_exact(ctx->pair(), mu, mesh[m]);
            resolvent_detail::check_finite(s[m], m, "solve_s");
        }
        if (K > 0 && K < M) near = resolvent_detail::sample_near(*ctx, ctx->l_near(), mu, RelaxationKind::S);
    }
    for (std::size_t m = K + 1; m <= M; ++m) {
        double acc = W.history(m, s.data(), K);
        if (K > 0) acc += ctx->l_near().apply(m, near.f_q, near.tail);
        s[m] = (1.0 - mu * acc) / (1.0 + mu * W.diag(m));
        resolvent_detail::check_finite(s[m], m, "solve_s");
    }
    return tab;
}

inline RelaxationTable solve_s(const KernelPair& pair, double mu, const TimeMesh& mesh,
                               SolveMethod method = SolveMethod::Hybrid) {
    return solve_s(make_context(pair, mesh), mu, method);
}

/// Solves r + mu (l*r) = l on the positive mesh nodes (hybrid only).
inline RelaxationTable solve_r(const ContextPtr& ctx, double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("solve_r: mu must be positive and finite");
    if (ctx->near_cells() == 0) throw UsageError("solve_r: needs at least one near-field cell");
    const TimeMesh& mesh = ctx->mesh();
    const std::size_t M = mesh.steps();
    const std::size_t K = ctx->near_cells();
    RelaxationTable tab{ctx, mu, RelaxationKind::R, SolveMethod::Hybrid,
                        std::vector<double>(M + 1, std::numeric_limits<double>::quiet_NaN())};
    auto& r = tab.values;
    for (std::size_t m = 1; m <= K; ++m) {
        r[m] = r_exact(ctx->pair(), mu, mesh[m]);
        resolvent_detail::check_finite(r[m], m, "solve_r");
    }
    if (K < M) {
        const ProductWeights& W = ctx->l_weights();
        const NearField& nf = ctx->l_near();
        const auto& lv = ctx->l_nodes();
        auto near = resolvent_detail::sample_near(*ctx, nf, mu, RelaxationKind::R);
        for (std::size_t m = K + 1; m <= M; ++m) {
            double acc = W.history(m, r.data(), K) + nf.apply(m, near.f_q, near.tail);
            r[m] = (lv[m] - mu * acc) / (1.0 + mu * W.diag(m));
            resolvent_detail::check_finite(r[m], m, "solve_r");
        }
    }
    return tab;
}

inline RelaxationTable solve_r(const KernelPair& pair, double mu, const TimeMesh& mesh) {
    return solve_r(make_context(pair, mesh), mu);
}

/// v = (I + mu W)^{-1} W g, the product-integration counterpart of r(., mu) * g; v_0 = 0.
inline std::vector<double> discrete_resolvent_apply(const ResolventContext& ctx, double mu, const std::vector<double>& g) {
    const std::size_t M = ctx.mesh().steps();
    if (g.size() != M + 1) throw UsageError("convolve_r: sample count does not match the mesh");
    const ProductWeights& W = ctx.l_weights();
    std::vector<double> v(M + 1, 0.0), y(M + 1, 0.0);
    y[0] = g[0];
    for (std::size_t m = 1; m <= M; ++m) {
        double d = W.diag(m);
        v[m] = (W.history(m, y.data()) + d * g[m]) / (1.0 + mu * d);
        y[m] = g[m] - mu * v[m];
    }
    return v;
}

/// (r * g)(t_m) for g sampled on the table's mesh.
inline std::vector<double> convolve_r(const RelaxationTable& r_tab, const std::vector<double>& g) {
    if (r_tab.kind != RelaxationKind::R) throw UsageError("convolve_r: expected an r table");
    return discrete_resolvent_apply(*r_tab.context, r_tab.mu, g);
}

struct SrReport {
    double res_integral = 0.0;
    double res_kconv = 0.0;
    bool pass = false;
};

/// Checks s = 1 - mu int_0^t r and s = k*r on the mesh.
inline SrReport verify_sr_relations(const RelaxationTable& s_tab, const RelaxationTable& r_tab, const KernelPair& pair, double tol) {
    if (s_tab.kind != RelaxationKind::S || r_tab.kind != RelaxationKind::R)
        throw UsageError("verify_sr_relations: expected an s table and an r table");
    if (s_tab.context != r_tab.context && !s_tab.mesh().same_as(r_tab.mesh()))
        throw UsageError("verify_sr_relations: tables live on different meshes");
    if (s_tab.mu != r_tab.mu) throw UsageError("verify_sr_relations: tables have different mu");
    const ResolventContext& ctx = *r_tab.context;
    const TimeMesh& mesh = ctx.mesh();
    const std::size_t M = mesh.steps();
    const std::size_t K = ctx.near_cells();
    const double mu = s_tab.mu;
    const auto& s = s_tab.values;
    const auto& r = r_tab.values;

    SrReport rep;
    // integral form: exact running integral over the starting block, trapezoid beyond it
    double Q = 0.0;
    for (std::size_t m = 1; m <= M; ++m) {
        if (m <= K)
            Q = r_integral_exact(pair, mu, mesh[m]);
        else
            Q += 0.5 * (mesh[m] - mesh[m - 1]) * (r[m - 1] + r[m]);
        rep.res_integral = std::max(rep.res_integral, std::abs(s[m] - 1.0 + mu * Q));
    }
    // convolution form with k
    const ProductWeights& Wk = ctx.k_weights();
    resolvent_detail::NearSamples near;
    if (K < M) near = resolvent_detail::sample_near(ctx, ctx.k_near(), mu, RelaxationKind::R);
    for (std::size_t m = 1; m <= M; ++m) {
        double kr;
        if (m <= K) {
            kr = quad::singular_convolution([&](double x) { return eval_k(pair, x); },
                                            [&](double x) { return cumulative_k(pair, x); },
                                            [&](double x) { return r_exact(pair, mu, x); },
                                            [&](double x) { return r_integral_exact(pair, mu, x); }, mesh[m]);
        } else {
            kr = ctx.k_near().apply(m, near.f_q, near.tail) + Wk.apply(m, r.data(), K);
        }
        rep.res_kconv = std::max(rep.res_kconv, std::abs(s[m] - kr));
    }
    rep.pass = rep.res_integral <= tol && rep.res_kconv <= tol;
    return rep;
}

/// max_m s_m (1 + mu int_0^{t_m} l) - 1; nonpositive in exact arithmetic.
inline double s_bound_excess(const RelaxationTable& s_tab) {
    if (s_tab.kind != RelaxationKind::S) throw UsageError("s_bound_excess: expected an s table");
    const TimeMesh& mesh = s_tab.mesh();
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < mesh.size(); ++m) {
        double L1 = cumulative_l(s_tab.pair(), mesh[m]);
        worst = std::max(worst, s_tab.values[m] * (1.0 + s_tab.mu * L1) - 1.0);
    }
    return worst;
}

/// CSV with columns t,value; r tables skip t = 0.
inline void write_csv(const RelaxationTable& tab, const std::string& path, int precision = 17) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    out << "t," << (tab.kind == RelaxationKind::S ? "s" : "r") << "\n";
    char buf[96];
    const TimeMesh& mesh = tab.mesh();
    for (std::size_t m = tab.kind == RelaxationKind::S ? 0 : 1; m < mesh.size(); ++m) {
        std::snprintf(buf, sizeof buf, "%.*g,%.*g\n", precision, mesh[m], precision, tab.values[m]);
        out << buf;
    }
}

}  // namespace nonlocal
