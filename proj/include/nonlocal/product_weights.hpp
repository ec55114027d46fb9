#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "nonlocal/error.hpp"
#include "nonlocal/kernel_catalog.hpp"
#include "nonlocal/quadrature.hpp"
#include "nonlocal/time_mesh.hpp"

namespace nonlocal {

/// Which member of the pair a weight set integrates against.
enum class KernelSide { L, K };

namespace pw_detail {

inline double ker(const KernelPair& p, KernelSide s, double t) {
    return s == KernelSide::L ? eval_l(p, t) : eval_k(p, t);
}
inline double ker1(const KernelPair& p, KernelSide s, double t) {
    return s == KernelSide::L ? cumulative_l(p, t) : cumulative_k(p, t);
}
inline double ker2(const KernelPair& p, KernelSide s, double t) {
    return s == KernelSide::L ? cumulative_l2(p, t) : cumulative_k2(p, t);
}

}  // namespace pw_detail

/// Product-integration weights: for node m and cell c = [t_c, t_{c+1}] (c < m),
///   int_{t_c}^{t_{c+1}} ker(t_m - tau) u(tau) dtau  ~  left(m,c) u_c + right(m,c) u_{c+1}
/// with u linear on the cell. Moments are exact for the cell touching t_m (via the first and
/// second antiderivatives of ker) and 10-point Gauss-Legendre elsewhere.
class ProductWeights {
public:
    ProductWeights(const KernelPair& pair, const TimeMesh& mesh, KernelSide side)
        : pair_(pair), side_(side), uniform_(mesh.is_uniform()), steps_(mesh.steps()) {
        if (uniform_) {
            const double h = mesh.step();
            left_.resize(steps_);
            right_.resize(steps_);
            for (std::size_t k = 0; k < steps_; ++k) moments(k * h, (k + 1) * h, left_[k], right_[k]);
        } else {
            left_.resize(steps_ * (steps_ + 1) / 2);
            right_.resize(left_.size());
            for (std::size_t m = 1; m <= steps_; ++m)
                for (std::size_t c = 0; c < m; ++c) {
                    std::size_t i = index(m, c);
                    moments(mesh[m] - mesh[c + 1], mesh[m] - mesh[c], left_[i], right_[i]);
                }
        }
    }

    double left(std::size_t m, std::size_t c) const {
        return uniform_ ? left_[m - 1 - c] : left_[index(m, c)];
    }
    double right(std::size_t m, std::size_t c) const {
        return uniform_ ? right_[m - 1 - c] : right_[index(m, c)];
    }
    /// Coefficient of u_m in the rule at node m.
    double diag(std::size_t m) const { return right(m, m - 1); }

    /// sum over cells c in [c_begin, m) of left(m,c) y_c + right(m,c) y_{c+1}, leaving out y_m.
    double history(std::size_t m, const double* y, std::size_t c_begin = 0) const {
        double acc = 0.0;
        if (uniform_) {
            for (std::size_t c = c_begin; c < m; ++c) {
                std::size_t k = m - 1 - c;
                acc += left_[k] * y[c];
                if (c + 1 < m) acc += right_[k] * y[c + 1];
            }
        } else {
            const std::size_t base = index(m, 0);
            for (std::size_t c = c_begin; c < m; ++c) {
                acc += left_[base + c] * y[c];
                if (c + 1 < m) acc += right_[base + c] * y[c + 1];
            }
        }
        return acc;
    }

    /// Full rule at node m including the y_m term.
    double apply(std::size_t m, const double* y, std::size_t c_begin = 0) const {
        return history(m, y, c_begin) + diag(m) * y[m];
    }

    std::size_t steps() const { return steps_; }
    KernelSide side() const { return side_; }

private:
    static std::size_t index(std::size_t m, std::size_t c) { return (m - 1) * m / 2 + c; }

    // sigma = t_m - tau runs over [p, q]; u_c pairs with (sigma - p), u_{c+1} with (q - sigma).
    void moments(double p, double q, double& l, double& r) const {
        const double d = q - p;
        if (p == 0.0) {
            double k1 = pw_detail::ker1(pair_, side_, q);
            double k2 = pw_detail::ker2(pair_, side_, q);
            l = (q * k1 - k2) / d;
            r = k2 / d;
        } else {
            l = quad::gauss10([&](double s) { return pw_detail::ker(pair_, side_, s) * (s - p); }, p, q) / d;
            r = quad::gauss10([&](double s) { return pw_detail::ker(pair_, side_, s) * (q - s); }, p, q) / d;
        }
        if (!std::isfinite(l) || !std::isfinite(r)) throw EvaluationError("product weights: non-finite moment", 0.0);
    }

    KernelPair pair_;
    KernelSide side_;
    bool uniform_;
    std::size_t steps_;
    std::vector<double> left_;
    std::vector<double> right_;
};

/// Quadrature of int_0^{t_K} ker(t_m - tau) f(tau) dtau for nodes m > K, where f is known
/// pointwise (and possibly singular at 0). The first cell is graded geometrically down to
/// eps = t_1 * 1e-12; [0, eps] contributes ker(t_m) * int_0^eps f.
class NearField {
public:
    NearField(const KernelPair& pair, const TimeMesh& mesh, KernelSide side, std::size_t near_cells)
        : cells_(near_cells), steps_(mesh.steps()) {
        if (cells_ == 0 || cells_ >= steps_) {
            cells_ = std::min(cells_, steps_);
            return;
        }
        const auto& gl = quad::GaussLegendre<10>::get();
        const double t1 = mesh[1];
        eps_ = t1 * 1e-12;
        std::vector<double> edges{t1};
        while (edges.back() / 4.0 > eps_) edges.push_back(edges.back() / 4.0);
        edges.push_back(eps_);
        std::vector<double> grid(edges.rbegin(), edges.rend());
        for (std::size_t c = 2; c <= cells_; ++c) grid.push_back(mesh[c]);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            double a = grid[i], b = grid[i + 1];
            for (std::size_t j = 0; j < 10; ++j) {
                nodes_.push_back(0.5 * (b - a) * gl.x[j] + 0.5 * (a + b));
                weights_.push_back(0.5 * (b - a) * gl.w[j]);
            }
        }
        const std::size_t nq = nodes_.size();
        const std::size_t graded_q = nq - 10 * (cells_ - 1);
        rows_ = steps_ - cells_;
        matrix_.resize(rows_ * nq);
        tail_.resize(rows_);
        // On a uniform mesh the kernel at t_m minus a node of cell c depends on m - c only.
        std::vector<double> by_offset;
        const double h = mesh.is_uniform() ? mesh.step() : 0.0;
        if (h > 0.0) {
            by_offset.resize(10 * steps_);
            for (std::size_t d = 2; d < steps_; ++d)
                for (std::size_t j = 0; j < 10; ++j)
                    by_offset[10 * d + j] = pw_detail::ker(pair, side, (double(d) - 0.5 - 0.5 * gl.x[j]) * h);
        }
        for (std::size_t m = cells_ + 1; m <= steps_; ++m) {
            const double tm = mesh[m];
            double* row = &matrix_[(m - cells_ - 1) * nq];
            const std::size_t direct = h > 0.0 ? graded_q : nq;
            for (std::size_t q = 0; q < direct; ++q) row[q] = weights_[q] * pw_detail::ker(pair, side, tm - nodes_[q]);
            for (std::size_t q = direct; q < nq; ++q) {
                const std::size_t c = 1 + (q - graded_q) / 10, j = (q - graded_q) % 10;
                row[q] = weights_[q] * by_offset[10 * (m - c) + j];
            }
            tail_[m - cells_ - 1] = pw_detail::ker(pair, side, tm);
        }
    }

    std::size_t cells() const { return cells_; }
    bool active() const { return !nodes_.empty(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    double eps() const { return eps_; }

    /// f_q = f(nodes_[q]); f_tail = int_0^eps f.
    double apply(std::size_t m, const std::vector<double>& f_q, double f_tail) const {
        const std::size_t nq = nodes_.size();
        const double* row = &matrix_[(m - cells_ - 1) * nq];
        double acc = 0.0;
        for (std::size_t q = 0; q < nq; ++q) acc += row[q] * f_q[q];
        return acc + tail_[m - cells_ - 1] * f_tail;
    }

private:
    std::size_t cells_;
    std::size_t steps_;
    std::size_t rows_ = 0;
    double eps_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> matrix_;
    std::vector<double> tail_;
};

}  // namespace nonlocal
