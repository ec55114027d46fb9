#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "nonlocal/error.hpp"

namespace nonlocal {

/// Uniform is Graded with rho = 1.
struct Grading {
    double rho = 1.0;

    static Grading uniform() { return {1.0}; }
    static Grading graded(double rho) { return {rho}; }
    bool is_uniform() const { return rho == 1.0; }
};

struct TimeMesh {
    double horizon = 0.0;
    Grading grading;
    std::vector<double> nodes;

    std::size_t steps() const { return nodes.size() - 1; }
    std::size_t size() const { return nodes.size(); }
    double operator[](std::size_t m) const { return nodes[m]; }
    bool is_uniform() const { return grading.is_uniform(); }
    /// Uniform step; only meaningful for uniform meshes.
    double step() const { return horizon / double(steps()); }

    bool same_as(const TimeMesh& o) const {
        return horizon == o.horizon && grading.rho == o.grading.rho && nodes.size() == o.nodes.size();
    }
};

/// t_m = T (m/M)^rho, m = 0..M.
inline TimeMesh make_mesh(double T, std::size_t steps, Grading grading = Grading::uniform()) {
    if (!(T > 0.0) || !std::isfinite(T)) throw UsageError("make_mesh: horizon must be positive and finite");
    if (steps < 2) throw UsageError("make_mesh: need at least 2 steps");
    if (!(grading.rho >= 1.0)) throw UsageError("make_mesh: grading exponent must be >= 1");
    TimeMesh mesh;
    mesh.horizon = T;
    mesh.grading = grading;
    mesh.nodes.resize(steps + 1);
    for (std::size_t m = 0; m <= steps; ++m) {
        double x = double(m) / double(steps);
        mesh.nodes[m] = grading.is_uniform() ? T * x : T * std::pow(x, grading.rho);
    }
    mesh.nodes[steps] = T;
    return mesh;
}

}  // namespace nonlocal
