#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nonlocal {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Caller misuse: mismatched sizes, empty grids, bad config values.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numerical evaluation did not reach its tolerance.
struct EvaluationError : std::runtime_error {
    EvaluationError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_tolerance(achieved) {}
    double achieved_tolerance;
};

/// Feature not available for the given family or operator.
struct Unsupported : std::logic_error {
    using std::logic_error::logic_error;
};

/// Failure inside a time-marching solve. Carries the node (and mode, if any).
struct SolverError : std::runtime_error {
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    SolverError(const std::string& what, std::size_t node_, double time_ = 0.0,
                double residual_ = 0.0, std::size_t mode_ = npos)
        : std::runtime_error(what), node(node_), mode(mode_), time(time_),
          residual(residual_) {}

    std::size_t node;
    std::size_t mode;
    double time;
    double residual;
};

}  // namespace nonlocal
