// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace chdbc {

// Invalid configuration or invalid argument values (bad grid sizes,
// nonpositive viscosities, unknown config keys, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched field/mesh shapes.
struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation outside the domain of a potential graph, or a mean value
// that is not strictly interior to it.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Nonlinear or linear solver failed to converge.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

// Trajectory did not reach a near-stationary regime before t_end.
struct StalenessError : std::runtime_error {
    explicit StalenessError(const std::string& msg) : std::runtime_error(msg) {}
};

// File read/write failures.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace chdbc
