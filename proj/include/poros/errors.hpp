/// @file errors.hpp
/// @brief Error hierarchy used across the toolkit.
///
/// The CLI maps these to exit codes: InvariantError -> 2, everything
/// else (geometry, config, solver) -> 1.

#pragma once

#include <stdexcept>
#include <string>

namespace poros {

struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A declared invariant of a result type failed (e.g. K not SPD, C1 >= 0,
/// NaN in a report). Distinct from SolverError so the harness can exit 2.
struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace poros
