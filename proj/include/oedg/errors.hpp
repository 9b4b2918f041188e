#pragma once

#include <stdexcept>
#include <string>

namespace oedg {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}
    int line;
};

struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a state leaves the admissible set (negative density, pressure, out of bounds).
struct AdmissibilityError : std::runtime_error {
    AdmissibilityError(const std::string& msg, int cell = -1)
        : std::runtime_error(cell >= 0 ? msg + " (cell " + std::to_string(cell) + ")" : msg), cell(cell) {}
    // Appends context to an existing error without repeating the cell suffix.
    AdmissibilityError(const AdmissibilityError& inner, const std::string& suffix)
        : std::runtime_error(inner.what() + suffix), cell(inner.cell) {}
    int cell;
};

/// Raised on NaN/Inf or a degenerate time step.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace oedg
