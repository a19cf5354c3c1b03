#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace msdiff {

// Row-major throughout: states and flux tables are indexed (cell, species)
// and per-cell rows are the unit of work.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class ErrorCode {
    Structural,     ///< shape mismatch between containers
    Config,         ///< invalid scenario / parameter
    Parse,          ///< scenario text could not be parsed
    DegenerateCell, ///< a cell cannot be repaired onto the simplex
    Solver,         ///< friction system unsolvable at a face
    Stability,      ///< time step produced an unphysical state
    Resolution,     ///< sampling too coarse for the requested operation
    Io,             ///< file read/write failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace msdiff
