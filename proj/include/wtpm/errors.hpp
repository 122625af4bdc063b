#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wtpm {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
    using Error::Error;
};

struct ShapeError : Error {
    using Error::Error;
};

// A dimension observed in zero samples cannot be estimated at all.
struct DegenerateDimension : Error {
    explicit DegenerateDimension(int dim_)
        : Error("dimension " + std::to_string(dim_) + " has no observed samples"), dim(dim_) {}
    int dim;
};

struct InsufficientPairData : Error {
    InsufficientPairData(int i_, int j_, std::int64_t count_, std::int64_t required_)
        : Error("pair (" + std::to_string(i_) + "," + std::to_string(j_) + ") jointly observed " +
                std::to_string(count_) + " times, need at least " + std::to_string(required_)),
          i(i_), j(j_), count(count_), required(required_) {}
    int i, j;
    std::int64_t count, required;
};

struct InsufficientTripleData : Error {
    InsufficientTripleData(int i_, int j_, int k_, std::int64_t count_, std::int64_t required_)
        : Error("triple (" + std::to_string(i_) + "," + std::to_string(j_) + "," + std::to_string(k_) +
                ") jointly observed " + std::to_string(count_) + " times, need at least " +
                std::to_string(required_)),
          i(i_), j(j_), k(k_), count(count_), required(required_) {}
    int i, j, k;
    std::int64_t count, required;
};

struct RankDeficient : Error {
    RankDeficient(int requested_, int achievable_)
        : Error("requested rank " + std::to_string(requested_) + " but only " +
                std::to_string(achievable_) + " usable eigenvalues"),
          requested(requested_), achievable(achievable_) {}
    int requested, achievable;
};

struct ConvergenceFailure : Error {
    explicit ConvergenceFailure(double best_residual_)
        : Error("no power-iteration restart converged; best residual " +
                std::to_string(best_residual_)),
          best_residual(best_residual_) {}
    double best_residual;
};

struct RecoveryError : Error {
    RecoveryError(int component_, const std::string& what_)
        : Error("component " + std::to_string(component_) + ": " + what_), component(component_) {}
    int component;
};

struct NotIdentifiable : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& what_, int line_, int column_ = -1)
        : Error("line " + std::to_string(line_) +
                (column_ >= 0 ? ", column " + std::to_string(column_) : std::string()) + ": " + what_),
          line(line_), column(column_) {}
    int line, column;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace wtpm
