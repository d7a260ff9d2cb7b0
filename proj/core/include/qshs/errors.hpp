#pragma once

// Error taxonomy shared across the library. The CLI maps these to process
// exit codes (data errors -> 3, solver errors -> 4), so everything thrown
// out of library entry points should derive from one of the two.

#include <stdexcept>
#include <string>

namespace qshs {

// malformed input: bad CSV, single-class training set, dimension mismatch...
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// numerical failure inside a solve; carries whatever context the thrower had
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Cholesky hit a non-positive pivot even after the ridge was added
struct SingularSystemError : SolverError {
    long pivot;  // index of the offending pivot
    SingularSystemError(const std::string& what, long pivot_)
        : SolverError(what), pivot(pivot_) {}
};

// CG produced a non-finite residual
struct NumericalBreakdownError : SolverError {
    explicit NumericalBreakdownError(const std::string& what) : SolverError(what) {}
};

}  // namespace qshs
