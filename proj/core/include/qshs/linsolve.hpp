#pragma once

// Symmetric positive definite solvers for the (w,b) subproblem: an
// unpivoted Cholesky for the direct path and plain conjugate gradients
// for the iterative one. Both are deliberately hand-rolled: the direct
// path must report *which* pivot failed when the system is not PD, and
// the CG path is instrumented/testable down to its iteration count.
// Systems here are small (order (n^2+3n)/2 for n features).

#include "qshs/errors.hpp"
#include "qshs/quadmap.hpp"

namespace qshs {

struct SpdSystem {
    Mat K;               // symmetric
    Vec rhs;
    double ridge = 0.0;  // added to the diagonal before solving
};

struct CgReport {
    int iterations = 0;
    bool converged = false;
    double residual_norm = 0.0;
};

// Cholesky solve of (K + ridge*I) z = rhs.
// Throws SingularSystemError (with the pivot index) if a pivot is <= 0.
Vec solve_direct(const SpdSystem& sys);

// Unpreconditioned CG on (K + ridge*I) z = rhs from a zero start.
// Stops when ||r|| <= tol*(1 + ||rhs||) or after max_iter steps
// (max_iter <= 0 means the matrix order, which terminates exactly in
// exact arithmetic). Throws NumericalBreakdownError on non-finite
// residuals. The report, if given, records what happened.
Vec solve_cg(const SpdSystem& sys, double tol = 1e-10, int max_iter = 0,
             CgReport* report = nullptr);

}  // namespace qshs
