#pragma once

// ADMM training loop for the 0-1-loss quadratic-surface SVM.
//
// The problem after half-vectorization: with z = [w; b] (w the half-vector
// of W), slack vector u and multipliers lambda,
//
//     min  0.5*sum_i ||M_i w + b||^2 + C*||u_+||_0
//     s.t. u + A w + B b + c y = 1
//
// where row i of A is y_i*qvec(x_i)' and row i of B is y_i*x_i'. One sweep
// updates, in order: the working set T (samples whose constraint violation
// falls in the prox band), u (closed-form prox), (w,b) (a reduced SPD
// normal system over T), c (feasibility average), lambda (dual ascent on T,
// complement zeroed exactly). Stopping tests four stationarity residuals.
//
// Everything operates on scaled features; fit() owns the scaling.

#include "qshs/data.hpp"
#include "qshs/linsolve.hpp"
#include "qshs/model.hpp"
#include "qshs/prox01.hpp"
#include "qshs/quadmap.hpp"

#include <utility>
#include <vector>

namespace qshs {

struct DesignMatrices {
    Mat A;   // N x h, signed quadratic features
    Mat B;   // N x n, signed linear features
    Mat S;   // N x h, unsigned qvec rows (prediction / reporting)
    Mat AB;  // N x m, [A B]; one matrix so working-set row gathers are cheap
    Vec y;
    std::vector<MatOperator> M;
    Mat G;   // m x m normal matrix of the surface-flatness term
    Index N = 0, n = 0, h = 0, m = 0;  // m = h + n
};

// expects already-scaled features; validates labels and finiteness
DesignMatrices build_design(const Dataset& data);

enum class WbSolver { Auto, Direct, Cg };

struct SolverConfig {
    double C = 1.0;
    double sigma = 1.0;
    double eta = 1.618;          // dual step scale
    int max_iter = 1000;
    double tol = 1e-3;
    double ridge_scale = 1e-10;  // ridge = ridge_scale*(1 + trace(G)/m)
    double cg_tol = 1e-10;
    int cg_max_iter = 0;         // 0 -> matrix order
    WbSolver wb = WbSolver::Auto;
};

struct SolverState {
    Vec w_tilde;  // half-vector of W, length h
    Vec b;        // length n
    double c = 0.0;
    Vec u;        // length N
    Vec lambda;   // length N
    std::vector<Index> T;
    int k = 0;
};

struct Residuals {
    double theta1 = 0.0;  // gradient of the smoothness term vs duals
    double theta2 = 0.0;  // label/multiplier orthogonality on T
    double theta3 = 0.0;  // constraint feasibility
    double theta4 = 0.0;  // prox fixed-point gap
    double max_value() const;
};

struct FitReport {
    bool converged = false;
    int iterations = 0;
    Residuals residuals;
    Vec u, lambda;
    std::vector<Index> working_set;  // final T
    std::vector<Index> sv_indices;   // lambda_i != 0 (exact)
    double objective = 0.0;          // value at feasible slacks
    int direct_solves = 0;
    int cg_solves = 0;
    double seconds = 0.0;
};

// violation vector driving the working set: v = 1 - Aw - Bb - cy - lambda/sigma
Vec compute_v(const SolverState& s, const DesignMatrices& d, const SolverConfig& cfg);

// T = { i : v_i in (0, sqrt(2C/sigma)] }
std::vector<Index> update_working_set(const Vec& v, const SolverConfig& cfg);

// u[T] = 0, elsewhere u = v; identical to the componentwise prox of v
Vec update_u(const Vec& v, const std::vector<Index>& T);

// Solves (G + sigma*K_T'K_T + ridge*I) z = sigma*K_T' d_T with K = [A B]
// and d = -(u + c*y - 1 + lambda/sigma) taken from the state (u already
// advanced; c and lambda still the previous iterates). Direct Cholesky
// when the system order m <= |T|, CG otherwise (or as forced by cfg.wb).
// Returns z = [w; b] stacked; branch counts go to `report` when given.
Vec update_wb(const SolverState& s, const DesignMatrices& d, const SolverConfig& cfg,
              const std::vector<Index>& T, FitReport* report = nullptr);

// c = -y'(Aw + Bb - 1 + u + lambda/sigma)/N with the new (w, b, u)
double update_c(const SolverState& s, const DesignMatrices& d, const SolverConfig& cfg);

// lambda[T] += eta*sigma*(u - 1 + Aw + Bb + cy)[T], complement exactly 0
Vec update_lambda(const SolverState& s, const DesignMatrices& d, const SolverConfig& cfg,
                  const std::vector<Index>& T);

// the four stationarity residuals at the current state
Residuals residuals(const SolverState& s, const DesignMatrices& d, const SolverConfig& cfg);

// 0.5*sum_i ||M_i w + b||^2 + C*#{feasible slack > 0} with the feasible
// slacks 1 - Aw - Bb - cy (not the internal u)
double objective_value(const DesignMatrices& d, const Vec& w_tilde, const Vec& b,
                       double c, double C);

// Full training loop: scale features, build the design, iterate to the
// tolerance or max_iter. Non-convergence returns the last iterate with
// converged=false rather than throwing.
std::pair<QuadraticSurfaceModel, FitReport> fit(const Dataset& data, const SolverConfig& cfg);

}  // namespace qshs
