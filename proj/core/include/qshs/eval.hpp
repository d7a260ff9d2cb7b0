#pragma once

// Evaluation harness: accuracy, support-vector counts, repeated stratified
// k-fold cross-validation, grid search over (C, sigma), and the average-rank
// / critical-difference statistics used to compare methods across datasets.

#include "qshs/admm.hpp"
#include "qshs/data.hpp"

#include <cstdint>
#include <vector>

namespace qshs {

// fraction of agreements between two +-1 vectors of equal length
double accuracy(const Vec& pred, const Vec& truth);

// support vectors = nonzero multipliers; exact test, the complement is
// zeroed bitwise by the dual update
int nsv(const FitReport& report);

struct CvPlan {
    int folds = 10;
    int repeats = 10;
    std::uint64_t seed = 0;
};

struct FoldOutcome {
    int repeat = 0, fold = 0;
    double acc = 0.0;
    int nsv = 0;
    bool converged = false;
    double seconds = 0.0;
};

struct EvalResult {
    double C = 0.0, sigma = 0.0;
    double mean_acc = 0.0, std_acc = 0.0;   // over fold tests
    double mean_nsv = 0.0, std_nsv = 0.0;   // over fits
    double cpu_seconds = 0.0;               // summed fit+predict wall time
    std::vector<FoldOutcome> folds;
};

struct GridSpec {
    std::vector<double> C_values;
    std::vector<double> sigma_values;

    // C in {10^-7..10^7}, sigma in {sqrt(2)^-7..sqrt(2)^7}
    static GridSpec defaults();
};

struct GridOutcome {
    double best_C = 0.0, best_sigma = 0.0;
    Index best_index = 0;           // into table
    std::vector<EvalResult> table;  // C-major, sigma-minor cell order
};

// Repeated stratified k-fold CV. Folds are class-balanced (sizes differ by
// <= 1 per class), shuffles are seeded per repeat, and results are
// deterministic under a fixed seed regardless of worker count. Errors if a
// training split would be single-class (each class needs >= 2 members when
// folds >= 2).
EvalResult cross_validate(const Dataset& data, const CvPlan& plan,
                          const SolverConfig& cfg);

// Evaluates every (C, sigma) cell with cross_validate. Best cell: highest
// mean accuracy, ties broken by fewer support vectors, then smaller C,
// then smaller sigma. Solver errors are annotated with the offending cell.
GridOutcome grid_search(const Dataset& data, const GridSpec& grid,
                        const CvPlan& plan, const SolverConfig& base);

// critical difference q_alpha * sqrt(l*(l+1)/(6*h)) for l methods ranked
// on h datasets
double nemenyi_cd(int methods, int datasets, double q_alpha);

// scores is methods x datasets, higher = better; per dataset, methods get
// ranks 1..l (mid-rank on ties), averaged across datasets
std::vector<double> average_ranks(const Mat& scores);

// worker cap for the parallel loops: QSHS_THREADS when set (floor 1),
// otherwise the hardware concurrency
int worker_count();

}  // namespace qshs
