#include "qshs/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace qshs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

thread_local bool inside_pool = false;

// Run fn(i) for i in [0, count). Work items land in caller-owned slots, so
// results are deterministic no matter how the pool schedules them. Nested
// calls (a parallel grid evaluating parallel CVs) degrade to serial instead
// of spawning threads quadratically.
void parallel_for(Index count, const std::function<void(Index)>& fn) {
    const Index workers =
        std::min<Index>(static_cast<Index>(worker_count()), count);
    if (workers <= 1 || inside_pool) {
        for (Index i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::atomic<Index> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    std::atomic<bool> bail{false};

    auto worker = [&] {
        inside_pool = true;
        for (;;) {
            const Index i = next.fetch_add(1);
            if (i >= count || bail.load())
                break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error)
                    first_error = std::current_exception();
                bail.store(true);
                break;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (Index w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

Dataset take_rows(const Dataset& data, const std::vector<Index>& rows) {
    Dataset out;
    out.X.resize(static_cast<Index>(rows.size()), data.dim());
    out.y.resize(static_cast<Index>(rows.size()));
    for (Index r = 0; r < static_cast<Index>(rows.size()); ++r) {
        out.X.row(r) = data.X.row(rows[r]);
        out.y[r] = data.y[rows[r]];
    }
    out.name = data.name;
    return out;
}

struct MeanStd {
    double mean = 0.0, std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd ms;
    if (xs.empty())
        return ms;
    ms.mean = std::accumulate(xs.begin(), xs.end(), 0.0) /
              static_cast<double>(xs.size());
    if (xs.size() < 2)
        return ms;
    double acc = 0.0;
    for (double x : xs)
        acc += (x - ms.mean) * (x - ms.mean);
    ms.std = std::sqrt(acc / static_cast<double>(xs.size() - 1));
    return ms;
}

// Fold id per sample for one repeat: shuffle each class, then deal all
// samples round-robin with one shared cursor. The shared cursor keeps
// every fold non-empty whenever folds <= N (leave-one-out included);
// per-class counts still differ by at most one because each class
// occupies a consecutive run of deals.
std::vector<int> stratified_folds(const Dataset& data, int folds,
                                  std::uint64_t repeat_seed) {
    std::vector<Index> pos, neg;
    for (Index i = 0; i < data.size(); ++i)
        (data.y[i] > 0 ? pos : neg).push_back(i);

    std::mt19937_64 eng(repeat_seed);
    auto shuffle = [&](std::vector<Index>& xs) {
        for (std::size_t i = xs.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(eng() % i);
            std::swap(xs[i - 1], xs[j]);
        }
    };
    shuffle(pos);
    shuffle(neg);

    std::vector<int> fold_of(data.size());
    std::size_t cursor = 0;
    for (Index i : pos)
        fold_of[i] = static_cast<int>(cursor++ % static_cast<std::size_t>(folds));
    for (Index i : neg)
        fold_of[i] = static_cast<int>(cursor++ % static_cast<std::size_t>(folds));
    return fold_of;
}

}  // namespace

int worker_count() {
    if (const char* env = std::getenv("QSHS_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1)
            return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

double accuracy(const Vec& pred, const Vec& truth) {
    if (pred.size() != truth.size())
        throw DataError("accuracy: length mismatch");
    if (pred.size() == 0)
        throw DataError("accuracy: empty vectors");
    Index hits = 0;
    for (Index i = 0; i < pred.size(); ++i)
        if (pred[i] == truth[i])
            ++hits;
    return static_cast<double>(hits) / static_cast<double>(pred.size());
}

int nsv(const FitReport& report) {
    int count = 0;
    for (Index i = 0; i < report.lambda.size(); ++i)
        if (report.lambda[i] != 0.0)
            ++count;
    return count;
}

EvalResult cross_validate(const Dataset& data, const CvPlan& plan,
                          const SolverConfig& cfg) {
    if (plan.folds < 2)
        throw DataError("cross_validate: need at least 2 folds");
    if (plan.folds > data.size())
        throw DataError("cross_validate: more folds than samples");
    if (plan.repeats < 1)
        throw DataError("cross_validate: repeats must be >= 1");

    Index pos = 0, neg = 0;
    for (Index i = 0; i < data.size(); ++i)
        (data.y[i] > 0 ? pos : neg) += 1;
    // with round-robin dealing, a class with >= 2 members can never sit
    // entirely in one fold, so every training split keeps both classes
    if (pos < 2 || neg < 2)
        throw DataError("cross_validate: a class has fewer than 2 members; "
                        "cannot stratify");

    std::vector<std::vector<int>> fold_of(plan.repeats);
    for (int r = 0; r < plan.repeats; ++r)
        fold_of[r] = stratified_folds(
            data, plan.folds,
            splitmix64(plan.seed ^ (0x5eedULL + static_cast<std::uint64_t>(r))));

    const Index items = static_cast<Index>(plan.repeats) * plan.folds;
    std::vector<FoldOutcome> outcomes(items);

    parallel_for(items, [&](Index item) {
        const int repeat = static_cast<int>(item) / plan.folds;
        const int fold = static_cast<int>(item) % plan.folds;

        std::vector<Index> train_rows, test_rows;
        for (Index i = 0; i < data.size(); ++i)
            (fold_of[repeat][i] == fold ? test_rows : train_rows).push_back(i);

        const Dataset train = take_rows(data, train_rows);
        const Dataset test = take_rows(data, test_rows);

        const auto t0 = std::chrono::steady_clock::now();
        auto [model, report] = fit(train, cfg);
        const Vec pred = model.predict_many(test.X);
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0).count();

        FoldOutcome& out = outcomes[item];
        out.repeat = repeat;
        out.fold = fold;
        out.acc = accuracy(pred, test.y);
        out.nsv = nsv(report);
        out.converged = report.converged;
        out.seconds = secs;
    });

    EvalResult res;
    res.C = cfg.C;
    res.sigma = cfg.sigma;
    std::vector<double> accs, nsvs;
    accs.reserve(outcomes.size());
    nsvs.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        accs.push_back(o.acc);
        nsvs.push_back(o.nsv);
        res.cpu_seconds += o.seconds;
    }
    const MeanStd a = mean_std(accs), s = mean_std(nsvs);
    res.mean_acc = a.mean;
    res.std_acc = a.std;
    res.mean_nsv = s.mean;
    res.std_nsv = s.std;
    res.folds = std::move(outcomes);
    return res;
}

GridSpec GridSpec::defaults() {
    GridSpec g;
    for (int e = -7; e <= 7; ++e)
        g.C_values.push_back(std::pow(10.0, e));
    for (int e = -7; e <= 7; ++e)
        g.sigma_values.push_back(std::pow(std::sqrt(2.0), e));
    return g;
}

GridOutcome grid_search(const Dataset& data, const GridSpec& grid,
                        const CvPlan& plan, const SolverConfig& base) {
    if (grid.C_values.empty() || grid.sigma_values.empty())
        throw DataError("grid_search: empty grid");

    const Index cells = static_cast<Index>(grid.C_values.size()) *
                        static_cast<Index>(grid.sigma_values.size());
    GridOutcome out;
    out.table.resize(cells);

    parallel_for(cells, [&](Index cell) {
        const std::size_t ci = static_cast<std::size_t>(cell) / grid.sigma_values.size();
        const std::size_t si = static_cast<std::size_t>(cell) % grid.sigma_values.size();
        SolverConfig cfg = base;
        cfg.C = grid.C_values[ci];
        cfg.sigma = grid.sigma_values[si];
        try {
            out.table[cell] = cross_validate(data, plan, cfg);
        } catch (const SolverError& e) {
            throw SolverError(std::string(e.what()) + " (grid cell C=" +
                              std::to_string(cfg.C) + ", sigma=" +
                              std::to_string(cfg.sigma) + ")");
        }
    });

    // best cell: accuracy, then sparsity, then the smaller penalties
    Index best = 0;
    for (Index i = 1; i < cells; ++i) {
        const EvalResult& a = out.table[i];
        const EvalResult& b = out.table[best];
        const bool better =
            a.mean_acc > b.mean_acc ||
            (a.mean_acc == b.mean_acc &&
             (a.mean_nsv < b.mean_nsv ||
              (a.mean_nsv == b.mean_nsv &&
               (a.C < b.C || (a.C == b.C && a.sigma < b.sigma)))));
        if (better)
            best = i;
    }
    out.best_index = best;
    out.best_C = out.table[best].C;
    out.best_sigma = out.table[best].sigma;
    return out;
}

double nemenyi_cd(int methods, int datasets, double q_alpha) {
    if (methods < 2 || datasets < 1 || !(q_alpha > 0.0))
        throw std::invalid_argument("nemenyi_cd: invalid counts");
    const double l = methods;
    return q_alpha * std::sqrt(l * (l + 1.0) / (6.0 * datasets));
}

std::vector<double> average_ranks(const Mat& scores) {
    const Index l = scores.rows(), h = scores.cols();
    if (l < 1 || h < 1)
        throw std::invalid_argument("average_ranks: empty table");

    std::vector<double> avg(l, 0.0);
    std::vector<Index> order(l);
    for (Index j = 0; j < h; ++j) {
        std::iota(order.begin(), order.end(), Index{0});
        std::sort(order.begin(), order.end(), [&](Index a, Index b) {
            return scores(a, j) > scores(b, j);
        });
        // mid-rank ties: every member of a tied block gets the block's
        // average 1-based position
        Index i = 0;
        while (i < l) {
            Index k = i;
            while (k + 1 < l && scores(order[k + 1], j) == scores(order[i], j))
                ++k;
            const double rank = 0.5 * static_cast<double>(i + k) + 1.0;
            for (Index t = i; t <= k; ++t)
                avg[order[t]] += rank;
            i = k + 1;
        }
    }
    for (double& a : avg)
        a /= static_cast<double>(h);
    return avg;
}

}  // namespace qshs
