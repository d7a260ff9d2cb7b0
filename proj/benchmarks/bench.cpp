// Micro-benchmarks for the hot paths: the 0/1-loss prox, assembling the
// design matrices, one full training run, and the two (w, b) sub-solver
// branches on the same reduced system.

#include "qshs/admm.hpp"
#include "qshs/data.hpp"
#include "qshs/linsolve.hpp"
#include "qshs/prox01.hpp"
#include "qshs/quadmap.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

using namespace qshs;

namespace {

Vec random_vec(std::mt19937_64& eng, Index n, double lo, double hi) {
    Vec v(n);
    for (Index i = 0; i < n; ++i) {
        const double u = (eng() >> 11) * 0x1.0p-53;
        v[i] = lo + (hi - lo) * u;
    }
    return v;
}

void bm_prox(benchmark::State& state) {
    std::mt19937_64 eng(7);
    const Vec v = random_vec(eng, state.range(0), -2.0, 2.0);
    const ProxParams p(0.5, 1.0);
    for (auto _ : state) {
        Vec out = prox(v, p);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_prox)->Arg(1000)->Arg(100000);

void bm_build_design(benchmark::State& state) {
    const Dataset data =
        gen_synthetic(SurfaceKind::Circle, static_cast<int>(state.range(0)), 0.3, 1);
    for (auto _ : state) {
        DesignMatrices d = build_design(data);
        benchmark::DoNotOptimize(d.G.data());
    }
}
BENCHMARK(bm_build_design)->Arg(100)->Arg(1000);

void bm_fit_circle(benchmark::State& state) {
    const Dataset data =
        gen_synthetic(SurfaceKind::Circle, static_cast<int>(state.range(0)), 0.3, 1);
    SolverConfig cfg;
    cfg.C = 1e3;
    cfg.sigma = 2.0;
    cfg.max_iter = 200;
    for (auto _ : state) {
        auto [model, report] = fit(data, cfg);
        benchmark::DoNotOptimize(model.c);
        benchmark::DoNotOptimize(report.iterations);
    }
}
BENCHMARK(bm_fit_circle)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

// one reduced-system solve, direct Cholesky vs conjugate gradients
void bm_solve_branch(benchmark::State& state) {
    const bool use_cg = state.range(1) != 0;
    const Index m = state.range(0);
    std::mt19937_64 eng(11);
    Mat R(m, m);
    for (Index i = 0; i < m; ++i)
        R.row(i) = random_vec(eng, m, -1.0, 1.0).transpose();
    SpdSystem sys;
    sys.K = R.transpose() * R + static_cast<double>(m) * Mat::Identity(m, m);
    sys.rhs = random_vec(eng, m, -1.0, 1.0);
    for (auto _ : state) {
        if (use_cg) {
            CgReport rep;
            Vec x = solve_cg(sys, 1e-8, 10 * static_cast<int>(m), &rep);
            benchmark::DoNotOptimize(x.data());
        } else {
            Vec x = solve_direct(sys);
            benchmark::DoNotOptimize(x.data());
        }
    }
}
BENCHMARK(bm_solve_branch)
    ->Args({20, 0})
    ->Args({20, 1})
    ->Args({90, 0})
    ->Args({90, 1});

}  // namespace

BENCHMARK_MAIN();
