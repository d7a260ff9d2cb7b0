#include "qshs/admm.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace qshs {

DesignMatrices build_design(const Dataset& data) {
    const Index N = data.size();
    const Index n = data.dim();
    if (N < 2)
        throw DataError("build_design: need at least 2 samples");
    if (n < 1)
        throw DataError("build_design: no feature columns");
    if (!data.X.allFinite())
        throw DataError("build_design: non-finite features");

    bool pos = false, neg = false;
    for (Index i = 0; i < N; ++i) {
        if (data.y[i] == 1.0) pos = true;
        else if (data.y[i] == -1.0) neg = true;
        else throw DataError("build_design: labels must be -1 or +1");
    }
    if (!pos || !neg)
        throw DataError("build_design: both classes must be present");

    DesignMatrices d;
    d.N = N;
    d.n = n;
    d.h = half_dim(n);
    d.m = d.h + n;
    d.y = data.y;
    d.S.resize(N, d.h);
    d.B.resize(N, n);
    d.M.reserve(N);

    // G = sum_i [M_i I]'[M_i I] assembled blockwise: the half-vector block
    // sum M_i'M_i, the mixed block sum M_i, and N*I for the linear block
    Mat quad_block = Mat::Zero(d.h, d.h);
    Mat mixed_block = Mat::Zero(n, d.h);
    for (Index i = 0; i < N; ++i) {
        const Vec x = data.X.row(i).transpose();
        d.S.row(i) = qvec(x).transpose();
        d.B.row(i) = data.y[i] * x.transpose();
        d.M.push_back(mat_op(x));
        d.M.back().add_gram(quad_block);
        d.M.back().add_to(mixed_block);
    }
    d.A = d.y.asDiagonal() * d.S;

    d.G = Mat::Zero(d.m, d.m);
    d.G.topLeftCorner(d.h, d.h) = quad_block;
    d.G.topRightCorner(d.h, n) = mixed_block.transpose();
    d.G.bottomLeftCorner(n, d.h) = mixed_block;
    d.G.bottomRightCorner(n, n) =
        static_cast<double>(N) * Mat::Identity(n, n);

    d.AB.resize(N, d.m);
    d.AB.leftCols(d.h) = d.A;
    d.AB.rightCols(n) = d.B;
    return d;
}

double Residuals::max_value() const {
    return std::max(std::max(theta1, theta2), std::max(theta3, theta4));
}

Vec compute_v(const SolverState& s, const DesignMatrices& d, const SolverConfig& cfg) {
    return Vec::Ones(d.N) - d.A * s.w_tilde - d.B * s.b - s.c * d.y -
           s.lambda / cfg.sigma;
}

std::vector<Index> update_working_set(const Vec& v, const SolverConfig& cfg) {
    const ProxParams p(1.0 / cfg.sigma, cfg.C);
    std::vector<Index> T;
    for (Index i = 0; i < v.size(); ++i)
        if (in_working_band(v[i], p))
            T.push_back(i);
    return T;
}

Vec update_u(const Vec& v, const std::vector<Index>& T) {
    Vec u = v;
    for (Index i : T)
        u[i] = 0.0;
    return u;
}

Vec update_wb(const SolverState& s, const DesignMatrices& d, const SolverConfig& cfg,
              const std::vector<Index>& T, FitReport* report) {
    if (T.empty())
        return Vec::Zero(d.m);  // zero right-hand side, ridge keeps it unique

    const double sigma = cfg.sigma;
    const Vec dvec =
        -(s.u + s.c * d.y - Vec::Ones(d.N) + s.lambda / sigma);

    const Index t = static_cast<Index>(T.size());
    Mat KT(t, d.m);
    Vec dT(t);
    for (Index r = 0; r < t; ++r) {
        KT.row(r) = d.AB.row(T[r]);
        dT[r] = dvec[T[r]];
    }

    SpdSystem sys;
    sys.K = d.G + sigma * (KT.transpose() * KT);
    sys.rhs = sigma * (KT.transpose() * dT);
    sys.ridge = cfg.ridge_scale * (1.0 + d.G.trace() / static_cast<double>(d.m));

    bool direct;
    switch (cfg.wb) {
        case WbSolver::Direct: direct = true; break;
        case WbSolver::Cg: direct = false; break;
        default: direct = d.m <= t; break;  // enough rows to make it cheapish
    }
    if (direct) {
        if (report) ++report->direct_solves;
        return solve_direct(sys);
    }
    if (report) ++report->cg_solves;
    return solve_cg(sys, cfg.cg_tol, cfg.cg_max_iter);
}

double update_c(const SolverState& s, const DesignMatrices& d, const SolverConfig& cfg) {
    const Vec r = d.A * s.w_tilde + d.B * s.b - Vec::Ones(d.N) + s.u +
                  s.lambda / cfg.sigma;
    return -d.y.dot(r) / static_cast<double>(d.N);
}

Vec update_lambda(const SolverState& s, const DesignMatrices& d, const SolverConfig& cfg,
                  const std::vector<Index>& T) {
    const Vec r = s.u - Vec::Ones(d.N) + d.A * s.w_tilde + d.B * s.b + s.c * d.y;
    Vec lambda = Vec::Zero(d.N);  // complement is exactly zero
    const double step = cfg.eta * cfg.sigma;
    for (Index i : T)
        lambda[i] = s.lambda[i] + step * r[i];
    return lambda;
}

Residuals residuals(const SolverState& s, const DesignMatrices& d, const SolverConfig& cfg) {
    Residuals res;

    Vec z(d.m);
    z.head(d.h) = s.w_tilde;
    z.tail(d.n) = s.b;

    // gradient of the flatness term plus the duals pulled back through K
    Vec grad = d.G * z;
    for (Index i : s.T)
        grad += s.lambda[i] * d.AB.row(i).transpose();
    res.theta1 = grad.norm() / (1.0 + z.norm());

    double ylam = 0.0;
    for (Index i : s.T)
        ylam += d.y[i] * s.lambda[i];
    res.theta2 = std::abs(ylam) / (1.0 + static_cast<double>(s.T.size()));

    const Vec feas = s.u - Vec::Ones(d.N) + d.A * s.w_tilde + d.B * s.b + s.c * d.y;
    res.theta3 = feas.norm() / std::sqrt(static_cast<double>(d.N));

    const double gamma = 1.0 / cfg.sigma;
    const ProxParams p(gamma, cfg.C);
    const Vec fixed = prox(s.u - gamma * s.lambda, p);
    res.theta4 = (s.u - fixed).norm() / (1.0 + s.u.norm());
    return res;
}

double objective_value(const DesignMatrices& d, const Vec& w_tilde, const Vec& b,
                       double c, double C) {
    Vec z(d.m);
    z.head(d.h) = w_tilde;
    z.tail(d.n) = b;
    const double smooth = 0.5 * z.dot(d.G * z);

    // count misclassification charges at the feasible slacks, not the
    // solver-internal u
    const Vec slack = Vec::Ones(d.N) - d.A * w_tilde - d.B * b - c * d.y;
    int charged = 0;
    for (Index i = 0; i < d.N; ++i)
        charged += zero_one_loss(slack[i]);
    return smooth + C * static_cast<double>(charged);
}

std::pair<QuadraticSurfaceModel, FitReport> fit(const Dataset& data,
                                                const SolverConfig& cfg) {
    if (!(cfg.C > 0.0) || !(cfg.sigma > 0.0) || !(cfg.eta > 0.0) ||
        !(cfg.tol > 0.0) || cfg.max_iter < 0)
        throw std::invalid_argument("fit: invalid solver configuration");

    const auto t0 = std::chrono::steady_clock::now();

    const FeatureScaler scaler = fit_scaler(data.X);
    Dataset scaled;
    scaled.X = scaler.apply(data.X);
    scaled.y = data.y;
    scaled.name = data.name;
    const DesignMatrices d = build_design(scaled);

    SolverState s;
    s.w_tilde = Vec::Zero(d.h);
    s.b = Vec::Zero(d.n);
    s.c = 0.0;
    s.u = Vec::Zero(d.N);
    s.lambda = Vec::Zero(d.N);

    FitReport rep;
    bool converged = false;
    for (int k = 1; k <= cfg.max_iter; ++k) {
        try {
            const Vec v = compute_v(s, d, cfg);
            s.T = update_working_set(v, cfg);
            s.u = update_u(v, s.T);
            const Vec z = update_wb(s, d, cfg, s.T, &rep);  // c, lambda still old
            s.w_tilde = z.head(d.h);
            s.b = z.tail(d.n);
            s.c = update_c(s, d, cfg);          // lambda still old
            s.lambda = update_lambda(s, d, cfg, s.T);
        } catch (const SolverError& e) {
            throw SolverError(std::string(e.what()) + " (iteration " +
                              std::to_string(k) + ")");
        }
        s.k = k;
        rep.residuals = residuals(s, d, cfg);
        if (rep.residuals.max_value() < cfg.tol) {
            converged = true;
            break;
        }
    }
    if (s.k == 0)
        rep.residuals = residuals(s, d, cfg);  // max_iter == 0: report honestly

    rep.converged = converged;
    rep.iterations = s.k;
    rep.u = s.u;
    rep.lambda = s.lambda;
    rep.working_set = s.T;
    for (Index i = 0; i < d.N; ++i)
        if (s.lambda[i] != 0.0)
            rep.sv_indices.push_back(i);
    rep.objective = objective_value(d, s.w_tilde, s.b, s.c, cfg.C);

    QuadraticSurfaceModel m;
    m.W = unhvec(s.w_tilde, d.n);
    m.b = s.b;
    m.c = s.c;
    m.scaler = scaler;
    m.meta.C = cfg.C;
    m.meta.sigma = cfg.sigma;
    m.meta.eta = cfg.eta;
    m.meta.tol = cfg.tol;
    m.meta.max_iter = cfg.max_iter;
    m.meta.converged = converged;
    m.meta.iterations = s.k;
    m.meta.objective = rep.objective;
    m.meta.sv_indices = rep.sv_indices;
    m.meta.dataset = data.name;

    rep.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0).count();
    return {std::move(m), std::move(rep)};
}

}  // namespace qshs
