#include "qshs/linsolve.hpp"

#include <cmath>
#include <string>

namespace qshs {

Vec solve_direct(const SpdSystem& sys) {
    const Index m = sys.K.rows();
    Mat L = sys.K;
    L.diagonal().array() += sys.ridge;

    // in-place lower Cholesky; unpivoted on purpose so a failure names the
    // exact pivot that went non-positive
    for (Index j = 0; j < m; ++j) {
        double d = L(j, j);
        for (Index k = 0; k < j; ++k)
            d -= L(j, k) * L(j, k);
        if (!(d > 0.0) || !std::isfinite(d))
            throw SingularSystemError(
                "solve_direct: non-positive pivot " + std::to_string(d) +
                    " at index " + std::to_string(j),
                static_cast<long>(j));
        const double Ljj = std::sqrt(d);
        L(j, j) = Ljj;
        for (Index i = j + 1; i < m; ++i) {
            double s = L(i, j);
            for (Index k = 0; k < j; ++k)
                s -= L(i, k) * L(j, k);
            L(i, j) = s / Ljj;
        }
    }

    // forward then back substitution
    Vec z = sys.rhs;
    for (Index i = 0; i < m; ++i) {
        for (Index k = 0; k < i; ++k)
            z[i] -= L(i, k) * z[k];
        z[i] /= L(i, i);
    }
    for (Index i = m - 1; i >= 0; --i) {
        for (Index k = i + 1; k < m; ++k)
            z[i] -= L(k, i) * z[k];
        z[i] /= L(i, i);
    }
    return z;
}

Vec solve_cg(const SpdSystem& sys, double tol, int max_iter, CgReport* report) {
    const Index m = sys.K.rows();
    if (max_iter <= 0)
        max_iter = static_cast<int>(m);
    const double stop = tol * (1.0 + sys.rhs.norm());

    Vec z = Vec::Zero(m);
    Vec r = sys.rhs;  // residual of the zero start
    Vec p = r;
    double rr = r.squaredNorm();
    int it = 0;

    while (it < max_iter && std::sqrt(rr) > stop) {
        Vec Kp = sys.K * p;
        Kp += sys.ridge * p;
        const double pKp = p.dot(Kp);
        if (!std::isfinite(pKp) || pKp <= 0.0)
            throw NumericalBreakdownError(
                "solve_cg: curvature p'Kp = " + std::to_string(pKp) +
                " at iteration " + std::to_string(it));
        const double alpha = rr / pKp;
        z += alpha * p;
        r -= alpha * Kp;
        const double rr_next = r.squaredNorm();
        if (!std::isfinite(rr_next))
            throw NumericalBreakdownError(
                "solve_cg: non-finite residual at iteration " + std::to_string(it));
        p = r + (rr_next / rr) * p;
        rr = rr_next;
        ++it;
    }

    if (report) {
        report->iterations = it;
        report->residual_norm = std::sqrt(rr);
        report->converged = std::sqrt(rr) <= stop;
    }
    return z;
}

}  // namespace qshs
