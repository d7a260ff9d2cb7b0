#include "qshs/quadmap.hpp"

namespace qshs {

Vec hvec(const Mat& W) {
    const Index n = W.rows();
    if (W.cols() != n)
        throw std::invalid_argument("hvec: matrix must be square");
    if (W != W.transpose())
        throw std::invalid_argument("hvec: matrix must be symmetric");

    Vec v(half_dim(n));
    Index k = 0;
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j)
            v[k++] = W(i, j);
    return v;
}

Mat unhvec(const Vec& v, Index n) {
    if (v.size() != half_dim(n))
        throw std::invalid_argument("unhvec: length does not match dimension");

    Mat W(n, n);
    Index k = 0;
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) {
            W(i, j) = v[k];
            W(j, i) = v[k];
            ++k;
        }
    return W;
}

Vec qvec(const Vec& x) {
    const Index n = x.size();
    if (n == 0)
        throw std::invalid_argument("qvec: empty vector");

    Vec s(half_dim(n));
    Index k = 0;
    for (Index i = 0; i < n; ++i) {
        s[k++] = 0.5 * x[i] * x[i];      // diagonal slot (i,i)
        for (Index j = i + 1; j < n; ++j)
            s[k++] = x[i] * x[j];        // cross slot (i,j)
    }
    return s;
}

MatOperator mat_op(const Vec& x) {
    const Index n = x.size();
    if (n == 0)
        throw std::invalid_argument("mat_op: empty vector");

    MatOperator M;
    M.n = n;
    M.cols.resize(static_cast<std::size_t>(n) * n);
    M.vals.resize(static_cast<std::size_t>(n) * n);
    // (W*x)_r = sum_j x_j * W(r,j); entry (r,j) of the symmetric matrix
    // lives at slot (min(r,j), max(r,j))
    for (Index r = 0; r < n; ++r) {
        for (Index j = 0; j < n; ++j) {
            const Index lo = r < j ? r : j;
            const Index hi = r < j ? j : r;
            M.cols[r * n + j] = tri_index(n, lo, hi);
            M.vals[r * n + j] = x[j];
        }
    }
    return M;
}

Vec MatOperator::apply(const Vec& h) const {
    Vec out = Vec::Zero(n);
    for (Index r = 0; r < n; ++r) {
        double acc = 0.0;
        for (Index t = 0; t < n; ++t)
            acc += vals[r * n + t] * h[cols[r * n + t]];
        out[r] = acc;
    }
    return out;
}

void MatOperator::add_gram(Mat& gram) const {
    // gram += M'M: every pair of nonzeros within a row contributes
    for (Index r = 0; r < n; ++r) {
        const Index base = r * n;
        for (Index a = 0; a < n; ++a) {
            const double va = vals[base + a];
            if (va == 0.0) continue;
            const Index ca = cols[base + a];
            for (Index b2 = 0; b2 < n; ++b2)
                gram(ca, cols[base + b2]) += va * vals[base + b2];
        }
    }
}

void MatOperator::add_to(Mat& colsum) const {
    for (Index r = 0; r < n; ++r)
        for (Index t = 0; t < n; ++t)
            colsum(r, cols[r * n + t]) += vals[r * n + t];
}

Mat MatOperator::to_dense() const {
    Mat D = Mat::Zero(n, width());
    for (Index r = 0; r < n; ++r)
        for (Index t = 0; t < n; ++t)
            D(r, cols[r * n + t]) += vals[r * n + t];
    return D;
}

}  // namespace qshs
