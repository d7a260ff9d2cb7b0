#pragma once

// Vectorization machinery for symmetric matrices and quadratic features.
//
// A symmetric n x n matrix W is flattened into a half-vector of its upper
// triangle, row major: (0,0),(0,1),...,(0,n-1),(1,1),...,(n-1,n-1). Every
// routine in this header uses that one ordering; mixing orderings anywhere
// would silently break the identities below, so the slot arithmetic lives
// in exactly one place (tri_index).
//
// The three maps and the identities they satisfy:
//   hvec(W)  : upper triangle of W as a vector of length n(n+1)/2
//   mat_op(x): the n x n(n+1)/2 row-sparse matrix with mat_op(x)*hvec(W) == W*x
//   qvec(x)  : quadratic features with qvec(x).dot(hvec(W)) == 0.5*x'Wx
//              (diagonal slots carry 0.5*x_i^2, cross slots carry x_i*x_j)

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace qshs {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

// number of upper-triangle slots of an n x n symmetric matrix
constexpr Index half_dim(Index n) { return n * (n + 1) / 2; }

// flat slot of entry (i,j) with i <= j in the row-major upper triangle
constexpr Index tri_index(Index n, Index i, Index j) {
    return i * n - i * (i - 1) / 2 + (j - i);
}

// W must be exactly symmetric (callers build symmetric storage; no tolerance).
Vec hvec(const Mat& W);

// Inverse of hvec: rebuilds the symmetric matrix. v.size() must be n(n+1)/2.
Mat unhvec(const Vec& v, Index n);

// Quadratic feature vector of x.
Vec qvec(const Vec& x);

// Row-sparse form of the matrix operator of x. Row r holds n structural
// nonzeros: coefficient x_j sits at slot (min(r,j), max(r,j)) so that
// apply(hvec(W)) reproduces W*x. Stored as flat (column, value) pairs,
// n per row, to keep the Gram accumulation in the solver O(n^3) per
// sample instead of O(n^5) dense.
struct MatOperator {
    Index n = 0;
    std::vector<Index> cols;    // n*n entries, row major, n per row
    std::vector<double> vals;   // parallel to cols

    Index rows() const { return n; }
    Index width() const { return half_dim(n); }

    // y = M * h, h of length n(n+1)/2
    Vec apply(const Vec& h) const;

    // gram += M' * M   (gram is half_dim x half_dim)
    void add_gram(Mat& gram) const;

    // colsum += M      (colsum is n x half_dim); used for the mixed block
    // of the solver's normal matrix
    void add_to(Mat& colsum) const;

    Mat to_dense() const;
};

MatOperator mat_op(const Vec& x);

}  // namespace qshs
