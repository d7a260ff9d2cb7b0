#pragma once

// The trained quadratic-surface classifier: f(x) = 0.5*x'Wx + b'x + c on
// scaled features, sign(f) as the label (ties to +1). The scaler travels
// with the model so prediction takes raw-space inputs; omitting it is the
// classic way to get silent train/serve skew.

#include "qshs/data.hpp"
#include "qshs/quadmap.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qshs {

// training echo serialized with the model, enough to audit a fit
struct TrainingMeta {
    double C = 0.0, sigma = 0.0, eta = 0.0, tol = 0.0;
    int max_iter = 0;
    bool converged = false;
    int iterations = 0;
    double objective = 0.0;
    std::vector<Index> sv_indices;  // into the training set
    std::string dataset;
};

struct QuadraticSurfaceModel {
    Mat W;  // n x n symmetric
    Vec b;
    double c = 0.0;
    FeatureScaler scaler;
    TrainingMeta meta;

    Index dim() const { return b.size(); }

    // x already in scaled space
    double decision_value(const Vec& x_scaled) const;

    // raw-space entry points: scale, then evaluate / take the sign
    double decision_raw(const Vec& x_raw) const;
    int predict(const Vec& x_raw) const;  // -1 or +1; f == 0 -> +1

    // rows of X_raw are samples
    Vec decision_values(const Mat& X_raw) const;
    Vec predict_many(const Mat& X_raw) const;  // entries in {-1,+1}
};

// Per-feature contribution |w_ii| + |b_i|, ranked descending (ties by
// ascending feature index), plus the |w_ij| off-diagonal interaction
// strengths (zero diagonal).
struct FeatureReport {
    std::vector<std::pair<Index, double>> ranked;
    Mat interactions;
};

FeatureReport feature_report(const QuadraticSurfaceModel& m);

// Versioned JSON document: {version, n, hvec_w, b, c, scaler_min,
// scaler_max, training_meta}. Doubles round-trip exactly.
void save_model(const QuadraticSurfaceModel& m, std::ostream& out);
void save_model(const QuadraticSurfaceModel& m, const std::string& path);
QuadraticSurfaceModel load_model(std::istream& in);
QuadraticSurfaceModel load_model(const std::string& path);

}  // namespace qshs
