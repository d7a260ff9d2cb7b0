#pragma once

// Dataset container, [-1,1] min-max scaling, CSV I/O, the four synthetic
// 2-D generators (line / parabola / circle / hyperbola), and label-noise /
// outlier injection.
//
// Generated data is sampled in a band around the canonical surface: a point
// x with tentative label t is kept when  margin <= t*g(x) <= cap*margin,
// so both classes sit in shells near the boundary and separability holds
// by construction with a certificate (min over points of t*g >= margin).
// Labels alternate +1/-1 for exact class balance. Identical
// (kind, n, margin, seed) produce byte-identical datasets: the engine is
// the fully specified mt19937_64 and uniforms are mapped from raw 53-bit
// draws rather than std::uniform_real_distribution (whose output is
// implementation-defined).

#include "qshs/errors.hpp"
#include "qshs/quadmap.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qshs {

enum class SurfaceKind { Line, Parabola, Circle, Hyperbola };

const char* to_string(SurfaceKind kind);
SurfaceKind surface_kind_from(const std::string& name);  // throws DataError

// provenance carried by generated datasets; outlier injection needs the
// surface and margin to place points "deep" on the wrong side
struct GenMeta {
    SurfaceKind kind = SurfaceKind::Line;
    double margin = 0.0;
    std::uint64_t seed = 0;
};

struct Dataset {
    Mat X;  // N x n
    Vec y;  // entries in {-1,+1}
    std::string name;
    std::vector<std::string> feature_names;  // may be empty
    std::optional<GenMeta> gen;              // set by gen_synthetic
    std::vector<Index> modified;             // rows touched by inject_noise

    Index size() const { return X.rows(); }
    Index dim() const { return X.cols(); }
};

// Per-feature affine map onto [-1,1] fitted on training data. Constant
// features map to 0; out-of-range values extrapolate (no clamping, which
// would warp the quadratic geometry at test time).
struct FeatureScaler {
    Vec min, max;

    Index dim() const { return min.size(); }
    Mat apply(const Mat& X) const;
    Vec apply(const Vec& x) const;
};

FeatureScaler fit_scaler(const Mat& X);

struct CsvOptions {
    int label_column = -1;                  // -1 means last column
    std::map<std::string, int> label_map;   // raw label text -> -1/+1;
                                            // empty: only +-1 accepted
};

// Comma-separated numeric rows, one label column; '#' lines are comments;
// a leading non-numeric row is taken as a header. Throws DataError on
// ragged rows, non-numeric cells, or labels the mapping cannot place.
Dataset load_csv(const std::string& path, const CsvOptions& opt = {});

// Feature columns then label; shortest round-trip float formatting, so
// save/load is lossless and byte-stable.
void save_csv(const Dataset& data, const std::string& path);

// 2-D points labeled by the canonical surface of `kind`; see the band
// sampling note above. n_samples >= 4, margin > 0.
Dataset gen_synthetic(SurfaceKind kind, Index n_samples, double margin,
                      std::uint64_t seed);

// Flips `label_flips` distinct labels and appends `outliers` points placed
// on the wrong side of the generating surface with |surface value| at
// least 3x the generator margin. Outlier placement therefore requires
// generator provenance (gen_synthetic output); flips work on any dataset.
// Touched row indices are recorded in .modified.
Dataset inject_noise(const Dataset& data, Index label_flips, Index outliers,
                     std::uint64_t seed);

}  // namespace qshs
