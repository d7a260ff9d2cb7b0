#include "qshs/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <string_view>

namespace qshs {

namespace {

// mt19937_64 is bit-exact across implementations; the distributions are
// not, so uniforms come straight from the top 53 bits
struct UniformRng {
    std::mt19937_64 eng;
    explicit UniformRng(std::uint64_t seed) : eng(seed) {}

    double unit() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t r;
        do { r = eng(); } while (r >= limit);
        return r % n;
    }
};

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            cells.emplace_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return cells;
}

// canonical surfaces with their sampling geometry. The box/cap constants
// are tuned so that training on generated data converges quickly: both
// classes are sampled in shells near the surface (wide margins relative
// to the box), which keeps the learned coefficients shallow and the dual
// variables small. See gen_synthetic in the header for the band rule.
struct SurfaceDef {
    double box;   // features drawn uniformly from [-box, box]^2
    double cap;   // accept while t*g(x) <= cap*margin
    double (*g)(double, double);
};

SurfaceDef surface_def(SurfaceKind kind) {
    switch (kind) {
        case SurfaceKind::Line:
            return {0.25, 2.5, [](double x1, double x2) { return x2 - x1; }};
        case SurfaceKind::Parabola:
            return {1.0, 1.4, [](double x1, double x2) { return x2 - x1 * x1; }};
        case SurfaceKind::Circle:
            return {1.0, 1.3, [](double x1, double x2) { return x1 * x1 + x2 * x2 - 0.5; }};
        case SurfaceKind::Hyperbola:
            return {1.0, 1.4, [](double x1, double x2) { return x1 * x1 - x2 * x2 - 0.1; }};
    }
    throw DataError("unknown surface kind");
}

}  // namespace

const char* to_string(SurfaceKind kind) {
    switch (kind) {
        case SurfaceKind::Line: return "line";
        case SurfaceKind::Parabola: return "parabola";
        case SurfaceKind::Circle: return "circle";
        case SurfaceKind::Hyperbola: return "hyperbola";
    }
    return "?";
}

SurfaceKind surface_kind_from(const std::string& name) {
    if (name == "line") return SurfaceKind::Line;
    if (name == "parabola") return SurfaceKind::Parabola;
    if (name == "circle") return SurfaceKind::Circle;
    if (name == "hyperbola") return SurfaceKind::Hyperbola;
    throw DataError("unknown surface kind '" + name + "'");
}

Mat FeatureScaler::apply(const Mat& X) const {
    if (X.cols() != dim())
        throw DataError("scaler: feature count mismatch");
    Mat out(X.rows(), X.cols());
    for (Index j = 0; j < X.cols(); ++j) {
        const double range = max[j] - min[j];
        if (range == 0.0)
            out.col(j).setZero();  // constant feature: keep it inert
        else
            out.col(j) = (2.0 / range) * (X.col(j).array() - min[j]) - 1.0;
    }
    return out;
}

Vec FeatureScaler::apply(const Vec& x) const {
    if (x.size() != dim())
        throw DataError("scaler: feature count mismatch");
    Vec out(x.size());
    for (Index j = 0; j < x.size(); ++j) {
        const double range = max[j] - min[j];
        out[j] = range == 0.0 ? 0.0 : 2.0 * (x[j] - min[j]) / range - 1.0;
    }
    return out;
}

FeatureScaler fit_scaler(const Mat& X) {
    if (X.rows() == 0)
        throw DataError("fit_scaler: empty matrix");
    FeatureScaler s;
    s.min = X.colwise().minCoeff();
    s.max = X.colwise().maxCoeff();
    return s;
}

Dataset load_csv(const std::string& path, const CsvOptions& opt) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open '" + path + "'");

    for (const auto& kv : opt.label_map)
        if (kv.second != -1 && kv.second != 1)
            throw DataError("label map must target -1 or +1");

    std::vector<std::vector<double>> rows;
    std::vector<double> labels;
    std::vector<std::string> header;
    Index ncols = -1;
    int label_at = -1;
    std::string line;
    std::size_t lineno = 0;
    bool saw_data = false;

    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#')
            continue;
        auto cells = split_csv_line(sv);

        if (!saw_data) {
            // a first row with any non-numeric cell is a header
            bool numeric = true;
            double tmp;
            for (auto& c : cells)
                if (!parse_double(c, tmp)) { numeric = false; break; }
            if (!numeric && header.empty()) {
                header = cells;
                continue;
            }
        }

        if (ncols < 0) {
            ncols = static_cast<Index>(cells.size());
            if (ncols < 2)
                throw DataError("need at least one feature and a label column");
            label_at = opt.label_column < 0 ? static_cast<int>(ncols) - 1
                                            : opt.label_column;
            if (label_at < 0 || label_at >= ncols)
                throw DataError("label column out of range");
            if (!header.empty() && static_cast<Index>(header.size()) != ncols)
                throw DataError("header width does not match data rows");
        }
        if (static_cast<Index>(cells.size()) != ncols)
            throw DataError("ragged row at line " + std::to_string(lineno));

        std::vector<double> feat;
        feat.reserve(ncols - 1);
        double label = 0.0;
        for (Index j = 0; j < ncols; ++j) {
            if (static_cast<int>(j) == label_at) {
                const std::string& c = cells[j];
                if (!opt.label_map.empty()) {
                    auto it = opt.label_map.find(c);
                    if (it == opt.label_map.end())
                        throw DataError("line " + std::to_string(lineno) +
                                        ": label '" + c + "' not in the mapping");
                    label = it->second;
                } else {
                    double v;
                    if (!parse_double(c, v) || (v != 1.0 && v != -1.0))
                        throw DataError("line " + std::to_string(lineno) +
                                        ": label '" + c +
                                        "' is not +-1; supply a label mapping");
                    label = v;
                }
            } else {
                double v;
                if (!parse_double(cells[j], v))
                    throw DataError("line " + std::to_string(lineno) +
                                    ": non-numeric cell '" + cells[j] + "'");
                if (!std::isfinite(v))
                    throw DataError("line " + std::to_string(lineno) +
                                    ": non-finite value");
                feat.push_back(v);
            }
        }
        rows.push_back(std::move(feat));
        labels.push_back(label);
        saw_data = true;
    }

    Dataset d;
    d.name = path;
    const Index N = static_cast<Index>(rows.size());
    const Index n = N > 0 ? static_cast<Index>(rows[0].size()) : 0;
    d.X.resize(N, n);
    d.y.resize(N);
    for (Index i = 0; i < N; ++i) {
        for (Index j = 0; j < n; ++j)
            d.X(i, j) = rows[i][j];
        d.y[i] = labels[i];
    }
    if (!header.empty()) {
        for (Index j = 0; j < static_cast<Index>(header.size()); ++j)
            if (static_cast<int>(j) != label_at)
                d.feature_names.push_back(header[j]);
    }
    return d;
}

void save_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: stable newlines
    if (!out)
        throw DataError("cannot write '" + path + "'");
    for (Index i = 0; i < data.size(); ++i) {
        for (Index j = 0; j < data.dim(); ++j)
            out << format_double(data.X(i, j)) << ',';
        out << (data.y[i] > 0 ? "1" : "-1") << '\n';
    }
    if (!out)
        throw DataError("write failed for '" + path + "'");
}

Dataset gen_synthetic(SurfaceKind kind, Index n_samples, double margin,
                      std::uint64_t seed) {
    if (n_samples < 4)
        throw DataError("gen_synthetic: need at least 4 samples");
    if (!(margin > 0.0))
        throw DataError("gen_synthetic: margin must be positive");

    const SurfaceDef def = surface_def(kind);
    UniformRng rng(seed);
    Dataset d;
    d.X.resize(n_samples, 2);
    d.y.resize(n_samples);
    for (Index i = 0; i < n_samples; ++i) {
        const double t = i % 2 == 0 ? 1.0 : -1.0;
        bool placed = false;
        for (int attempt = 0; attempt < 1000000; ++attempt) {
            const double x1 = rng.range(-def.box, def.box);
            const double x2 = rng.range(-def.box, def.box);
            const double gv = t * def.g(x1, x2);
            if (gv >= margin && gv <= def.cap * margin) {
                d.X(i, 0) = x1;
                d.X(i, 1) = x2;
                placed = true;
                break;
            }
        }
        if (!placed)
            throw DataError("gen_synthetic: could not place a sample; margin " +
                            format_double(margin) + " too large for the " +
                            std::string(to_string(kind)) + " geometry");
        d.y[i] = t;
    }
    d.name = std::string(to_string(kind)) + "-n" + std::to_string(n_samples) +
             "-m" + format_double(margin) + "-s" + std::to_string(seed);
    d.gen = GenMeta{kind, margin, seed};
    return d;
}

Dataset inject_noise(const Dataset& data, Index label_flips, Index outliers,
                     std::uint64_t seed) {
    if (label_flips < 0 || outliers < 0)
        throw DataError("inject_noise: negative counts");
    if (label_flips > data.size())
        throw DataError("inject_noise: more flips than samples");
    if (outliers > 0 && !data.gen)
        throw DataError("inject_noise: outlier placement needs generator "
                        "provenance (surface and margin unknown)");

    UniformRng rng(seed);
    Dataset out = data;
    out.modified.clear();

    // partial Fisher-Yates: the first label_flips slots become the flips
    std::vector<Index> idx(data.size());
    for (Index i = 0; i < data.size(); ++i) idx[i] = i;
    for (Index i = 0; i < label_flips; ++i) {
        const Index j =
            i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(data.size() - i)));
        std::swap(idx[i], idx[j]);
        out.y[idx[i]] = -out.y[idx[i]];
        out.modified.push_back(idx[i]);
    }

    if (outliers > 0) {
        const SurfaceDef def = surface_def(data.gen->kind);
        const double margin = data.gen->margin;
        const Index N0 = out.size();
        out.X.conservativeResize(N0 + outliers, Eigen::NoChange);
        out.y.conservativeResize(N0 + outliers);
        for (Index o = 0; o < outliers; ++o) {
            // label t, but the point sits deep where the surface votes -t
            const double t = o % 2 == 0 ? 1.0 : -1.0;
            bool placed = false;
            for (int attempt = 0; attempt < 1000000; ++attempt) {
                const double x1 = rng.range(-def.box, def.box);
                const double x2 = rng.range(-def.box, def.box);
                if (-t * def.g(x1, x2) >= 3.0 * margin) {
                    out.X(N0 + o, 0) = x1;
                    out.X(N0 + o, 1) = x2;
                    placed = true;
                    break;
                }
            }
            if (!placed)
                throw DataError("inject_noise: no room for an outlier 3x the "
                                "margin deep on the wrong side");
            out.y[N0 + o] = t;
            out.modified.push_back(N0 + o);
        }
    }

    out.name = data.name + "+noise-f" + std::to_string(label_flips) + "-o" +
               std::to_string(outliers) + "-s" + std::to_string(seed);
    return out;
}

}  // namespace qshs
