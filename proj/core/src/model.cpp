#include "qshs/model.hpp"

#include "qshs/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace qshs {

using json = nlohmann::json;

double QuadraticSurfaceModel::decision_value(const Vec& x_scaled) const {
    if (x_scaled.size() != dim())
        throw DataError("decision_value: dimension mismatch");
    return 0.5 * x_scaled.dot(W * x_scaled) + b.dot(x_scaled) + c;
}

double QuadraticSurfaceModel::decision_raw(const Vec& x_raw) const {
    return decision_value(scaler.apply(x_raw));
}

int QuadraticSurfaceModel::predict(const Vec& x_raw) const {
    return decision_raw(x_raw) >= 0.0 ? 1 : -1;  // f == 0 counts as +1
}

Vec QuadraticSurfaceModel::decision_values(const Mat& X_raw) const {
    const Mat Xs = scaler.apply(X_raw);
    Vec out(Xs.rows());
    for (Index i = 0; i < Xs.rows(); ++i)
        out[i] = decision_value(Xs.row(i).transpose());
    return out;
}

Vec QuadraticSurfaceModel::predict_many(const Mat& X_raw) const {
    Vec f = decision_values(X_raw);
    for (Index i = 0; i < f.size(); ++i)
        f[i] = f[i] >= 0.0 ? 1.0 : -1.0;
    return f;
}

FeatureReport feature_report(const QuadraticSurfaceModel& m) {
    const Index n = m.dim();
    FeatureReport rep;
    rep.ranked.reserve(n);
    for (Index i = 0; i < n; ++i)
        rep.ranked.emplace_back(i, std::abs(m.W(i, i)) + std::abs(m.b[i]));
    std::stable_sort(rep.ranked.begin(), rep.ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    rep.interactions = m.W.cwiseAbs();
    rep.interactions.diagonal().setZero();
    return rep;
}

namespace {

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Vec vec_from_json(const json& a) {
    Vec v(a.size());
    Index i = 0;
    for (const auto& x : a) v[i++] = x.get<double>();
    return v;
}

}  // namespace

void save_model(const QuadraticSurfaceModel& m, std::ostream& out) {
    json doc;
    doc["version"] = 1;
    doc["n"] = m.dim();
    doc["hvec_w"] = vec_to_json(hvec(m.W));
    doc["b"] = vec_to_json(m.b);
    doc["c"] = m.c;
    doc["scaler_min"] = vec_to_json(m.scaler.min);
    doc["scaler_max"] = vec_to_json(m.scaler.max);
    json meta;
    meta["C"] = m.meta.C;
    meta["sigma"] = m.meta.sigma;
    meta["eta"] = m.meta.eta;
    meta["tol"] = m.meta.tol;
    meta["max_iter"] = m.meta.max_iter;
    meta["converged"] = m.meta.converged;
    meta["iterations"] = m.meta.iterations;
    meta["objective"] = m.meta.objective;
    meta["sv_indices"] = m.meta.sv_indices;
    meta["dataset"] = m.meta.dataset;
    doc["training_meta"] = meta;
    out << doc.dump(2) << '\n';
}

void save_model(const QuadraticSurfaceModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write '" + path + "'");
    save_model(m, out);
    if (!out)
        throw DataError("write failed for '" + path + "'");
}

QuadraticSurfaceModel load_model(std::istream& in) {
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError(std::string("model parse error: ") + e.what());
    }
    try {
        const int version = doc.at("version").get<int>();
        if (version != 1)
            throw DataError("unsupported model version " + std::to_string(version));
        const Index n = doc.at("n").get<Index>();
        QuadraticSurfaceModel m;
        const Vec w = vec_from_json(doc.at("hvec_w"));
        if (w.size() != half_dim(n))
            throw DataError("model: hvec_w length does not match n");
        m.W = unhvec(w, n);
        m.b = vec_from_json(doc.at("b"));
        if (m.b.size() != n)
            throw DataError("model: b length does not match n");
        m.c = doc.at("c").get<double>();
        m.scaler.min = vec_from_json(doc.at("scaler_min"));
        m.scaler.max = vec_from_json(doc.at("scaler_max"));
        if (m.scaler.min.size() != n || m.scaler.max.size() != n)
            throw DataError("model: scaler length does not match n");
        const json& meta = doc.at("training_meta");
        m.meta.C = meta.at("C").get<double>();
        m.meta.sigma = meta.at("sigma").get<double>();
        m.meta.eta = meta.at("eta").get<double>();
        m.meta.tol = meta.at("tol").get<double>();
        m.meta.max_iter = meta.at("max_iter").get<int>();
        m.meta.converged = meta.at("converged").get<bool>();
        m.meta.iterations = meta.at("iterations").get<int>();
        m.meta.objective = meta.at("objective").get<double>();
        m.meta.sv_indices = meta.at("sv_indices").get<std::vector<Index>>();
        m.meta.dataset = meta.at("dataset").get<std::string>();
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("model field error: ") + e.what());
    }
}

QuadraticSurfaceModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open '" + path + "'");
    return load_model(in);
}

}  // namespace qshs
