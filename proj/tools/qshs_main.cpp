// qshs: train / evaluate / inspect quadratic-surface SVM classifiers with
// the 0-1 loss.
//
// Subcommands: gen, train, predict, cv, grid, boundary, rerun. Every
// command writes a manifest next to its primary output recording the
// resolved arguments, input hashes and artifact paths; `rerun` replays a
// manifest and regenerates byte-identical artifacts (timing fields aside).
//
// Exit codes: 0 ok, 2 usage, 3 data error, 4 solver error.

#include "qshs/admm.hpp"
#include "qshs/data.hpp"
#include "qshs/errors.hpp"
#include "qshs/eval.hpp"
#include "qshs/model.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;
using namespace qshs;

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot hash '" + path + "': open failed");
    std::uint64_t h = 1469598103934665603ULL;
    char chunk[4096];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(chunk[i]);
            h *= 1099511628211ULL;
        }
        if (!in) break;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc;
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

// manifest goes next to the primary artifact
void write_manifest(const std::string& command,
                    const std::vector<std::string>& argv,
                    const json& parameters,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& artifacts,
                    const std::string& primary_out) {
    json doc;
    doc["command"] = command;
    doc["argv"] = argv;
    doc["parameters"] = parameters;
    json in_hashes = json::object();
    for (const auto& p : inputs)
        in_hashes[p] = fnv1a64_file(p);
    doc["inputs"] = in_hashes;
    doc["artifacts"] = artifacts;
    doc["timestamp"] = iso_timestamp();

    const std::string path = primary_out + ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write manifest '" + path + "'");
    out << doc.dump(2) << '\n';
}

std::map<std::string, int> parse_label_map(const std::string& spec) {
    std::map<std::string, int> map;
    if (spec.empty())
        return map;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw DataError("label map entry '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        if (val != "1" && val != "+1" && val != "-1")
            throw DataError("label map value '" + val + "' must be -1 or +1");
        map[key] = val == "-1" ? -1 : 1;
    }
    return map;
}

std::vector<double> parse_value_list(const std::string& spec) {
    std::vector<double> vals;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v;
        const char* first = item.data();
        const char* last = item.data() + item.size();
        auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last)
            throw DataError("bad numeric list entry '" + item + "'");
        vals.push_back(v);
    }
    if (vals.empty())
        throw DataError("empty value list");
    return vals;
}

void write_results_csv(const std::string& path, const std::string& dataset,
                       const std::vector<EvalResult>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write '" + path + "'");
    out << "dataset,method,mACC,stdACC,mNSV,stdNSV,cpu_s,C,sigma\n";
    for (const auto& r : rows) {
        out << dataset << ",qssvm01," << format_double(r.mean_acc) << ','
            << format_double(r.std_acc) << ',' << format_double(r.mean_nsv)
            << ',' << format_double(r.std_nsv) << ','
            << format_double(r.cpu_seconds) << ',' << format_double(r.C) << ','
            << format_double(r.sigma) << '\n';
    }
}

json result_to_json(const EvalResult& r) {
    json j;
    j["C"] = r.C;
    j["sigma"] = r.sigma;
    j["mACC"] = r.mean_acc;
    j["stdACC"] = r.std_acc;
    j["mNSV"] = r.mean_nsv;
    j["stdNSV"] = r.std_nsv;
    j["cpu_s"] = r.cpu_seconds;
    json folds = json::array();
    for (const auto& f : r.folds) {
        json fj;
        fj["repeat"] = f.repeat;
        fj["fold"] = f.fold;
        fj["acc"] = f.acc;
        fj["nsv"] = f.nsv;
        fj["converged"] = f.converged;
        fj["seconds"] = f.seconds;
        folds.push_back(fj);
    }
    j["folds"] = folds;
    return j;
}

struct MarchSegment {
    double ax, ay, bx, by;
};

// zero level set of the sampled decision surface, one linear segment per
// crossed cell (saddles split in a fixed order, which is fine for plots)
std::vector<MarchSegment> marching_squares(const std::vector<double>& xs,
                                           const std::vector<double>& ys,
                                           const Mat& f) {
    std::vector<MarchSegment> segs;
    auto lerp = [](double a, double b, double fa, double fb) {
        return a + (b - a) * (fa / (fa - fb));
    };
    for (Index j = 0; j + 1 < static_cast<Index>(ys.size()); ++j) {
        for (Index i = 0; i + 1 < static_cast<Index>(xs.size()); ++i) {
            const double f00 = f(i, j), f10 = f(i + 1, j);
            const double f01 = f(i, j + 1), f11 = f(i + 1, j + 1);
            struct Pt { double x, y; };
            std::vector<Pt> cross;
            if ((f00 >= 0) != (f10 >= 0))
                cross.push_back({lerp(xs[i], xs[i + 1], f00, f10), ys[j]});
            if ((f10 >= 0) != (f11 >= 0))
                cross.push_back({xs[i + 1], lerp(ys[j], ys[j + 1], f10, f11)});
            if ((f01 >= 0) != (f11 >= 0))
                cross.push_back({lerp(xs[i], xs[i + 1], f01, f11), ys[j + 1]});
            if ((f00 >= 0) != (f01 >= 0))
                cross.push_back({xs[i], lerp(ys[j], ys[j + 1], f00, f01)});
            if (cross.size() == 2)
                segs.push_back({cross[0].x, cross[0].y, cross[1].x, cross[1].y});
            else if (cross.size() == 4) {
                segs.push_back({cross[0].x, cross[0].y, cross[1].x, cross[1].y});
                segs.push_back({cross[2].x, cross[2].y, cross[3].x, cross[3].y});
            }
        }
    }
    return segs;
}

void write_boundary_svg(const std::string& path, const Dataset* samples,
                        const std::vector<char>& is_sv,
                        const std::vector<MarchSegment>& segs,
                        double x_lo, double x_hi, double y_lo, double y_hi) {
    const double W = 640, H = 640, pad = 24;
    auto sx = [&](double x) { return pad + (x - x_lo) / (x_hi - x_lo) * (W - 2 * pad); };
    auto sy = [&](double y) { return H - pad - (y - y_lo) / (y_hi - y_lo) * (H - 2 * pad); };

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& s : segs)
        out << "<line x1=\"" << sx(s.ax) << "\" y1=\"" << sy(s.ay) << "\" x2=\""
            << sx(s.bx) << "\" y2=\"" << sy(s.by)
            << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    if (samples) {
        for (Index i = 0; i < samples->size(); ++i) {
            const bool svp = i < static_cast<Index>(is_sv.size()) && is_sv[i];
            out << "<circle cx=\"" << sx(samples->X(i, 0)) << "\" cy=\""
                << sy(samples->X(i, 1)) << "\" r=\"" << (svp ? 5 : 3)
                << "\" fill=\"" << (samples->y[i] > 0 ? "#1f77b4" : "#d62728")
                << "\"";
            if (svp)
                out << " stroke=\"black\" stroke-width=\"1.5\"";
            out << "/>\n";
        }
    }
    out << "</svg>\n";
}

int run(const std::vector<std::string>& forward_args);

// ---- command implementations ------------------------------------------

int cmd_gen(const std::vector<std::string>& argv, const std::string& kind,
            Index n, double margin, std::uint64_t seed, Index flips,
            Index outliers, const std::string& out_path) {
    Dataset d = gen_synthetic(surface_kind_from(kind), n, margin, seed);
    if (flips > 0 || outliers > 0)
        d = inject_noise(d, flips, outliers, seed + 1);

    if (out_path.empty()) {
        // no output file: rows on stdout, nothing to record a manifest for
        for (Index i = 0; i < d.size(); ++i) {
            for (Index j = 0; j < d.dim(); ++j)
                std::cout << format_double(d.X(i, j)) << ',';
            std::cout << (d.y[i] > 0 ? "1" : "-1") << '\n';
        }
        return 0;
    }
    save_csv(d, out_path);

    json params;
    params["kind"] = kind;
    params["n"] = n;
    params["margin"] = margin;
    params["seed"] = seed;
    params["flips"] = flips;
    params["outliers"] = outliers;
    params["out"] = out_path;
    if (!d.modified.empty())
        params["modified_rows"] = d.modified;
    write_manifest("gen", argv, params, {}, {out_path}, out_path);
    std::cerr << "wrote " << d.size() << " rows to " << out_path << "\n";
    return 0;
}

SolverConfig solver_config_from(double C, double sigma, double eta,
                                int max_iter, double tol, double cg_tol,
                                int cg_max_iter, const std::string& branch) {
    SolverConfig cfg;
    cfg.C = C;
    cfg.sigma = sigma;
    cfg.eta = eta;
    cfg.max_iter = max_iter;
    cfg.tol = tol;
    cfg.cg_tol = cg_tol;
    cfg.cg_max_iter = cg_max_iter;
    if (branch == "direct")
        cfg.wb = WbSolver::Direct;
    else if (branch == "cg")
        cfg.wb = WbSolver::Cg;
    else
        cfg.wb = WbSolver::Auto;
    return cfg;
}

int cmd_train(const std::vector<std::string>& argv, const std::string& data_path,
              const CsvOptions& csv, const SolverConfig& cfg,
              const std::string& out_path) {
    const Dataset data = load_csv(data_path, csv);
    auto [model, report] = fit(data, cfg);
    save_model(model, out_path);

    const Vec pred = model.predict_many(data.X);
    std::cout << "converged: " << (report.converged ? "true" : "false") << "\n"
              << "iterations: " << report.iterations << "\n"
              << "theta1: " << report.residuals.theta1 << "\n"
              << "theta2: " << report.residuals.theta2 << "\n"
              << "theta3: " << report.residuals.theta3 << "\n"
              << "theta4: " << report.residuals.theta4 << "\n"
              << "objective: " << report.objective << "\n"
              << "nsv: " << nsv(report) << "\n"
              << "train_acc: " << accuracy(pred, data.y) << "\n"
              << "seconds: " << report.seconds << "\n";

    json params;
    params["data"] = data_path;
    params["C"] = cfg.C;
    params["sigma"] = cfg.sigma;
    params["eta"] = cfg.eta;
    params["max_iter"] = cfg.max_iter;
    params["tol"] = cfg.tol;
    params["out"] = out_path;
    write_manifest("train", argv, params, {data_path}, {out_path}, out_path);
    return 0;
}

int cmd_predict(const std::vector<std::string>& argv, const std::string& model_path,
                const std::string& data_path, const CsvOptions& csv,
                const std::string& out_path) {
    const QuadraticSurfaceModel model = load_model(model_path);
    const Dataset data = load_csv(data_path, csv);
    if (data.size() > 0 && data.dim() != model.dim())
        throw DataError("predict: model expects " + std::to_string(model.dim()) +
                        " features, data has " + std::to_string(data.dim()));

    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw DataError("cannot write '" + out_path + "'");
    out << "prediction,decision\n";
    if (data.size() > 0) {
        const Vec f = model.decision_values(data.X);
        for (Index i = 0; i < f.size(); ++i)
            out << (f[i] >= 0.0 ? "1" : "-1") << ',' << format_double(f[i]) << '\n';
        const Vec pred = model.predict_many(data.X);
        std::cerr << "accuracy vs file labels: " << accuracy(pred, data.y) << "\n";
    }
    out.close();

    json params;
    params["model"] = model_path;
    params["data"] = data_path;
    params["out"] = out_path;
    write_manifest("predict", argv, params, {model_path, data_path}, {out_path},
                   out_path);
    return 0;
}

int cmd_cv(const std::vector<std::string>& argv, const std::string& data_path,
           const CsvOptions& csv, const CvPlan& plan, const SolverConfig& cfg,
           const std::string& out_prefix) {
    const Dataset data = load_csv(data_path, csv);
    const EvalResult res = cross_validate(data, plan, cfg);

    const std::string csv_path = out_prefix + ".csv";
    const std::string json_path = out_prefix + ".json";
    write_results_csv(csv_path, data.name, {res});
    json doc;
    doc["dataset"] = data.name;
    doc["method"] = "qssvm01";
    doc["plan"] = {{"folds", plan.folds}, {"repeats", plan.repeats}, {"seed", plan.seed}};
    doc["result"] = result_to_json(res);
    std::ofstream jout(json_path, std::ios::binary);
    if (!jout)
        throw DataError("cannot write '" + json_path + "'");
    jout << doc.dump(2) << '\n';

    std::cout << "mACC: " << res.mean_acc << " +- " << res.std_acc << "\n"
              << "mNSV: " << res.mean_nsv << " +- " << res.std_nsv << "\n"
              << "cpu_s: " << res.cpu_seconds << "\n";

    json params;
    params["data"] = data_path;
    params["folds"] = plan.folds;
    params["repeats"] = plan.repeats;
    params["seed"] = plan.seed;
    params["C"] = cfg.C;
    params["sigma"] = cfg.sigma;
    params["out"] = out_prefix;
    write_manifest("cv", argv, params, {data_path}, {csv_path, json_path},
                   out_prefix);
    return 0;
}

int cmd_grid(const std::vector<std::string>& argv, const std::string& data_path,
             const CsvOptions& csv, const CvPlan& plan, const SolverConfig& base,
             const std::string& grid_C, const std::string& grid_sigma,
             const std::string& out_prefix) {
    const Dataset data = load_csv(data_path, csv);
    GridSpec grid = GridSpec::defaults();
    if (!grid_C.empty())
        grid.C_values = parse_value_list(grid_C);
    if (!grid_sigma.empty())
        grid.sigma_values = parse_value_list(grid_sigma);

    const GridOutcome out = grid_search(data, grid, plan, base);

    const std::string csv_path = out_prefix + ".csv";
    const std::string json_path = out_prefix + ".json";
    write_results_csv(csv_path, data.name, out.table);
    json doc;
    doc["dataset"] = data.name;
    doc["method"] = "qssvm01";
    doc["plan"] = {{"folds", plan.folds}, {"repeats", plan.repeats}, {"seed", plan.seed}};
    doc["best"] = {{"C", out.best_C}, {"sigma", out.best_sigma}};
    json cells = json::array();
    for (const auto& r : out.table)
        cells.push_back(result_to_json(r));
    doc["cells"] = cells;
    std::ofstream jout(json_path, std::ios::binary);
    if (!jout)
        throw DataError("cannot write '" + json_path + "'");
    jout << doc.dump(2) << '\n';

    const EvalResult& best = out.table[out.best_index];
    std::cout << "best C: " << out.best_C << "\n"
              << "best sigma: " << out.best_sigma << "\n"
              << "best mACC: " << best.mean_acc << " +- " << best.std_acc << "\n"
              << "best mNSV: " << best.mean_nsv << "\n";

    json params;
    params["data"] = data_path;
    params["folds"] = plan.folds;
    params["repeats"] = plan.repeats;
    params["seed"] = plan.seed;
    params["grid_C"] = grid_C;
    params["grid_sigma"] = grid_sigma;
    params["out"] = out_prefix;
    write_manifest("grid", argv, params, {data_path}, {csv_path, json_path},
                   out_prefix);
    return 0;
}

int cmd_boundary(const std::vector<std::string>& argv, const std::string& model_path,
                 const std::string& data_path, const CsvOptions& csv, int res,
                 double pad, const std::string& out_path,
                 const std::string& svg_path) {
    const QuadraticSurfaceModel model = load_model(model_path);
    if (model.dim() != 2)
        throw DataError("boundary: only 2-feature models can be plotted (got n=" +
                        std::to_string(model.dim()) + ")");

    Dataset samples;
    bool have_samples = false;
    if (!data_path.empty()) {
        samples = load_csv(data_path, csv);
        if (samples.dim() != 2)
            throw DataError("boundary: sample file must have 2 features");
        have_samples = true;
    }

    // plot window: the training range (the scaler remembers it), padded
    double x_lo = model.scaler.min[0], x_hi = model.scaler.max[0];
    double y_lo = model.scaler.min[1], y_hi = model.scaler.max[1];
    const double dx = (x_hi - x_lo) * pad, dy = (y_hi - y_lo) * pad;
    x_lo -= dx; x_hi += dx; y_lo -= dy; y_hi += dy;

    std::vector<double> xs(res), ys(res);
    for (int i = 0; i < res; ++i) {
        xs[i] = x_lo + (x_hi - x_lo) * i / (res - 1);
        ys[i] = y_lo + (y_hi - y_lo) * i / (res - 1);
    }
    Mat f(res, res);
    Vec point(2);
    for (int i = 0; i < res; ++i)
        for (int j = 0; j < res; ++j) {
            point[0] = xs[i];
            point[1] = ys[j];
            f(i, j) = model.decision_raw(point);
        }

    const auto segs = marching_squares(xs, ys, f);

    std::vector<char> is_sv;
    if (have_samples) {
        is_sv.assign(samples.size(), 0);
        for (Index idx : model.meta.sv_indices)
            if (idx >= 0 && idx < samples.size())
                is_sv[idx] = 1;
    }

    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw DataError("cannot write '" + out_path + "'");
    out << "kind,x1,x2,value,label,sv\n";
    for (int i = 0; i < res; ++i)
        for (int j = 0; j < res; ++j)
            out << "grid," << format_double(xs[i]) << ',' << format_double(ys[j])
                << ',' << format_double(f(i, j)) << ",,\n";
    for (const auto& s : segs) {
        // endpoints of each zero-crossing segment on consecutive rows
        Vec pa(2), pb(2);
        pa << s.ax, s.ay;
        pb << s.bx, s.by;
        out << "contour," << format_double(s.ax) << ',' << format_double(s.ay)
            << ',' << format_double(model.decision_raw(pa)) << ",,\n";
        out << "contour," << format_double(s.bx) << ',' << format_double(s.by)
            << ',' << format_double(model.decision_raw(pb)) << ",,\n";
    }
    if (have_samples) {
        const Vec fs = model.decision_values(samples.X);
        for (Index i = 0; i < samples.size(); ++i)
            out << "sample," << format_double(samples.X(i, 0)) << ','
                << format_double(samples.X(i, 1)) << ',' << format_double(fs[i])
                << ',' << (samples.y[i] > 0 ? "1" : "-1") << ','
                << (is_sv[i] ? "1" : "0") << '\n';
    }
    out.close();

    std::vector<std::string> artifacts{out_path};
    if (!svg_path.empty()) {
        write_boundary_svg(svg_path, have_samples ? &samples : nullptr, is_sv,
                           segs, x_lo, x_hi, y_lo, y_hi);
        artifacts.push_back(svg_path);
    }

    json params;
    params["model"] = model_path;
    params["data"] = data_path;
    params["res"] = res;
    params["pad"] = pad;
    params["out"] = out_path;
    params["svg"] = svg_path;
    std::vector<std::string> inputs{model_path};
    if (have_samples)
        inputs.push_back(data_path);
    write_manifest("boundary", argv, params, inputs, artifacts, out_path);
    return 0;
}

int cmd_rerun(const std::string& manifest_path) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in)
        throw DataError("cannot open manifest '" + manifest_path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError(std::string("manifest parse error: ") + e.what());
    }
    if (!doc.contains("argv") || !doc["argv"].is_array())
        throw DataError("manifest has no argv record");
    std::vector<std::string> argv;
    for (const auto& a : doc["argv"])
        argv.push_back(a.get<std::string>());
    std::cerr << "replaying: qshs";
    for (const auto& a : argv)
        std::cerr << ' ' << a;
    std::cerr << "\n";
    return run(argv);
}

// ---- argument surface ---------------------------------------------------

int run(const std::vector<std::string>& forward_args) {
    CLI::App app{"quadratic-surface SVM trainer with the 0-1 loss"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic 2-D dataset");
    std::string g_kind;
    Index g_n = 300, g_flips = 0, g_outliers = 0;
    double g_margin = 0.1;
    std::uint64_t g_seed = 0;
    std::string g_out;
    gen->add_option("--kind", g_kind, "line|parabola|circle|hyperbola")
        ->required()
        ->check(CLI::IsMember({"line", "parabola", "circle", "hyperbola"}));
    gen->add_option("--n", g_n, "sample count")->check(CLI::Range(Index{4}, Index{10000000}));
    gen->add_option("--margin", g_margin, "separation band half-width")
        ->check(CLI::PositiveNumber);
    gen->add_option("--seed", g_seed, "generator seed");
    gen->add_option("--flips", g_flips, "labels to flip")->check(CLI::NonNegativeNumber);
    gen->add_option("--outliers", g_outliers, "outliers to append")
        ->check(CLI::NonNegativeNumber);
    gen->add_option("--out", g_out, "output CSV path (stdout when omitted)");

    // shared solver options
    struct SolverArgs {
        double C = 1.0, sigma = 1.0, eta = 1.618, tol = 1e-3, cg_tol = 1e-10;
        int max_iter = 1000, cg_max_iter = 0;
        std::string branch = "auto";
    };
    auto add_solver_options = [](CLI::App* cmd, SolverArgs& s) {
        cmd->add_option("--C", s.C, "0-1 loss penalty")->check(CLI::PositiveNumber);
        cmd->add_option("--sigma", s.sigma, "augmented penalty")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--eta", s.eta, "dual step scale")->check(CLI::PositiveNumber);
        cmd->add_option("--max-iter", s.max_iter, "iteration cap")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--tol", s.tol, "stationarity tolerance")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--cg-tol", s.cg_tol, "CG relative tolerance")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--cg-max-iter", s.cg_max_iter,
                        "CG iteration cap (0 = matrix order)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--solver", s.branch, "auto|direct|cg")
            ->check(CLI::IsMember({"auto", "direct", "cg"}));
    };
    auto add_csv_options = [](CLI::App* cmd, int& label_col, std::string& label_map) {
        cmd->add_option("--label-column", label_col, "label column (-1 = last)");
        cmd->add_option("--label-map", label_map,
                        "label mapping, e.g. '0=-1,1=1'");
    };

    // train
    auto* train = app.add_subcommand("train", "fit a model on a CSV dataset");
    std::string t_data, t_out, t_label_map;
    int t_label_col = -1;
    SolverArgs t_solver;
    train->add_option("--data", t_data, "training CSV")->required();
    train->add_option("--out", t_out, "model output path")->required();
    add_solver_options(train, t_solver);
    add_csv_options(train, t_label_col, t_label_map);

    // predict
    auto* predict = app.add_subcommand("predict", "label a CSV with a saved model");
    std::string p_model, p_data, p_out, p_label_map;
    int p_label_col = -1;
    predict->add_option("--model", p_model, "model file")->required();
    predict->add_option("--data", p_data, "input CSV")->required();
    predict->add_option("--out", p_out, "predictions CSV")->required();
    add_csv_options(predict, p_label_col, p_label_map);

    // cv
    auto* cv = app.add_subcommand("cv", "repeated stratified k-fold cross-validation");
    std::string c_data, c_out, c_label_map;
    int c_label_col = -1;
    int c_folds = 10, c_repeats = 10;
    std::uint64_t c_seed = 0;
    SolverArgs c_solver;
    cv->add_option("--data", c_data, "CSV dataset")->required();
    cv->add_option("--out", c_out, "output path prefix")->required();
    cv->add_option("--folds", c_folds, "fold count")->check(CLI::Range(2, 1000000));
    cv->add_option("--repeats", c_repeats, "repeat count")->check(CLI::Range(1, 1000000));
    cv->add_option("--seed", c_seed, "shuffle seed");
    add_solver_options(cv, c_solver);
    add_csv_options(cv, c_label_col, c_label_map);

    // grid
    auto* grid = app.add_subcommand("grid", "grid search over (C, sigma) by CV");
    std::string r_data, r_out, r_label_map, r_grid_C, r_grid_sigma;
    int r_label_col = -1;
    int r_folds = 10, r_repeats = 10;
    std::uint64_t r_seed = 0;
    SolverArgs r_solver;
    grid->add_option("--data", r_data, "CSV dataset")->required();
    grid->add_option("--out", r_out, "output path prefix")->required();
    grid->add_option("--folds", r_folds, "fold count")->check(CLI::Range(2, 1000000));
    grid->add_option("--repeats", r_repeats, "repeat count")
        ->check(CLI::Range(1, 1000000));
    grid->add_option("--seed", r_seed, "shuffle seed");
    grid->add_option("--grid-C", r_grid_C,
                     "comma-separated C values (default 10^-7..10^7)");
    grid->add_option("--grid-sigma", r_grid_sigma,
                     "comma-separated sigma values (default sqrt2^-7..sqrt2^7)");
    add_solver_options(grid, r_solver);
    add_csv_options(grid, r_label_col, r_label_map);

    // boundary
    auto* boundary = app.add_subcommand(
        "boundary", "export decision values, zero contour and SV markers (n=2)");
    std::string b_model, b_data, b_out, b_svg, b_label_map;
    int b_label_col = -1;
    int b_res = 101;
    double b_pad = 0.1;
    boundary->add_option("--model", b_model, "model file")->required();
    boundary->add_option("--data", b_data, "sample CSV to overlay (training file)");
    boundary->add_option("--res", b_res, "grid resolution per axis")
        ->check(CLI::Range(2, 4096));
    boundary->add_option("--pad", b_pad, "window padding fraction")
        ->check(CLI::NonNegativeNumber);
    boundary->add_option("--out", b_out, "output CSV path")->required();
    boundary->add_option("--svg", b_svg, "also render a simple SVG");
    add_csv_options(boundary, b_label_col, b_label_map);

    // rerun
    auto* rerun = app.add_subcommand("rerun", "replay a recorded manifest");
    std::string m_path;
    rerun->add_option("--manifest", m_path, "manifest JSON")->required();

    std::vector<std::string> reversed(forward_args.rbegin(), forward_args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits 0; every parse failure is usage
    }

    if (*gen)
        return cmd_gen(forward_args, g_kind, g_n, g_margin, g_seed, g_flips,
                       g_outliers, g_out);
    if (*train) {
        CsvOptions csv;
        csv.label_column = t_label_col;
        csv.label_map = parse_label_map(t_label_map);
        const SolverConfig cfg = solver_config_from(
            t_solver.C, t_solver.sigma, t_solver.eta, t_solver.max_iter,
            t_solver.tol, t_solver.cg_tol, t_solver.cg_max_iter, t_solver.branch);
        return cmd_train(forward_args, t_data, csv, cfg, t_out);
    }
    if (*predict) {
        CsvOptions csv;
        csv.label_column = p_label_col;
        csv.label_map = parse_label_map(p_label_map);
        return cmd_predict(forward_args, p_model, p_data, csv, p_out);
    }
    if (*cv) {
        CsvOptions csv;
        csv.label_column = c_label_col;
        csv.label_map = parse_label_map(c_label_map);
        const SolverConfig cfg = solver_config_from(
            c_solver.C, c_solver.sigma, c_solver.eta, c_solver.max_iter,
            c_solver.tol, c_solver.cg_tol, c_solver.cg_max_iter, c_solver.branch);
        CvPlan plan;
        plan.folds = c_folds;
        plan.repeats = c_repeats;
        plan.seed = c_seed;
        return cmd_cv(forward_args, c_data, csv, plan, cfg, c_out);
    }
    if (*grid) {
        CsvOptions csv;
        csv.label_column = r_label_col;
        csv.label_map = parse_label_map(r_label_map);
        const SolverConfig cfg = solver_config_from(
            r_solver.C, r_solver.sigma, r_solver.eta, r_solver.max_iter,
            r_solver.tol, r_solver.cg_tol, r_solver.cg_max_iter, r_solver.branch);
        CvPlan plan;
        plan.folds = r_folds;
        plan.repeats = r_repeats;
        plan.seed = r_seed;
        return cmd_grid(forward_args, r_data, csv, plan, cfg, r_grid_C,
                        r_grid_sigma, r_out);
    }
    if (*boundary) {
        CsvOptions csv;
        csv.label_column = b_label_col;
        csv.label_map = parse_label_map(b_label_map);
        return cmd_boundary(forward_args, b_model, b_data, csv, b_res, b_pad,
                            b_out, b_svg);
    }
    if (*rerun)
        return cmd_rerun(m_path);
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run(args);
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 4;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
