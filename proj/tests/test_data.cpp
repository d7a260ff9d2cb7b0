#include "qshs/data.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <fstream>
#include <set>

using namespace qshs;
using qshs_test::ScratchDir;

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// canonical surface value used by the generators, recomputed here as the
// oracle for the separability certificate
double surface_value(SurfaceKind kind, double x1, double x2) {
    switch (kind) {
        case SurfaceKind::Line: return x2 - x1;
        case SurfaceKind::Parabola: return x2 - x1 * x1;
        case SurfaceKind::Circle: return x1 * x1 + x2 * x2 - 0.5;
        case SurfaceKind::Hyperbola: return x1 * x1 - x2 * x2 - 0.1;
    }
    return 0.0;
}

const SurfaceKind kAllKinds[] = {SurfaceKind::Line, SurfaceKind::Parabola,
                                 SurfaceKind::Circle, SurfaceKind::Hyperbola};

}  // namespace

TEST_SUITE("data") {

TEST_CASE("kind names round-trip") {
    for (SurfaceKind kind : kAllKinds)
        CHECK(surface_kind_from(to_string(kind)) == kind);
    CHECK_THROWS_AS(surface_kind_from("ellipse"), DataError);
}

TEST_CASE("scaler maps the fitted range onto [-1,1]") {
    Mat X(3, 1);
    X << 0, 5, 10;
    const FeatureScaler s = fit_scaler(X);
    const Mat Xs = s.apply(X);
    CHECK(Xs(0, 0) == doctest::Approx(-1.0));
    CHECK(Xs(1, 0) == doctest::Approx(0.0));
    CHECK(Xs(2, 0) == doctest::Approx(1.0));

    // out-of-range values extrapolate, no clamping
    Vec probe(1);
    probe << 20.0;
    CHECK(s.apply(probe)[0] == doctest::Approx(3.0));
}

TEST_CASE("constant features scale to zero") {
    Mat X(2, 1);
    X << 7, 7;
    const FeatureScaler s = fit_scaler(X);
    const Mat Xs = s.apply(X);
    CHECK(Xs(0, 0) == 0.0);
    CHECK(Xs(1, 0) == 0.0);
}

TEST_CASE("scaler endpoints are exact on fitted data") {
    qshs_test::Rng rng(41);
    Mat X(20, 3);
    for (Index i = 0; i < X.rows(); ++i)
        for (Index j = 0; j < X.cols(); ++j)
            X(i, j) = rng.range(-5.0, 9.0);
    const FeatureScaler s = fit_scaler(X);
    const Mat Xs = s.apply(X);
    for (Index j = 0; j < X.cols(); ++j) {
        CHECK(Xs.col(j).minCoeff() == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(Xs.col(j).maxCoeff() == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("csv parses plain numeric rows") {
    ScratchDir dir("csv");
    const std::string path = dir.file("two.csv");
    write_file(path, "1,2,1\n3,4,-1\n");
    const Dataset d = load_csv(path);
    REQUIRE(d.size() == 2);
    REQUIRE(d.dim() == 2);
    CHECK(d.X(0, 0) == 1.0);
    CHECK(d.X(0, 1) == 2.0);
    CHECK(d.X(1, 0) == 3.0);
    CHECK(d.X(1, 1) == 4.0);
    CHECK(d.y[0] == 1.0);
    CHECK(d.y[1] == -1.0);
}

TEST_CASE("csv header and comments") {
    ScratchDir dir("csv");
    const std::string path = dir.file("hdr.csv");
    write_file(path, "# comment\nx1,x2,label\n1,2,1\n# another\n3,4,-1\n");
    const Dataset d = load_csv(path);
    REQUIRE(d.size() == 2);
    REQUIRE(d.feature_names.size() == 2);
    CHECK(d.feature_names[0] == "x1");
    CHECK(d.feature_names[1] == "x2");
}

TEST_CASE("csv label mapping") {
    ScratchDir dir("csv");
    const std::string path = dir.file("zero-one.csv");
    write_file(path, "1,2,0\n3,4,1\n");

    CsvOptions opt;
    opt.label_map = {{"0", -1}, {"1", 1}};
    const Dataset d = load_csv(path, opt);
    CHECK(d.y[0] == -1.0);
    CHECK(d.y[1] == 1.0);

    // without a map, labels other than +-1 are rejected
    CHECK_THROWS_AS(load_csv(path), DataError);
}

TEST_CASE("csv label column selection") {
    ScratchDir dir("csv");
    const std::string path = dir.file("first-col.csv");
    write_file(path, "1,10,20\n-1,30,40\n");
    CsvOptions opt;
    opt.label_column = 0;
    const Dataset d = load_csv(path, opt);
    REQUIRE(d.dim() == 2);
    CHECK(d.y[0] == 1.0);
    CHECK(d.X(0, 0) == 10.0);
    CHECK(d.X(1, 1) == 40.0);
}

TEST_CASE("csv rejects ragged and non-numeric rows with line numbers") {
    ScratchDir dir("csv");
    const std::string ragged = dir.file("ragged.csv");
    write_file(ragged, "1,2,1\n3,4\n");
    CHECK_THROWS_WITH_AS(load_csv(ragged),
                         doctest::Contains("line 2"), DataError);

    const std::string alpha = dir.file("alpha.csv");
    write_file(alpha, "1,2,1\n3,oops,-1\n");
    CHECK_THROWS_WITH_AS(load_csv(alpha),
                         doctest::Contains("line 2"), DataError);

    CHECK_THROWS_AS(load_csv(dir.file("missing.csv")), DataError);

    // an empty file is an empty dataset, not an error: prediction on an
    // empty input must produce an empty output
    const std::string empty = dir.file("empty.csv");
    write_file(empty, "");
    const Dataset d = load_csv(empty);
    CHECK(d.size() == 0);
}

TEST_CASE("csv round-trip is lossless") {
    Dataset d = gen_synthetic(SurfaceKind::Circle, 60, 0.1, 5);
    ScratchDir dir("roundtrip");
    const std::string path = dir.file("c.csv");
    save_csv(d, path);
    const Dataset back = load_csv(path);
    REQUIRE(back.size() == d.size());
    REQUIRE(back.dim() == d.dim());
    CHECK(back.X == d.X);  // exact: shortest round-trip formatting
    CHECK(back.y == d.y);
}

TEST_CASE("generators respect the margin certificate") {
    for (SurfaceKind kind : kAllKinds) {
        const double margin = 0.1;
        const Dataset d = gen_synthetic(kind, 300, margin, 7);
        REQUIRE(d.size() == 300);
        REQUIRE(d.dim() == 2);
        REQUIRE(d.gen.has_value());
        CHECK(d.gen->kind == kind);

        double min_cert = 1e300;
        for (Index i = 0; i < d.size(); ++i) {
            const double g = surface_value(kind, d.X(i, 0), d.X(i, 1));
            min_cert = std::min(min_cert, d.y[i] * g);
        }
        CHECK(min_cert >= margin);
    }
}

TEST_CASE("generators balance the classes") {
    const Dataset d = gen_synthetic(SurfaceKind::Parabola, 301, 0.1, 3);
    Index pos = 0;
    for (Index i = 0; i < d.size(); ++i)
        if (d.y[i] > 0)
            ++pos;
    CHECK(pos == 151);  // alternating labels: ceil(n/2) positives
}

TEST_CASE("generation is deterministic under the seed") {
    const Dataset a = gen_synthetic(SurfaceKind::Hyperbola, 120, 0.2, 9);
    const Dataset b = gen_synthetic(SurfaceKind::Hyperbola, 120, 0.2, 9);
    CHECK(a.X == b.X);
    CHECK(a.y == b.y);
    const Dataset c = gen_synthetic(SurfaceKind::Hyperbola, 120, 0.2, 10);
    CHECK(a.X != c.X);
}

TEST_CASE("generator argument validation") {
    CHECK_THROWS_AS(gen_synthetic(SurfaceKind::Line, 3, 0.1, 1), DataError);
    CHECK_THROWS_AS(gen_synthetic(SurfaceKind::Line, 10, 0.0, 1), DataError);
    CHECK_THROWS_AS(gen_synthetic(SurfaceKind::Line, 10, -0.5, 1), DataError);
    // a margin wider than the sampling box can never be satisfied
    CHECK_THROWS_AS(gen_synthetic(SurfaceKind::Circle, 10, 50.0, 1), DataError);
}

TEST_CASE("noise injection flips exactly the requested labels") {
    const Dataset clean = gen_synthetic(SurfaceKind::Circle, 100, 0.1, 11);
    const Dataset noisy = inject_noise(clean, 2, 0, 77);
    REQUIRE(noisy.size() == clean.size());
    Index flipped = 0;
    for (Index i = 0; i < clean.size(); ++i)
        if (noisy.y[i] != clean.y[i])
            ++flipped;
    CHECK(flipped == 2);
    CHECK(noisy.X == clean.X);
    REQUIRE(noisy.modified.size() == 2);
    const std::set<Index> touched(noisy.modified.begin(), noisy.modified.end());
    for (Index i = 0; i < clean.size(); ++i)
        CHECK((noisy.y[i] != clean.y[i]) == (touched.count(i) == 1));
}

TEST_CASE("noise injection identity when both counts are zero") {
    const Dataset clean = gen_synthetic(SurfaceKind::Line, 50, 0.1, 13);
    const Dataset same = inject_noise(clean, 0, 0, 1);
    CHECK(same.X == clean.X);
    CHECK(same.y == clean.y);
    CHECK(same.modified.empty());
}

TEST_CASE("outliers land deep on the wrong side") {
    const double margin = 0.1;
    const Dataset clean = gen_synthetic(SurfaceKind::Circle, 100, margin, 17);
    const Dataset noisy = inject_noise(clean, 0, 3, 99);
    REQUIRE(noisy.size() == 103);
    REQUIRE(noisy.modified.size() == 3);
    for (Index i = 100; i < 103; ++i) {
        const double g =
            surface_value(SurfaceKind::Circle, noisy.X(i, 0), noisy.X(i, 1));
        // label contradicts the surface by at least 3x the margin
        CHECK(noisy.y[i] * g <= -3.0 * margin);
    }
    // the original rows are untouched
    CHECK(noisy.X.topRows(100) == clean.X);
    CHECK(noisy.y.head(100) == clean.y);
}

TEST_CASE("noise injection validation") {
    const Dataset clean = gen_synthetic(SurfaceKind::Line, 20, 0.1, 19);
    CHECK_THROWS_AS(inject_noise(clean, 21, 0, 1), DataError);

    // outliers need generator provenance for surface placement
    Dataset plain;
    plain.X = clean.X;
    plain.y = clean.y;
    CHECK_THROWS_AS(inject_noise(plain, 0, 1, 1), DataError);
    CHECK_NOTHROW(inject_noise(plain, 1, 0, 1));
}

TEST_CASE("noise injection is deterministic") {
    const Dataset clean = gen_synthetic(SurfaceKind::Parabola, 80, 0.1, 23);
    const Dataset a = inject_noise(clean, 2, 2, 5);
    const Dataset b = inject_noise(clean, 2, 2, 5);
    CHECK(a.X == b.X);
    CHECK(a.y == b.y);
    CHECK(a.modified == b.modified);
}

}  // TEST_SUITE
