#include "qshs/linsolve.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>

using namespace qshs;
using qshs_test::Rng;

TEST_SUITE("linsolve") {

TEST_CASE("identity system returns the right-hand side") {
    SpdSystem sys;
    sys.K = Mat::Identity(4, 4);
    sys.rhs = Vec::LinSpaced(4, 1.0, 4.0);
    CHECK((solve_direct(sys) - sys.rhs).norm() <= 1e-14);

    CgReport rep;
    const Vec z = solve_cg(sys, 1e-10, 0, &rep);
    CHECK((z - sys.rhs).norm() <= 1e-12);
    CHECK(rep.converged);
    CHECK(rep.iterations == 1);  // exact in one step on the identity
}

TEST_CASE("2x2 system with a hand solution") {
    SpdSystem sys;
    sys.K = Mat(2, 2);
    sys.K << 4, 1, 1, 3;
    sys.rhs = Vec(2);
    sys.rhs << 1, 2;

    const Vec direct = solve_direct(sys);
    CHECK(direct[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-12));
    CHECK(direct[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-12));

    const Vec viacg = solve_cg(sys);
    CHECK(viacg[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-9));
    CHECK(viacg[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-9));
}

TEST_CASE("direct solve matches Eigen's factorization on random SPD") {
    Rng rng(31);
    for (int rep = 0; rep < 40; ++rep) {
        const Index m = 2 + static_cast<Index>(rng.eng() % 59);  // up to 60
        SpdSystem sys;
        sys.K = qshs_test::random_spd(rng, m);
        sys.rhs = qshs_test::random_vec(rng, m);

        const Vec z = solve_direct(sys);
        const Vec oracle = Eigen::LLT<Mat>(sys.K).solve(sys.rhs);
        CHECK((z - oracle).norm() <= 1e-8 * (1.0 + oracle.norm()));

        // residual bound straight from the contract
        CHECK((sys.K * z - sys.rhs).norm() <= 1e-8 * (1.0 + sys.rhs.norm()));
    }
}

TEST_CASE("ridge shifts the diagonal before solving") {
    Rng rng(32);
    SpdSystem sys;
    sys.K = qshs_test::random_spd(rng, 8);
    sys.rhs = qshs_test::random_vec(rng, 8);
    sys.ridge = 0.37;

    SpdSystem shifted;
    shifted.K = sys.K + 0.37 * Mat::Identity(8, 8);
    shifted.rhs = sys.rhs;

    CHECK((solve_direct(sys) - solve_direct(shifted)).norm() <= 1e-12);
    CHECK((solve_cg(sys) - solve_cg(shifted)).norm() <= 1e-9);
}

TEST_CASE("singular systems report the failing pivot") {
    SpdSystem sys;
    sys.K = Mat(2, 2);
    sys.K << 1, 1, 1, 1;  // rank 1: second pivot hits zero
    sys.rhs = Vec::Ones(2);
    CHECK_THROWS_AS(solve_direct(sys), SingularSystemError);
    try {
        solve_direct(sys);
    } catch (const SingularSystemError& e) {
        CHECK(e.pivot == 1);
    }

    sys.K << 0, 0, 0, 1;  // fails immediately
    try {
        solve_direct(sys);
        FAIL("expected SingularSystemError");
    } catch (const SingularSystemError& e) {
        CHECK(e.pivot == 0);
    }
}

TEST_CASE("cg agrees with the direct path on 100 seeded systems") {
    Rng rng(33);
    for (int rep = 0; rep < 100; ++rep) {
        const Index m = 2 + static_cast<Index>(rng.eng() % 59);
        SpdSystem sys;
        sys.K = qshs_test::random_spd(rng, m);
        sys.rhs = qshs_test::random_vec(rng, m);

        const Vec a = solve_direct(sys);
        CgReport rep_cg;
        const Vec b = solve_cg(sys, 1e-12, 10 * static_cast<int>(m), &rep_cg);
        CHECK(rep_cg.converged);
        CHECK((a - b).norm() <= 1e-6 * (1.0 + a.norm()));
    }
}

TEST_CASE("cg respects the iteration cap and reports honestly") {
    Rng rng(34);
    SpdSystem sys;
    sys.K = qshs_test::random_spd(rng, 30);
    // make it badly scaled so one step cannot converge
    sys.K.diagonal().array() += Vec::LinSpaced(30, 0.0, 1e4).array();
    sys.rhs = qshs_test::random_vec(rng, 30);

    CgReport rep;
    solve_cg(sys, 1e-14, 1, &rep);
    CHECK(rep.iterations == 1);
    CHECK_FALSE(rep.converged);
    CHECK(rep.residual_norm > 0.0);
}

TEST_CASE("cg error decreases monotonically in the K-norm") {
    // restarting CG with a growing iteration cap reproduces its iterates
    // one by one (the method is deterministic from a zero start), so the
    // K-norm error sequence can be checked without instrumenting the loop
    Rng rng(35);
    SpdSystem sys;
    sys.K = qshs_test::random_spd(rng, 12);
    sys.rhs = qshs_test::random_vec(rng, 12);
    const Vec exact = Eigen::LLT<Mat>(sys.K).solve(sys.rhs);

    double prev = std::numeric_limits<double>::infinity();
    for (int cap = 1; cap <= 12; ++cap) {
        const Vec z = solve_cg(sys, 1e-16, cap);
        const Vec e = z - exact;
        const double knorm = std::sqrt(e.dot(sys.K * e));
        CHECK(knorm <= prev * (1.0 + 1e-9) + 1e-12);
        prev = knorm;
    }
}

TEST_CASE("cg flags breakdown on indefinite systems") {
    SpdSystem sys;
    sys.K = Mat(2, 2);
    sys.K << 1, 0, 0, -1;  // negative curvature along e2
    sys.rhs = Vec(2);
    sys.rhs << 0, 1;
    CHECK_THROWS_AS(solve_cg(sys), NumericalBreakdownError);
}

}  // TEST_SUITE
