#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "ccmpc/moments.hpp"
#include "ccmpc/sdp.hpp"
#include "ccmpc/sdpa_io.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace ccmpc;
using namespace ccmpc::testing;

namespace {

// minimize x s.t. [[x, 1], [1, x]] PSD  ->  x* = 1.
SdpProblem min_offdiag_problem() {
    SdpProblem p;
    p.num_vars = 1;
    p.objective = Eigen::VectorXd::Ones(1);
    const int b = p.add_block(2);
    p.add_block_const(b, 0, 1, 1.0);
    p.add_block_term(b, 0, 0, 0, 1.0);
    p.add_block_term(b, 0, 1, 1, 1.0);
    p.canonicalize();
    return p;
}

// minimize y2 s.t. [[1, y1], [y1, y2]] PSD, y1 = 0.3  ->  y2* = 0.09.
SdpProblem schur_problem() {
    SdpProblem p;
    p.num_vars = 2;
    p.objective = Eigen::VectorXd::Zero(2);
    p.objective[1] = 1.0;
    const int b = p.add_block(2);
    p.add_block_const(b, 0, 0, 1.0);
    p.add_block_term(b, 0, 0, 1, 1.0);
    p.add_block_term(b, 1, 1, 1, 1.0);
    Eigen::VectorXd eq = Eigen::VectorXd::Zero(2);
    eq[0] = 1.0;
    p.add_equality(eq, 0.3);
    p.canonicalize();
    return p;
}

}  // namespace

TEST_CASE("eigenvalue condition forces x >= 1") {
    const SdpSolution sol = solve(min_offdiag_problem());
    CHECK(sol.status == SolveStatus::kOptimal);
    CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sol.z[0] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("Schur complement with an equality row") {
    const SdpSolution sol = solve(schur_problem());
    CHECK(sol.status == SolveStatus::kOptimal);
    CHECK(sol.z[0] == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(sol.objective == doctest::Approx(0.09).epsilon(1e-5));
}

TEST_CASE("psd_check basics") {
    const auto id = psd_check(Eigen::MatrixXd::Identity(3, 3), 1e-8);
    CHECK(id.ok);
    CHECK(id.min_eigenvalue == doctest::Approx(1.0));

    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -0.1;
    const auto neg = psd_check(d, 1e-8);
    CHECK_FALSE(neg.ok);
    CHECK(neg.min_eigenvalue == doctest::Approx(-0.1));

    const auto m2 = psd_check(moment_matrix(uniform_moments(-0.5, 0.5, 4), 2), 1e-8);
    CHECK(m2.ok);

    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 2.0, 3.0, 1.0;
    CHECK_THROWS_AS(psd_check(asym, 1e-8), std::invalid_argument);
}

TEST_CASE("determinism: identical runs produce identical results") {
    auto g = test_rng(2024);
    const SdpProblem p = random_feasible_sdp(g, 6, 2, 5);
    const SdpSolution a = solve(p);
    const SdpSolution b = solve(p);
    CHECK(a.status == b.status);
    CHECK(a.objective == b.objective);  // bit-identical
    CHECK((a.z - b.z).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("objective scaling moves the optimum value, not the argmin") {
    auto g = test_rng(77);
    const SdpProblem p = random_feasible_sdp(g, 5, 2, 4);
    SdpProblem scaled = p;
    scaled.objective *= 7.5;
    const SdpSolution a = solve(p);
    const SdpSolution b = solve(scaled);
    REQUIRE(a.status == SolveStatus::kOptimal);
    REQUIRE(b.status == SolveStatus::kOptimal);
    CHECK(b.objective == doctest::Approx(7.5 * a.objective).epsilon(1e-6));
    CHECK((a.z - b.z).cwiseAbs().maxCoeff() < 1e-5 * (1.0 + a.z.cwiseAbs().maxCoeff()));
}

TEST_CASE("reported residuals recompute within 10x by the independent checker") {
    auto g = test_rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        const SdpProblem p = random_feasible_sdp(g, uniform_int(g, 3, 10), uniform_int(g, 1, 3), 6);
        const SdpSolution sol = solve(p);
        REQUIRE(sol.status == SolveStatus::kOptimal);
        const CertificateCheck chk = verify_certificate(p, sol);
        CHECK(chk.primal_infeas <= 10.0 * std::max(sol.primal_infeas, 1e-7));
        CHECK(chk.dual_infeas <= 10.0 * std::max(sol.dual_infeas, 1e-7));
        CHECK(chk.gap <= 10.0 * std::max(sol.gap, 1e-7));
    }
}

TEST_CASE("infeasible LMI is reported as infeasible") {
    // diag(x - 1, -x - 1) PSD requires x >= 1 and x <= -1 simultaneously.
    SdpProblem p;
    p.num_vars = 1;
    p.objective = Eigen::VectorXd::Ones(1);
    const int b = p.add_block(2);
    p.add_block_const(b, 0, 0, -1.0);
    p.add_block_const(b, 1, 1, -1.0);
    p.add_block_term(b, 0, 0, 0, 1.0);
    p.add_block_term(b, 0, 1, 1, -1.0);
    p.canonicalize();
    const SdpSolution sol = solve(p);
    CHECK(sol.status == SolveStatus::kInfeasible);
}

TEST_CASE("unbounded objective is reported as unbounded") {
    // minimize -x s.t. x + 1 >= 0: x can grow without bound.
    SdpProblem p;
    p.num_vars = 1;
    p.objective = -Eigen::VectorXd::Ones(1);
    const int b = p.add_block(1);
    p.add_block_const(b, 0, 0, 1.0);
    p.add_block_term(b, 0, 0, 0, 1.0);
    p.canonicalize();
    const SdpSolution sol = solve(p);
    CHECK(sol.status == SolveStatus::kUnbounded);
}

TEST_CASE("ellipsoid and grid oracles agree on tiny problems") {
    auto g = test_rng(404);
    for (int trial = 0; trial < 5; ++trial) {
        const SdpProblem p = random_feasible_sdp(g, 2, 1, 4);
        const OracleResult e = ellipsoid_oracle(p, 2.5);
        const OracleResult gr = grid_oracle(p, 2.5);
        REQUIRE(e.solved);
        REQUIRE(gr.solved);
        CHECK(e.objective == doctest::Approx(gr.objective).epsilon(2e-4));
    }
}

TEST_CASE("solver matches the slow oracle on random feasible block SDPs") {
    auto g = test_rng(555);
    for (int trial = 0; trial < 12; ++trial) {
        const int nv = uniform_int(g, 2, 10);
        const SdpProblem p = random_feasible_sdp(g, nv, uniform_int(g, 1, 3), 6);
        const SdpSolution sol = solve(p);
        REQUIRE(sol.status == SolveStatus::kOptimal);
        const OracleResult oracle = ellipsoid_oracle(p, 2.5);
        REQUIRE(oracle.solved);
        CHECK(std::abs(sol.objective - oracle.objective) < 1e-4);
    }
}

TEST_CASE("sdpa text round trip preserves the optimum") {
    auto g = test_rng(808);
    for (int trial = 0; trial < 4; ++trial) {
        const SdpProblem p = random_feasible_sdp(g, uniform_int(g, 3, 7), 2, 5);
        const SdpProblem back = read_sdpa(write_sdpa(p));
        const SdpSolution a = solve(p);
        const SdpSolution b = solve(back);
        REQUIRE(a.status == SolveStatus::kOptimal);
        REQUIRE(b.status == SolveStatus::kOptimal);
        CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-8));
    }
    CHECK_THROWS_AS(write_sdpa(schur_problem()), std::invalid_argument);
    const ReducedProblem red = eliminate_equalities(schur_problem());
    const SdpSolution c = solve(red.problem);
    CHECK(c.objective + 0.0 == doctest::Approx(0.09).epsilon(1e-5));
}

TEST_CASE("solver input validation") {
    SdpProblem p;
    p.num_vars = 0;
    p.objective = Eigen::VectorXd::Zero(0);
    CHECK_THROWS_AS(solve(p), std::invalid_argument);

    SolverSettings bad;
    bad.feasibility_tol = -1.0;
    CHECK_THROWS_AS(solve(min_offdiag_problem(), bad), std::invalid_argument);
}
