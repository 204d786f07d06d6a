#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "ccmpc/moments.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace ccmpc;
using namespace ccmpc::testing;

namespace {

// Quadrature oracle for 1-D uniform moments (composite Simpson).
double simpson_uniform_moment(double a, double b, int order, int panels = 4000) {
    const double h = (b - a) / panels;
    auto f = [&](double w) {
        double v = 1.0;
        for (int k = 0; k < order; ++k) v *= w;
        return v / (b - a);
    };
    double total = f(a) + f(b);
    for (int i = 1; i < panels; ++i) total += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return total * h / 3.0;
}

}  // namespace

TEST_CASE("linear functional on point mass, mass, and uniform moments") {
    const MomentSequence d03 = delta_moments({0.3}, 2);
    CHECK(linear_functional(d03, Polynomial::variable(0, 1)) == doctest::Approx(0.3));
    CHECK(linear_functional(d03, Polynomial(1, 1.0)) == doctest::Approx(1.0));

    const MomentSequence u = uniform_moments(-0.5, 0.5, 2);
    Polynomial w2(1);
    w2.add_term(Monomial({2}), 1.0);
    CHECK(linear_functional(u, w2) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));

    Polynomial w4(1);
    w4.add_term(Monomial({4}), 1.0);
    CHECK_THROWS_WITH_AS(linear_functional(u, w4), doctest::Contains("order 4"), std::out_of_range);
}

TEST_CASE("uniform moments match the closed form and the quadrature oracle") {
    const MomentSequence sym = uniform_moments(-0.5, 0.5, 4);
    const std::vector<double> expect = {1.0, 0.0, 1.0 / 12.0, 0.0, 1.0 / 80.0};
    for (int j = 0; j <= 4; ++j) CHECK(sym.values[j] == doctest::Approx(expect[static_cast<std::size_t>(j)]).epsilon(1e-14));

    const MomentSequence std01 = uniform_moments(0.0, 1.0, 2);
    CHECK(std01.values[0] == doctest::Approx(1.0));
    CHECK(std01.values[1] == doctest::Approx(0.5));
    CHECK(std01.values[2] == doctest::Approx(1.0 / 3.0));

    const MomentSequence pm1 = uniform_moments(-1.0, 1.0, 2);
    CHECK(pm1.values[1] == doctest::Approx(0.0));
    CHECK(pm1.values[2] == doctest::Approx(1.0 / 3.0));

    auto g = test_rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const double a = uniform(g, -3.0, 1.0);
        const double b = a + uniform(g, 0.1, 3.0);
        const MomentSequence y = uniform_moments(a, b, 6);
        for (int j = 0; j <= 6; ++j)
            CHECK(y.values[j] == doctest::Approx(simpson_uniform_moment(a, b, j)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(uniform_moments(1.0, 1.0, 2), std::invalid_argument);
}

TEST_CASE("delta moments are powers of the point") {
    const MomentSequence z = delta_moments({0.0}, 2);
    CHECK(z.values[0] == 1.0);
    CHECK(z.values[1] == 0.0);
    CHECK(z.values[2] == 0.0);

    const MomentSequence d = delta_moments({0.3}, 2);
    CHECK(d.values[2] == doctest::Approx(0.09));

    const MomentSequence ones = delta_moments({1.0, 1.0}, 2);
    REQUIRE(ones.values.size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(ones.values[i] == 1.0);
}

TEST_CASE("product moments factorize") {
    const MomentSequence a = delta_moments({0.3}, 4);
    const MomentSequence b = uniform_moments(-0.5, 0.5, 4);
    const MomentSequence joint = product_moments({a, b});
    CHECK(joint.mass() == doctest::Approx(1.0));
    CHECK(joint.moment(Monomial({1, 2})) == doctest::Approx(0.3 / 12.0).epsilon(1e-12));

    // factorization identity on random index pairs
    auto g = test_rng(3);
    const auto basis = monomial_basis(2, 4);
    for (int t = 0; t < 50; ++t) {
        const auto& m = basis[static_cast<std::size_t>(uniform_int(g, 0, static_cast<int>(basis.size()) - 1))];
        const double lhs = joint.moment(m);
        const double rhs = a.moment(Monomial({m.exponents[0]})) * b.moment(Monomial({m.exponents[1]}));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }

    MomentSequence zero(1, 4);  // zero mass
    const MomentSequence with_zero = product_moments({a, zero});
    CHECK(with_zero.values.cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(product_moments({delta_moments({0.1}, 2), delta_moments({0.1}, 3)}), std::invalid_argument);
}

TEST_CASE("moment matrix layout and symmetry") {
    const MomentSequence ones = delta_moments({1.0, 1.0}, 4);
    const Eigen::MatrixXd M = moment_matrix(ones, 2);
    REQUIRE(M.rows() == 6);
    CHECK((M.array() - 1.0).abs().maxCoeff() == 0.0);

    // entry (2,3) of M_2 is y_{11} (1-based indices from the matrix layout)
    auto g = test_rng(5);
    MomentSequence y(2, 4);
    for (Eigen::Index i = 0; i < y.values.size(); ++i) y.values[i] = uniform(g, -1.0, 1.0);
    const Eigen::MatrixXd My = moment_matrix(y, 2);
    CHECK(My(1, 2) == y.moment(Monomial({1, 1})));
    CHECK((My - My.transpose()).cwiseAbs().maxCoeff() == 0.0);  // bit-equal transpose

    const Eigen::MatrixXd M1 = moment_matrix(uniform_moments(-0.5, 0.5, 2), 1);
    CHECK(M1(0, 0) == doctest::Approx(1.0));
    CHECK(M1(0, 1) == doctest::Approx(0.0));
    CHECK(M1(1, 1) == doctest::Approx(1.0 / 12.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M1);
    CHECK(es.eigenvalues().minCoeff() > 0.0);

    CHECK_THROWS_AS(moment_matrix(uniform_moments(0, 1, 3), 2), std::out_of_range);
}

TEST_CASE("localizing matrix: constant recovers the moment matrix, point mass is rank one") {
    auto g = test_rng(9);
    MomentSequence y(2, 6);
    for (Eigen::Index i = 0; i < y.values.size(); ++i) y.values[i] = uniform(g, -1.0, 1.0);
    CHECK((localizing_matrix(y, Polynomial(2, 1.0), 2) - moment_matrix(y, 2)).cwiseAbs().maxCoeff() == 0.0);

    // at a point mass the localizing matrix is evaluate(p, t) * B(t) B(t)^T
    const std::vector<double> t = {0.4, -0.7};
    const MomentSequence dt = delta_moments(t, 6);
    const Polynomial p = parse_polynomial("2*x1 - 3*x2^2", {"x1", "x2"});
    const Eigen::MatrixXd L = localizing_matrix(dt, p, 2);
    const auto basis = monomial_basis(2, 2);
    Eigen::VectorXd bt(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        double v = 1.0;
        for (int k = 0; k < 2; ++k)
            for (int e = 0; e < basis[i].exponents[static_cast<std::size_t>(k)]; ++e) v *= t[static_cast<std::size_t>(k)];
        bt[static_cast<Eigen::Index>(i)] = v;
    }
    const Eigen::MatrixXd expected = p.evaluate(t) * bt * bt.transpose();
    CHECK((L - expected).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(L);
    CHECK(svd.singularValues()[1] < 1e-9 * svd.singularValues()[0]);
}

TEST_CASE("localizing matrix golden for b*x1 - c*x2^2 at r=1") {
    // Index pairs of the affine entries, frozen from the matrix layout over
    // the basis (1, x1, x2): entry (i,j) = b*y[idx_b] - c*y[idx_c].
    auto g = test_rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const double bc = uniform(g, -3.0, 3.0);
        const double cc = uniform(g, -3.0, 3.0);
        MomentSequence y(2, 4);
        for (Eigen::Index i = 0; i < y.values.size(); ++i) y.values[i] = uniform(g, -1.0, 1.0);
        Polynomial p(2);
        p.add_term(Monomial({1, 0}), bc);
        p.add_term(Monomial({0, 2}), -cc);
        const Eigen::MatrixXd L = localizing_matrix(y, p, 1);
        auto m = [&](int e1, int e2) { return y.moment(Monomial({e1, e2})); };
        CHECK(L(0, 0) == doctest::Approx(bc * m(1, 0) - cc * m(0, 2)).epsilon(1e-13));
        CHECK(L(0, 1) == doctest::Approx(bc * m(2, 0) - cc * m(1, 2)).epsilon(1e-13));
        CHECK(L(0, 2) == doctest::Approx(bc * m(1, 1) - cc * m(0, 3)).epsilon(1e-13));
        CHECK(L(1, 1) == doctest::Approx(bc * m(3, 0) - cc * m(2, 2)).epsilon(1e-13));
        CHECK(L(1, 2) == doctest::Approx(bc * m(2, 1) - cc * m(1, 3)).epsilon(1e-13));
        CHECK(L(2, 2) == doctest::Approx(bc * m(1, 2) - cc * m(0, 4)).epsilon(1e-13));
        CHECK(L(1, 0) == L(0, 1));
        CHECK(L(2, 1) == L(1, 2));
    }
}

TEST_CASE("localizing matrix is linear in the polynomial") {
    auto g = test_rng(29);
    MomentSequence y(2, 6);
    for (Eigen::Index i = 0; i < y.values.size(); ++i) y.values[i] = uniform(g, -1.0, 1.0);
    const Polynomial p = random_polynomial(g, 2, 2, 4, 3.0);
    const Polynomial q = random_polynomial(g, 2, 2, 4, 3.0);
    const Eigen::MatrixXd sum = localizing_matrix(y, p + q, 2);
    const Eigen::MatrixXd parts = localizing_matrix(y, p, 2) + localizing_matrix(y, q, 2);
    CHECK((sum - parts).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("quadratic form identity L_y(p^2) = B_p^T M_r(y) B_p") {
    auto g = test_rng(39);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = uniform_int(g, 1, 3);
        const int r = uniform_int(g, 1, 3);
        MomentSequence y(n, 2 * r);
        for (Eigen::Index i = 0; i < y.values.size(); ++i) y.values[i] = uniform(g, -1.0, 1.0);
        const Polynomial p = random_polynomial(g, n, r, 4, 2.0);
        const auto basis = monomial_basis(n, r);
        Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
        for (const auto& [m, c] : p.terms())
            coeffs[static_cast<Eigen::Index>(grevlex_rank(m, n) - 1)] = c;
        const double lhs = linear_functional(y, p * p);
        const double rhs = coeffs.dot(moment_matrix(y, r) * coeffs);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("representing measure check") {
    // delta at an interior point of {0.25 - w^2 >= 0}
    Polynomial ball(1);
    ball.add_term(Monomial({0}), 0.25);
    ball.add_term(Monomial({2}), -1.0);
    const auto interior = representing_measure_check(delta_moments({0.1}, 4), {ball}, 2, 1e-8);
    CHECK(interior.ok);

    const auto unif = representing_measure_check(uniform_moments(-0.5, 0.5, 4), {ball}, 2, 1e-8);
    CHECK(unif.ok);
    CHECK(unif.moment_matrix_min_eig > 0.0);

    MomentSequence bad(1, 2);
    bad.values << 1.0, 0.0, -1.0;
    const auto indefinite = representing_measure_check(bad, {}, 1, 1e-8);
    CHECK_FALSE(indefinite.ok);
}

TEST_CASE("random point masses and box-empirical measures stay PSD") {
    auto g = test_rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = uniform_int(g, 1, 3);
        const int r = uniform_int(g, 1, 3);
        MomentSequence y(n, 2 * r);
        if (trial % 2 == 0) {
            y = delta_moments(random_point(g, n, 1.5), 2 * r);
            // point mass: rank of the moment matrix is one
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(moment_matrix(y, r));
            CHECK(svd.singularValues()[1] < 1e-9 * svd.singularValues()[0]);
        } else {
            // empirical mixture of box samples
            const int atoms = uniform_int(g, 2, 12);
            y.values.setZero();
            for (int a = 0; a < atoms; ++a) {
                const MomentSequence d = delta_moments(random_point(g, n, 1.0), 2 * r);
                y.values += d.values / atoms;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(moment_matrix(y, r), Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -1e-9);
    }
}

TEST_CASE("moment sequence JSON round trip") {
    const MomentSequence y = uniform_moments(-0.5, 0.5, 4);
    const MomentSequence back = MomentSequence::from_json(y.to_json());
    CHECK(back.num_vars == y.num_vars);
    CHECK(back.max_degree == y.max_degree);
    CHECK((back.values - y.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero-width disturbance behaves as a point mass") {
    DisturbanceSpec d;
    d.support = {{0.25, 0.25}};
    CHECK(d.coordinate_moment(0, 2) == doctest::Approx(0.0625));
    CHECK(d.step_moments(3).moment(Monomial({3})) == doctest::Approx(0.015625));
    CHECK(d.draw_coordinate(0, 0.77) == 0.25);
}
