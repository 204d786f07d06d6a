#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "ccmpc/polynomial.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace ccmpc;
using namespace ccmpc::testing;

namespace {

// Independent binomial oracle: Pascal's triangle.
std::uint64_t pascal(int n, int k) {
    std::vector<std::vector<std::uint64_t>> t(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) {
        t[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i + 1), 1);
        for (int j = 1; j < i; ++j)
            t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
                t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
    }
    return t[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

Polynomial parse2(const std::string& s) { return parse_polynomial(s, {"x1", "x2"}); }

}  // namespace

TEST_CASE("grevlex rank matches the moment-vector column order") {
    CHECK(grevlex_rank(Monomial({0, 0}), 2) == 1);
    CHECK(grevlex_rank(Monomial({1, 0}), 2) == 2);
    CHECK(grevlex_rank(Monomial({0, 1}), 2) == 3);
    CHECK(grevlex_rank(Monomial({2, 0}), 2) == 4);
    CHECK(grevlex_rank(Monomial({1, 1}), 2) == 5);
    CHECK(grevlex_rank(Monomial({0, 2}), 2) == 6);
    CHECK_THROWS_AS(grevlex_rank(Monomial({1, 0}), 3), std::invalid_argument);
}

TEST_CASE("monomial basis enumerates degree then grevlex") {
    const auto b = monomial_basis(2, 2);
    REQUIRE(b.size() == 6);
    const std::vector<std::vector<int>> expect = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    for (std::size_t i = 0; i < 6; ++i) CHECK(b[i].exponents == expect[i]);
    CHECK(monomial_basis(7, 5).size() == 792);
}

TEST_CASE("basis size equals binomial(n+d, n) for 1<=n<=6, 0<=d<=8") {
    for (int n = 1; n <= 6; ++n)
        for (int d = 0; d <= 8; ++d) {
            CHECK(basis_size(n, d) == pascal(n + d, n));
            CHECK(monomial_basis(n, d).size() == pascal(n + d, n));
        }
}

TEST_CASE("grevlex rank inverts basis indexing and respects the order") {
    for (int n : {1, 2, 3, 4}) {
        const auto b = monomial_basis(n, 4);
        for (std::size_t i = 0; i < b.size(); ++i) CHECK(grevlex_rank(b[i], n) == i + 1);
        for (std::size_t i = 0; i + 1 < b.size(); ++i) CHECK(grevlex_less(b[i], b[i + 1]));
    }
    // strict monotonicity on random pairs
    auto g = test_rng(11);
    const auto b = monomial_basis(3, 6);
    for (int t = 0; t < 200; ++t) {
        const auto& a = b[static_cast<std::size_t>(uniform_int(g, 0, static_cast<int>(b.size()) - 1))];
        const auto& c = b[static_cast<std::size_t>(uniform_int(g, 0, static_cast<int>(b.size()) - 1))];
        if (grevlex_less(a, c)) CHECK(grevlex_rank(a, 3) < grevlex_rank(c, 3));
    }
}

TEST_CASE("evaluate on the desired-set polynomial") {
    const Polynomial p = parse2("x1^2 + x2^2 - 0.04");
    CHECK(p.evaluate({1.0, 1.0}) == doctest::Approx(1.96).epsilon(1e-15));
    CHECK(p.evaluate({0.2, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));
    const Polynomial q = parse2("2*x1 - 3*x2^2");
    CHECK(q.evaluate({1.0, 1.0}) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(p.evaluate({1.0}), std::invalid_argument);
}

TEST_CASE("substitution composes and expands") {
    // x1*x2 with x1 -> 1, x2 -> w + u
    const Polynomial p = parse2("x1*x2");
    const auto uw = std::vector<std::string>{"u", "w"};
    std::vector<Polynomial> repl = {Polynomial(2, 1.0), parse_polynomial("w + u", uw)};
    CHECK(p.substitute(repl).same_terms(parse_polynomial("u + w", uw), 1e-15));

    // x2^2 with x2 -> u + w: binomial expansion
    const Polynomial sq = parse2("x2^2");
    std::vector<Polynomial> repl2 = {Polynomial(2, 0.0), parse_polynomial("u + w", uw)};
    CHECK(sq.substitute(repl2).same_terms(parse_polynomial("u^2 + 2*u*w + w^2", uw), 1e-15));

    CHECK_THROWS_AS(p.substitute({Polynomial(2, 1.0)}), std::invalid_argument);
}

TEST_CASE("substitution agrees with pointwise composition") {
    auto g = test_rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = uniform_int(g, 1, 3);
        const int m = uniform_int(g, 1, 3);
        const Polynomial p = random_polynomial(g, n, 4, 5);
        std::vector<Polynomial> sigma;
        for (int i = 0; i < n; ++i) sigma.push_back(random_polynomial(g, m, 2, 3, 2.0));
        const Polynomial composed = p.substitute(sigma);
        for (int pt = 0; pt < 5; ++pt) {
            const auto t = random_point(g, m);
            std::vector<double> inner;
            for (const auto& s : sigma) inner.push_back(s.evaluate(t));
            CHECK(composed.evaluate(t) == doctest::Approx(p.evaluate(inner)).epsilon(1e-9));
        }
    }
}

TEST_CASE("multiply and add basics") {
    const Polynomial x1 = Polynomial::variable(0, 2), x2 = Polynomial::variable(1, 2);
    CHECK((x1 * x2).same_terms(parse2("x1*x2"), 1e-15));
    const Polynomial sum = parse2("x1 + 1") + parse2("-x1");
    CHECK(sum.same_terms(Polynomial(2, 1.0), 1e-15));
    CHECK(sum.term_count() == 1);
    CHECK_THROWS_AS(x1 * Polynomial::variable(0, 3), std::invalid_argument);
}

TEST_CASE("product matches evaluation pointwise on random sparse pairs") {
    auto g = test_rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = uniform_int(g, 1, 4);
        const Polynomial p = random_polynomial(g, n, 3, 6);
        const Polynomial q = random_polynomial(g, n, 3, 6);
        const Polynomial pq = p * q;
        for (int pt = 0; pt < 20; ++pt) {
            const auto t = random_point(g, n);
            const double direct = p.evaluate(t) * q.evaluate(t);
            const double viaprod = pq.evaluate(t);
            CHECK(std::abs(viaprod - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("ring identities hold exactly after normalization") {
    auto g = test_rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = uniform_int(g, 1, 3);
        const Polynomial a = random_polynomial(g, n, 3, 4);
        const Polynomial b = random_polynomial(g, n, 3, 4);
        const Polynomial c = random_polynomial(g, n, 2, 3);
        CHECK((a + b).same_terms(b + a));
        CHECK((a * b).same_terms(b * a));
        CHECK(((a + b) + c).same_terms(a + (b + c), 1e-12));
        CHECK(((a * b) * c).same_terms(a * (b * c), 1e-9));
    }
}

TEST_CASE("degree of products adds when leading terms do not cancel") {
    const Polynomial p = parse2("x1^2 + 1");
    const Polynomial q = parse2("x2^3 - x1");
    CHECK((p * q).degree() == p.degree() + q.degree());
}

TEST_CASE("tiny coefficients are dropped") {
    Polynomial p(1);
    p.add_term(Monomial({1}), 1.0);
    p.add_term(Monomial({1}), -1.0 + 1e-16);
    CHECK(p.is_zero());
}

TEST_CASE("parsing is whitespace-insensitive with implicit unit coefficients") {
    const auto vars = std::vector<std::string>{"x1", "x2"};
    const Polynomial a = parse_polynomial("2*x1^2*x2 - 0.04", vars);
    const Polynomial b = parse_polynomial("  2 * x1 ^ 2 * x2-0.04 ", vars);
    CHECK(a.same_terms(b));
    CHECK(a.coefficient(Monomial({2, 1})) == doctest::Approx(2.0));
    CHECK(parse_polynomial("x1*x2", vars).coefficient(Monomial({1, 1})) == doctest::Approx(1.0));
    CHECK(parse_polynomial("-x1 + x1", vars).is_zero());
    CHECK_THROWS_AS(parse_polynomial("x3 + 1", vars), std::invalid_argument);
    CHECK_THROWS_AS(parse_polynomial("", vars), std::invalid_argument);
    CHECK_THROWS_AS(parse_polynomial("2 x1", vars), std::invalid_argument);
}

TEST_CASE("format/parse round trip") {
    auto g = test_rng(5);
    const auto vars = std::vector<std::string>{"x1", "x2", "x3"};
    for (int trial = 0; trial < 20; ++trial) {
        const Polynomial p = random_polynomial(g, 3, 4, 6);
        const Polynomial back = parse_polynomial(format_polynomial(p, vars), vars);
        CHECK(back.same_terms(p, 1e-12));
    }
    CHECK(format_polynomial(Polynomial(3), vars) == "0");
}
