#pragma once

#include <cstdint>
#include <vector>

namespace ccmpc {

// Exponent vector of a monomial x^alpha over a fixed number of variables.
// Ordering everywhere in this project is grevlex: total degree first, ties
// broken by comparing exponents from the last position (larger last exponent
// ranks later). This matches the column order 1, x1, x2, x1^2, x1*x2, x2^2
// used for moment vectors.
struct Monomial {
    std::vector<int> exponents;

    Monomial() = default;
    explicit Monomial(std::vector<int> e) : exponents(std::move(e)) {}
    static Monomial constant(int num_vars) { return Monomial(std::vector<int>(num_vars, 0)); }
    static Monomial variable(int index, int num_vars, int power = 1);

    int num_vars() const { return static_cast<int>(exponents.size()); }
    int degree() const;
    bool is_constant() const { return degree() == 0; }

    Monomial operator*(const Monomial& other) const;
    bool operator==(const Monomial& other) const { return exponents == other.exponents; }
};

// Strict grevlex order; throws on mismatched variable counts.
bool grevlex_less(const Monomial& a, const Monomial& b);

struct GrevlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_less(a, b); }
};

// binomial(n, k) in exact 64-bit arithmetic; throws on overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Number of monomials in n variables with total degree <= d.
std::uint64_t basis_size(int n, int d);

// 1-based position of alpha in the grevlex enumeration of all monomials of
// n variables (degree ascending, grevlex within each degree). Bijective.
std::uint64_t grevlex_rank(const Monomial& alpha, int n);

// All monomials of n variables with degree <= d, in grevlex order.
std::vector<Monomial> monomial_basis(int n, int d);

}  // namespace ccmpc
