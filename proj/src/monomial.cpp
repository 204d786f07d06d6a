#include "ccmpc/monomial.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace ccmpc {

Monomial Monomial::variable(int index, int num_vars, int power) {
    if (index < 0 || index >= num_vars) throw std::invalid_argument("variable index out of range");
    std::vector<int> e(num_vars, 0);
    e[index] = power;
    return Monomial(std::move(e));
}

int Monomial::degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), 0);
}

Monomial Monomial::operator*(const Monomial& other) const {
    if (exponents.size() != other.exponents.size())
        throw std::invalid_argument("monomial product: variable count mismatch");
    Monomial out = *this;
    for (std::size_t i = 0; i < exponents.size(); ++i) out.exponents[i] += other.exponents[i];
    return out;
}

bool grevlex_less(const Monomial& a, const Monomial& b) {
    if (a.exponents.size() != b.exponents.size())
        throw std::invalid_argument("grevlex compare: variable count mismatch");
    const int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    // Same degree: compare from the last position; the first differing
    // exponent decides, larger exponent ranks later.
    for (std::size_t i = a.exponents.size(); i-- > 0;) {
        if (a.exponents[i] != b.exponents[i]) return a.exponents[i] < b.exponents[i];
    }
    return false;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t num = n - k + i;
        // result * num never overflows at the sizes this project uses, but
        // guard anyway since ranks feed container indexing.
        if (result > std::numeric_limits<std::uint64_t>::max() / num)
            throw std::overflow_error("binomial overflow");
        result = result * num / i;
    }
    return result;
}

std::uint64_t basis_size(int n, int d) {
    if (n < 1 || d < 0) throw std::invalid_argument("basis_size: need n >= 1, d >= 0");
    return binomial(static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(n));
}

namespace {

// Position (0-based) of alpha within the grevlex enumeration of monomials of
// exact degree d in n variables: all monomials with smaller last exponent
// come first, then recurse on the leading n-1 variables.
std::uint64_t rank_within_degree(const std::vector<int>& alpha, int n, int d) {
    if (n == 1) return 0;
    const int last = alpha[static_cast<std::size_t>(n) - 1];
    std::uint64_t offset = 0;
    for (int j = 0; j < last; ++j) {
        // monomials of exact degree d - j in n - 1 variables
        offset += binomial(static_cast<std::uint64_t>(d - j) + static_cast<std::uint64_t>(n) - 2,
                           static_cast<std::uint64_t>(n) - 2);
    }
    std::vector<int> head(alpha.begin(), alpha.end() - 1);
    return offset + rank_within_degree(head, n - 1, d - last);
}

}  // namespace

std::uint64_t grevlex_rank(const Monomial& alpha, int n) {
    if (alpha.num_vars() != n) throw std::invalid_argument("grevlex_rank: variable count mismatch");
    for (int e : alpha.exponents)
        if (e < 0) throw std::invalid_argument("grevlex_rank: negative exponent");
    const int d = alpha.degree();
    const std::uint64_t below = d == 0 ? 0 : basis_size(n, d - 1);
    return below + rank_within_degree(alpha.exponents, n, d) + 1;
}

namespace {

void gen_degree_class(int n, int d, std::vector<int>& scratch, std::vector<Monomial>& out) {
    if (n == 1) {
        scratch[0] = d;
        out.emplace_back(scratch);
        return;
    }
    for (int last = 0; last <= d; ++last) {
        scratch[static_cast<std::size_t>(n) - 1] = last;
        std::vector<int> head(static_cast<std::size_t>(n) - 1, 0);
        std::vector<Monomial> sub;
        gen_degree_class(n - 1, d - last, head, sub);
        for (const auto& m : sub) {
            for (int i = 0; i < n - 1; ++i) scratch[static_cast<std::size_t>(i)] = m.exponents[static_cast<std::size_t>(i)];
            out.emplace_back(scratch);
        }
    }
}

}  // namespace

std::vector<Monomial> monomial_basis(int n, int d) {
    if (n < 1 || d < 0) throw std::invalid_argument("monomial_basis: need n >= 1, d >= 0");
    std::vector<Monomial> out;
    out.reserve(basis_size(n, d));
    std::vector<int> scratch(static_cast<std::size_t>(n), 0);
    for (int deg = 0; deg <= d; ++deg) {
        std::fill(scratch.begin(), scratch.end(), 0);
        gen_degree_class(n, deg, scratch, out);
    }
    return out;
}

}  // namespace ccmpc
