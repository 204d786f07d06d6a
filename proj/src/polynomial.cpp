#include "ccmpc/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace ccmpc {

Polynomial::Polynomial(int num_vars, double constant) : num_vars_(num_vars) {
    add_term(Monomial::constant(num_vars), constant);
}

Polynomial Polynomial::variable(int index, int num_vars) {
    Polynomial p(num_vars);
    p.add_term(Monomial::variable(index, num_vars), 1.0);
    return p;
}

Polynomial Polynomial::from_terms(int num_vars, const std::vector<std::pair<Monomial, double>>& terms) {
    Polynomial p(num_vars);
    for (const auto& [m, c] : terms) p.add_term(m, c);
    return p;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

double Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::constant_term() const {
    if (num_vars_ == 0) return 0.0;
    return coefficient(Monomial::constant(num_vars_));
}

void Polynomial::add_term(const Monomial& m, double coeff) {
    if (m.num_vars() != num_vars_) throw std::invalid_argument("add_term: variable count mismatch");
    auto [it, inserted] = terms_.try_emplace(m, coeff);
    if (!inserted) it->second += coeff;
    if (std::abs(it->second) < kCoeffDropTol) terms_.erase(it);
}

void Polynomial::check_same_space(const Polynomial& other) const {
    if (num_vars_ != other.num_vars_)
        throw std::invalid_argument("polynomial arithmetic: variable count mismatch");
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    check_same_space(other);
    Polynomial out = *this;
    for (const auto& [m, c] : other.terms_) out.add_term(m, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    check_same_space(other);
    Polynomial out = *this;
    for (const auto& [m, c] : other.terms_) out.add_term(m, -c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    check_same_space(other);
    // Collect the contributions per target monomial and sum them in sorted
    // order: the result is independent of the operand order.
    std::map<Monomial, std::vector<double>, GrevlexLess> contributions;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : other.terms_) contributions[ma * mb].push_back(ca * cb);
    Polynomial out(num_vars_);
    for (auto& [m, values] : contributions) {
        std::sort(values.begin(), values.end());
        double total = 0.0;
        for (double v : values) total += v;
        out.add_term(m, total);
    }
    return out;
}

Polynomial Polynomial::operator*(double scalar) const {
    Polynomial out(num_vars_);
    for (const auto& [m, c] : terms_) out.add_term(m, c * scalar);
    return out;
}

Polynomial Polynomial::pow(int exponent) const {
    if (exponent < 0) throw std::invalid_argument("pow: negative exponent");
    Polynomial out(num_vars_, 1.0);
    for (int i = 0; i < exponent; ++i) out = out * (*this);
    return out;
}

bool Polynomial::same_terms(const Polynomial& other, double tol) const {
    if (num_vars_ != other.num_vars_) return false;
    if (tol == 0.0) {
        if (terms_.size() != other.terms_.size()) return false;
        auto it = other.terms_.begin();
        for (const auto& [m, c] : terms_) {
            if (!(m == it->first) || c != it->second) return false;
            ++it;
        }
        return true;
    }
    Polynomial diff = *this - other;
    for (const auto& [m, c] : diff.terms())
        if (std::abs(c) > tol) return false;
    return true;
}

double Polynomial::evaluate(const std::vector<double>& point) const {
    if (static_cast<int>(point.size()) != num_vars_)
        throw std::invalid_argument("evaluate: point dimension mismatch");
    double total = 0.0;
    for (const auto& [m, c] : terms_) {
        double v = c;
        for (int i = 0; i < num_vars_; ++i) {
            const int e = m.exponents[static_cast<std::size_t>(i)];
            for (int k = 0; k < e; ++k) v *= point[static_cast<std::size_t>(i)];
        }
        total += v;
    }
    return total;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& replacements) const {
    if (static_cast<int>(replacements.size()) != num_vars_)
        throw std::invalid_argument("substitute: missing replacement for a variable");
    if (num_vars_ == 0) throw std::invalid_argument("substitute: empty variable space");
    const int target_vars = replacements.front().num_vars();
    for (const auto& r : replacements)
        if (r.num_vars() != target_vars)
            throw std::invalid_argument("substitute: replacements disagree on target space");

    // Cache powers of each replacement up to the max exponent it appears with.
    std::vector<int> max_exp(static_cast<std::size_t>(num_vars_), 0);
    for (const auto& [m, c] : terms_)
        for (int i = 0; i < num_vars_; ++i)
            max_exp[static_cast<std::size_t>(i)] =
                std::max(max_exp[static_cast<std::size_t>(i)], m.exponents[static_cast<std::size_t>(i)]);
    std::vector<std::vector<Polynomial>> powers(static_cast<std::size_t>(num_vars_));
    for (int i = 0; i < num_vars_; ++i) {
        auto& pw = powers[static_cast<std::size_t>(i)];
        pw.push_back(Polynomial(target_vars, 1.0));
        for (int e = 1; e <= max_exp[static_cast<std::size_t>(i)]; ++e)
            pw.push_back(pw.back() * replacements[static_cast<std::size_t>(i)]);
    }

    Polynomial out(target_vars);
    for (const auto& [m, c] : terms_) {
        Polynomial term(target_vars, c);
        for (int i = 0; i < num_vars_; ++i) {
            const int e = m.exponents[static_cast<std::size_t>(i)];
            if (e > 0) term = term * powers[static_cast<std::size_t>(i)][static_cast<std::size_t>(e)];
        }
        out = out + term;
    }
    return out;
}

std::vector<std::string> numbered_names(const std::string& prefix, int count) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(count));
    for (int i = 1; i <= count; ++i) names.push_back(prefix + std::to_string(i));
    return names;
}

std::vector<std::string> concat_names(const std::vector<std::vector<std::string>>& groups) {
    std::vector<std::string> out;
    for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
    return out;
}

namespace {

struct Parser {
    const std::string& text;
    const std::vector<std::string>& vars;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("polynomial parse error at position " + std::to_string(pos) + ": " + what +
                                    " in \"" + text + "\"");
    }

    double parse_number() {
        skip_ws();
        const char* begin = text.c_str() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("expected a number");
        pos += static_cast<std::size_t>(end - begin);
        return v;
    }

    int try_parse_variable() {
        skip_ws();
        int best = -1;
        std::size_t best_len = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            const auto& name = vars[i];
            if (name.size() > best_len && text.compare(pos, name.size(), name) == 0) {
                best = static_cast<int>(i);
                best_len = name.size();
            }
        }
        if (best >= 0) pos += best_len;
        return best;
    }

    int parse_exponent() {
        skip_ws();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) fail("expected exponent");
        int e = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            e = e * 10 + (text[pos] - '0');
            ++pos;
        }
        return e;
    }

    // term := factor {'*' factor}*  where factor := number | var ['^' int]
    void parse_term(double sign, Polynomial& acc) {
        double coeff = sign;
        Monomial mono = Monomial::constant(static_cast<int>(vars.size()));
        while (true) {
            const char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                coeff *= parse_number();
            } else {
                const int v = try_parse_variable();
                if (v < 0) fail("expected a number or a known variable");
                int e = 1;
                if (peek() == '^') {
                    ++pos;
                    e = parse_exponent();
                }
                mono.exponents[static_cast<std::size_t>(v)] += e;
            }
            const char next = peek();
            if (next == '*') {
                ++pos;
                continue;
            }
            if (next == '\0' || next == '+' || next == '-') break;
            fail("expected '*', '+', '-' or end of input after a factor");
        }
        acc.add_term(mono, coeff);
    }

    Polynomial parse() {
        Polynomial acc(static_cast<int>(vars.size()));
        if (at_end()) fail("empty polynomial");
        while (!at_end()) {
            double sign = 1.0;
            while (peek() == '+' || peek() == '-') {
                if (peek() == '-') sign = -sign;
                ++pos;
            }
            parse_term(sign, acc);
        }
        return acc;
    }
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& var_names) {
    Parser parser{text, var_names};
    return parser.parse();
}

std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& var_names) {
    if (static_cast<int>(var_names.size()) != p.num_vars())
        throw std::invalid_argument("format_polynomial: name count mismatch");
    if (p.is_zero()) return "0";
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        const double mag = std::abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        bool printed = false;
        if (mag != 1.0 || m.is_constant()) {
            os << mag;
            printed = true;
        }
        for (int i = 0; i < p.num_vars(); ++i) {
            const int e = m.exponents[static_cast<std::size_t>(i)];
            if (e == 0) continue;
            if (printed) os << "*";
            os << var_names[static_cast<std::size_t>(i)];
            if (e > 1) os << "^" << e;
            printed = true;
        }
    }
    return os.str();
}

}  // namespace ccmpc
