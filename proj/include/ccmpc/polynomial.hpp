#pragma once

#include <map>
#include <string>
#include <vector>

#include "ccmpc/monomial.hpp"

namespace ccmpc {

// Sparse multivariate polynomial with double coefficients over an anonymous
// variable space of fixed size. Terms are kept grevlex-sorted and never store
// a zero coefficient; coefficients below kCoeffDropTol are dropped after
// every arithmetic operation.
class Polynomial {
  public:
    static constexpr double kCoeffDropTol = 1e-14;

    Polynomial() : num_vars_(0) {}
    explicit Polynomial(int num_vars) : num_vars_(num_vars) {}
    Polynomial(int num_vars, double constant);

    static Polynomial variable(int index, int num_vars);
    static Polynomial from_terms(int num_vars, const std::vector<std::pair<Monomial, double>>& terms);

    int num_vars() const { return num_vars_; }
    int degree() const;
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Monomial, double, GrevlexLess>& terms() const { return terms_; }

    double coefficient(const Monomial& m) const;
    double constant_term() const;

    void add_term(const Monomial& m, double coeff);

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator*(double scalar) const;
    Polynomial operator-() const { return (*this) * -1.0; }
    Polynomial pow(int exponent) const;

    bool same_terms(const Polynomial& other, double tol = 0.0) const;

    double evaluate(const std::vector<double>& point) const;

    // Composes this polynomial with one replacement polynomial per variable.
    // All replacements must share a common target variable space.
    Polynomial substitute(const std::vector<Polynomial>& replacements) const;

  private:
    void check_same_space(const Polynomial& other) const;

    int num_vars_;
    std::map<Monomial, double, GrevlexLess> terms_;
};

// Text form used by config files: "2*x1^2*x2 - 0.04" with the variable names
// supplied by the caller. Whitespace-insensitive, '^' is exponentiation,
// implicit coefficient 1.
Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& var_names);
std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& var_names);

// Variable-name helpers for the spaces used throughout the pipeline.
std::vector<std::string> numbered_names(const std::string& prefix, int count);
std::vector<std::string> concat_names(const std::vector<std::vector<std::string>>& groups);

}  // namespace ccmpc
