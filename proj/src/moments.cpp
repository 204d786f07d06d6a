#include "ccmpc/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace ccmpc {

double MomentSequence::moment(const Monomial& alpha) const {
    if (alpha.degree() > max_degree)
        throw std::out_of_range("moment of order " + std::to_string(alpha.degree()) + " not stored (max degree " +
                                std::to_string(max_degree) + ")");
    return values[static_cast<Eigen::Index>(grevlex_rank(alpha, num_vars) - 1)];
}

void MomentSequence::set_moment(const Monomial& alpha, double v) {
    if (alpha.degree() > max_degree) throw std::out_of_range("set_moment: order beyond truncation");
    values[static_cast<Eigen::Index>(grevlex_rank(alpha, num_vars) - 1)] = v;
}

std::string MomentSequence::to_json() const {
    nlohmann::json j;
    j["num_vars"] = num_vars;
    j["max_degree"] = max_degree;
    j["values"] = std::vector<double>(values.data(), values.data() + values.size());
    return j.dump();
}

MomentSequence MomentSequence::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    MomentSequence y(j.at("num_vars").get<int>(), j.at("max_degree").get<int>());
    const auto vals = j.at("values").get<std::vector<double>>();
    if (vals.size() != static_cast<std::size_t>(y.values.size()))
        throw std::invalid_argument("moment sequence JSON: wrong value count");
    for (std::size_t i = 0; i < vals.size(); ++i) y.values[static_cast<Eigen::Index>(i)] = vals[i];
    return y;
}

double linear_functional(const MomentSequence& y, const Polynomial& p) {
    if (p.num_vars() != y.num_vars)
        throw std::invalid_argument("linear_functional: variable count mismatch");
    if (p.degree() > y.max_degree)
        throw std::out_of_range("linear_functional: needs moments up to order " + std::to_string(p.degree()) +
                                ", stored only up to order " + std::to_string(y.max_degree));
    double total = 0.0;
    for (const auto& [m, c] : p.terms()) total += c * y.moment(m);
    return total;
}

MomentSequence uniform_moments(double a, double b, int max_degree) {
    if (!(a < b)) throw std::invalid_argument("uniform_moments: need a < b");
    MomentSequence y(1, max_degree);
    const double width = b - a;
    double pa = a, pb = b;  // a^{j+1}, b^{j+1}
    for (int j = 0; j <= max_degree; ++j) {
        y.values[j] = (pb - pa) / ((j + 1) * width);
        pa *= a;
        pb *= b;
    }
    return y;
}

MomentSequence delta_moments(const std::vector<double>& point, int max_degree) {
    const int n = static_cast<int>(point.size());
    if (n < 1) throw std::invalid_argument("delta_moments: empty point");
    MomentSequence y(n, max_degree);
    const auto basis = monomial_basis(n, max_degree);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        double v = 1.0;
        for (int k = 0; k < n; ++k)
            for (int e = 0; e < basis[i].exponents[static_cast<std::size_t>(k)]; ++e)
                v *= point[static_cast<std::size_t>(k)];
        y.values[static_cast<Eigen::Index>(i)] = v;
    }
    return y;
}

MomentSequence product_moments(const std::vector<MomentSequence>& ys) {
    if (ys.empty()) throw std::invalid_argument("product_moments: empty list");
    const int d = ys.front().max_degree;
    int n_total = 0;
    for (const auto& y : ys) {
        if (y.max_degree != d) throw std::invalid_argument("product_moments: truncation degrees differ");
        n_total += y.num_vars;
    }
    MomentSequence out(n_total, d);
    const auto basis = monomial_basis(n_total, d);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        double v = 1.0;
        int offset = 0;
        for (const auto& y : ys) {
            Monomial part(std::vector<int>(basis[i].exponents.begin() + offset,
                                           basis[i].exponents.begin() + offset + y.num_vars));
            v *= y.moment(part);
            offset += y.num_vars;
        }
        out.values[static_cast<Eigen::Index>(i)] = v;
    }
    return out;
}

Eigen::MatrixXd moment_matrix(const MomentSequence& y, int r) {
    if (y.max_degree < 2 * r)
        throw std::out_of_range("moment_matrix: need moments up to order " + std::to_string(2 * r));
    const auto basis = monomial_basis(y.num_vars, r);
    const Eigen::Index s = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd M(s, s);
    for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = i; j < s; ++j) {
            const double v = y.moment(basis[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(j)]);
            M(i, j) = v;
            M(j, i) = v;
        }
    return M;
}

Eigen::MatrixXd localizing_matrix(const MomentSequence& y, const Polynomial& p, int r) {
    if (p.num_vars() != y.num_vars)
        throw std::invalid_argument("localizing_matrix: variable count mismatch");
    if (y.max_degree < 2 * r + p.degree())
        throw std::out_of_range("localizing_matrix: need moments up to order " + std::to_string(2 * r + p.degree()));
    const auto basis = monomial_basis(y.num_vars, r);
    const Eigen::Index s = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd M(s, s);
    for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = i; j < s; ++j) {
            const Monomial ij = basis[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(j)];
            double v = 0.0;
            for (const auto& [g, c] : p.terms()) v += c * y.moment(g * ij);
            M(i, j) = v;
            M(j, i) = v;
        }
    return M;
}

namespace {

double min_eigenvalue(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

MeasureCheck representing_measure_check(const MomentSequence& y, const std::vector<Polynomial>& constraints,
                                        int r, double tol) {
    MeasureCheck out;
    out.moment_matrix_min_eig = min_eigenvalue(moment_matrix(y, r));
    out.ok = out.moment_matrix_min_eig >= -tol;
    for (const auto& p : constraints) {
        const int rj = r - (p.degree() + 1) / 2;
        if (rj < 0) throw std::invalid_argument("representing_measure_check: order too small for constraint degree");
        const double e = min_eigenvalue(localizing_matrix(y, p, rj));
        out.localizing_min_eigs.push_back(e);
        out.ok = out.ok && e >= -tol;
    }
    return out;
}

void DisturbanceSpec::validate() const {
    if (support.empty()) throw std::invalid_argument("disturbance: empty support");
    for (const auto& [a, b] : support)
        if (a > b) throw std::invalid_argument("disturbance: interval with a > b");
}

double DisturbanceSpec::coordinate_moment(int coord, int order) const {
    const auto& [a, b] = support.at(static_cast<std::size_t>(coord));
    if (a == b) {  // point mass
        double v = 1.0;
        for (int k = 0; k < order; ++k) v *= a;
        return v;
    }
    double pa = a, pb = b;
    for (int k = 0; k < order; ++k) {
        pa *= a;
        pb *= b;
    }
    return (pb - pa) / ((order + 1) * (b - a));
}

MomentSequence DisturbanceSpec::step_moments(int max_degree) const {
    std::vector<MomentSequence> per_coord;
    for (int c = 0; c < dimension(); ++c) {
        const auto& [a, b] = support[static_cast<std::size_t>(c)];
        per_coord.push_back(a == b ? delta_moments({a}, max_degree) : uniform_moments(a, b, max_degree));
    }
    return per_coord.size() == 1 ? per_coord.front() : product_moments(per_coord);
}

double DisturbanceSpec::draw_coordinate(int coord, double u01) const {
    const auto& [a, b] = support.at(static_cast<std::size_t>(coord));
    return a + (b - a) * u01;
}

}  // namespace ccmpc
