#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ccmpc/polynomial.hpp"

namespace ccmpc {

// Truncated moment vector of a measure, indexed by grevlex rank. values[0]
// is the measure mass (moment of the constant monomial).
struct MomentSequence {
    int num_vars = 0;
    int max_degree = 0;
    Eigen::VectorXd values;

    MomentSequence() = default;
    MomentSequence(int n, int d) : num_vars(n), max_degree(d) {
        values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_size(n, d)));
    }

    double mass() const { return values.size() > 0 ? values[0] : 0.0; }
    double moment(const Monomial& alpha) const;
    void set_moment(const Monomial& alpha, double v);

    std::string to_json() const;
    static MomentSequence from_json(const std::string& text);
};

// L_y(p) = sum_alpha p_alpha y_alpha. Throws when p needs moments beyond
// y.max_degree, naming the missing order.
double linear_functional(const MomentSequence& y, const Polynomial& p);

// Moments of the uniform distribution on [a, b] (one variable):
// y_j = (b^{j+1} - a^{j+1}) / ((j+1)(b-a)).
MomentSequence uniform_moments(double a, double b, int max_degree);

// Moments of the Dirac measure at a point: y_alpha = point^alpha.
MomentSequence delta_moments(const std::vector<double>& point, int max_degree);

// Joint moment sequence of a product measure over the concatenated variable
// space, truncated to the common max degree.
MomentSequence product_moments(const std::vector<MomentSequence>& ys);

// Moment matrix M_r(y): side basis_size(n, r), entry (i,j) = y_{a(i)+a(j)}.
Eigen::MatrixXd moment_matrix(const MomentSequence& y, int r);

// Localizing matrix M_r(y; p): entry (i,j) = sum_g p_g y_{g+a(i)+a(j)}.
Eigen::MatrixXd localizing_matrix(const MomentSequence& y, const Polynomial& p, int r);

struct MeasureCheck {
    bool ok = false;
    double moment_matrix_min_eig = 0.0;
    std::vector<double> localizing_min_eigs;
};

// Necessary representing-measure conditions at order r: the moment matrix and
// every localizing matrix (taken at order r - ceil(deg/2)) must have minimum
// eigenvalue >= -tol.
MeasureCheck representing_measure_check(const MomentSequence& y, const std::vector<Polynomial>& constraints,
                                        int r, double tol);

// Disturbance model for one time step. kind "uniform" with per-coordinate
// support intervals; a zero-width interval degenerates to a point mass.
struct DisturbanceSpec {
    enum class Kind { kUniform };
    Kind kind = Kind::kUniform;
    std::vector<std::pair<double, double>> support;  // one [a, b] per coordinate

    int dimension() const { return static_cast<int>(support.size()); }
    void validate() const;

    // E[w_coord^order] for a single coordinate.
    double coordinate_moment(int coord, int order) const;
    // Joint per-step moments over all coordinates (independent coordinates).
    MomentSequence step_moments(int max_degree) const;
    // Inverse-CDF draw for one coordinate from a uniform [0,1) variate.
    double draw_coordinate(int coord, double u01) const;
};

}  // namespace ccmpc
