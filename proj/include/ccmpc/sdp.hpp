#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ccmpc {

// Linear matrix inequality problem over a decision vector z:
//
//   minimize    objective . z + objective_constant
//   subject to  F0_b + sum_i z_i Fi_b  PSD   for every block b
//               a . z  = rhs                 (equalities)
//               a . z >= rhs                 (inequalities)
//
// Block entries are stored on the upper triangle and mirrored, so every block
// is symmetric as an affine map by construction.
struct SdpBlock {
    struct Term {
        int var;
        int row;
        int col;  // row <= col after canonicalize()
        double coeff;
    };
    int side = 0;
    Eigen::MatrixXd f0;
    std::vector<Term> terms;
    std::string label;
};

struct LinearConstraint {
    Eigen::VectorXd coeffs;
    double rhs = 0.0;
    std::string label;
};

struct SdpProblem {
    int num_vars = 0;
    Eigen::VectorXd objective;
    double objective_constant = 0.0;
    std::vector<SdpBlock> blocks;
    std::vector<LinearConstraint> equalities;
    std::vector<LinearConstraint> inequalities;

    int add_block(int side, std::string label = "");
    void add_block_const(int block, int row, int col, double value);
    void add_block_term(int block, int var, int row, int col, double coeff);
    void add_equality(const Eigen::VectorXd& coeffs, double rhs, std::string label = "");
    void add_inequality(const Eigen::VectorXd& coeffs, double rhs, std::string label = "");

    // Sorts and merges duplicate term entries; validates shapes.
    void canonicalize();
    // F0_b + sum_i z_i Fi_b for one block.
    Eigen::MatrixXd block_value(int block, const Eigen::VectorXd& z) const;
};

struct SolverSettings {
    double feasibility_tol = 1e-7;
    double gap_tol = 1e-7;
    int max_iterations = 200;
    double step_fraction = 0.98;  // step-length safeguard in (0, 1)
    bool verbose = false;

    void validate() const;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kMaxIterations, kNumericalFailure };

std::string to_string(SolveStatus s);

struct SdpSolution {
    SolveStatus status = SolveStatus::kNumericalFailure;
    Eigen::VectorXd z;
    double objective = 0.0;       // objective . z + objective_constant
    double dual_objective = 0.0;  // includes objective_constant
    double primal_infeas = 0.0;
    double dual_infeas = 0.0;
    double gap = 0.0;
    int iterations = 0;
    // Dual certificate: one PSD multiplier per block of the problem as given,
    // plus scalar multipliers for the inequality and equality rows.
    std::vector<Eigen::MatrixXd> block_duals;
    Eigen::VectorXd ineq_duals;
    Eigen::VectorXd eq_duals;
};

// Primal-dual interior-point solve (HKM direction, Mehrotra
// predictor-corrector, dense linear algebra). Deterministic:
// identical inputs give identical outputs.
SdpSolution solve(const SdpProblem& problem, const SolverSettings& settings = {});

// Recomputes the certificate quantities of a solution from scratch; used to
// cross-check the numbers the solver reports.
struct CertificateCheck {
    double primal_infeas = 0.0;
    double dual_infeas = 0.0;
    double gap = 0.0;
};
CertificateCheck verify_certificate(const SdpProblem& problem, const SdpSolution& solution);

// PSD test via the minimum eigenvalue of the symmetrized matrix. Throws if
// the input is not symmetric to 1e-12 (relative to the largest entry).
struct PsdCheck {
    bool ok = false;
    double min_eigenvalue = 0.0;
};
PsdCheck psd_check(const Eigen::MatrixXd& matrix, double tol);

// Null-space elimination of the equality rows: returns an equivalent problem
// without equalities plus the affine map back to the original coordinates
// (z = particular + basis * w). Throws if the rows are inconsistent.
struct ReducedProblem {
    SdpProblem problem;
    Eigen::VectorXd particular;
    Eigen::MatrixXd basis;
};
ReducedProblem eliminate_equalities(const SdpProblem& problem);

}  // namespace ccmpc
