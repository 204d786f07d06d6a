#pragma once

#include <cstdint>
#include <vector>

#include "ccmpc/dynamics.hpp"
#include "ccmpc/sdp.hpp"

namespace ccmpc {

struct RelaxationConfig {
    int order = 5;              // relaxation order r
    double trace_weight = 1.0;  // omega_r, weight of Tr(M_r(y_u)) in the objective
    bool scale_variables = true;
};

// Decision vector layout of the relaxation SDP. Segment one holds the input
// moment vector y_u over the stacked inputs (its rank-0 entry is pinned to 1
// and not a decision variable); segment two holds the joint moment vector y
// over (u_k, w_k).
struct RelaxationLayout {
    int order = 0;
    int input_vars = 0;  // stacked input count, the y_u space
    int joint_vars = 0;  // n_u + n_w, the y space
    std::int64_t yu_size = 0;
    std::int64_t y_size = 0;

    int num_vars() const { return static_cast<int>(yu_size - 1 + y_size); }
    // Decision index of a y_u moment by 0-based grevlex rank; -1 means the
    // pinned unit mass.
    int yu_var(std::int64_t rank0) const { return rank0 == 0 ? -1 : static_cast<int>(rank0 - 1); }
    int y_var(std::int64_t rank0) const { return static_cast<int>(yu_size - 1 + rank0); }

    // Reconstruct the two moment sequences from a solved decision vector.
    MomentSequence yu_moments(const Eigen::VectorXd& z) const;
    MomentSequence y_moments(const Eigen::VectorXd& z) const;
};

struct Relaxation {
    SdpProblem problem;
    RelaxationLayout layout;
    double required_mass = 0.0;  // right-hand side of the (y)_0 inequality
    Polynomial expected_cost_poly;  // P_E over the stacked inputs
    Polynomial constraint_poly;     // P_K over (u_k, w_k)
};

// Smallest admissible relaxation order for a spec at a given state.
int min_relaxation_order(const ProblemSpec& spec, const std::vector<double>& x_k);

// Assembles the moment SDP: moment/localizing blocks for y on K and its
// support, blocks for y_u on U, the product-measure domination block, the
// mass inequality, and the expected-cost-plus-trace objective.
Relaxation build_relaxation(const ProblemSpec& spec, const std::vector<double>& x_k, const RelaxationConfig& cfg);

// Affine change of variables pulling every input/disturbance coordinate into
// [-1, 1]; original = center + half * scaled.
struct AxisMap {
    double center = 0.0;
    double half = 1.0;
};

struct ScaledSpec {
    ProblemSpec spec;
    std::vector<AxisMap> input_maps;  // one per model input coordinate
    std::vector<AxisMap> dist_maps;   // one per disturbance coordinate

    std::vector<double> unscale_inputs(const std::vector<double>& scaled) const;
};

ScaledSpec scale_problem(const ProblemSpec& spec);

}  // namespace ccmpc
