#pragma once

#include <optional>
#include <vector>

#include "ccmpc/moments.hpp"
#include "ccmpc/polynomial.hpp"

namespace ccmpc {

// Discrete-time polynomial system x_{k+1} = f(x_k, u_k, w_k). Each component
// of f is a polynomial over the combined space (x1..x_nx, u1..u_nu, w1..w_nw)
// in that order.
struct SystemModel {
    int n_x = 0;
    int n_u = 0;
    int n_w = 0;
    std::vector<Polynomial> f;

    int combined_vars() const { return n_x + n_u + n_w; }
    void validate() const;
    std::vector<double> step(const std::vector<double>& x, const std::vector<double>& u,
                             const std::vector<double>& w) const;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Set {x : p_i(x) >= 0 (or <= 0)} intersected with a finite bounding box.
struct SemialgebraicSet {
    struct Constraint {
        Polynomial poly;
        bool geq = true;  // true: poly >= 0 on the set, false: poly <= 0
    };
    std::vector<Constraint> constraints;
    std::vector<Interval> box;

    void validate(int expected_vars) const;
    bool contains(const std::vector<double>& point, double tol = 0.0) const;
    bool in_box(const std::vector<double>& point) const;
};

enum class SignMode {
    kContraction,   // K = { a*P(x_k) - P(x_{k+1}) >= 0 }: the state moves toward the target
    kPaperLiteral,  // K = { P(x_{k+1}) - a*P(x_k) >= 0 }, as printed in the constraint
};

struct ProblemSpec {
    SystemModel model;
    SemialgebraicSet desired_set;  // single polynomial P_chiD <= 0 inside; box = state box
    SemialgebraicSet input_set;    // P_U >= 0 over the stacked inputs u_k..u_{k+Np-1}; box per coordinate
    DisturbanceSpec disturbance;
    Polynomial cost;  // over stacked states x_{k+1}..x_{k+Np} then stacked inputs
    double alpha = 0.0;
    double beta = 0.0;
    int horizon = 0;  // N_p
    SignMode sign_mode = SignMode::kContraction;

    int stacked_inputs() const { return horizon * model.n_u; }
    int stacked_dist() const { return horizon * model.n_w; }
    // Horizon decision space: all stacked inputs first, then all stacked
    // disturbances.
    int horizon_vars() const { return stacked_inputs() + stacked_dist(); }

    const Polynomial& desired_poly() const { return desired_set.constraints.front().poly; }
    double desired_value(const std::vector<double>& x) const { return desired_poly().evaluate(x); }

    void validate() const;
};

// State polynomials P_{x_{k+i}}, i = 1..horizon, over the horizon space
// (u_k..u_{k+h-1}, w_k..w_{k+h-1}), obtained by repeated substitution of f
// starting from the numeric x_k. Entry [i-1] only involves the first i
// input/disturbance blocks.
std::vector<std::vector<Polynomial>> unroll(const SystemModel& model, const std::vector<double>& x_k, int horizon);

// E[P_cost] as a polynomial over the stacked inputs alone: substitutes the
// unrolled state polynomials into the cost, then integrates every disturbance
// monomial against the per-step disturbance moments (independent steps).
Polynomial expected_cost(const ProblemSpec& spec, const std::vector<double>& x_k);

// P_K over (u_k, w_k): under contraction mode a*P(x_k) - P(f(x_k, u_k, w_k)),
// under paper-literal mode the negation.
Polynomial constraint_polynomial(const ProblemSpec& spec, const std::vector<double>& x_k);

// clamp(1 - beta * P_chiD(x_k), 0, 1).
double required_probability(const ProblemSpec& spec, const std::vector<double>& x_k);

}  // namespace ccmpc
