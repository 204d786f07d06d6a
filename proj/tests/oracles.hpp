#pragma once

// Test-side oracles, independent of the production solve path:
//  - ellipsoid method (subgradient cuts only) for small LMI problems,
//  - exhaustive grid refinement for 1-2 variable problems,
//  - a generator of random strictly feasible bounded block SDPs,
//  - exact moments of a delta x uniform measure restricted to a
//    one-dimensional polynomial section (piecewise power integrals).

#include <optional>
#include <random>
#include <vector>

#include "ccmpc/dynamics.hpp"
#include "ccmpc/moments.hpp"
#include "ccmpc/sdp.hpp"

namespace ccmpc::testing {

struct OracleResult {
    bool solved = false;
    double objective = 0.0;
    Eigen::VectorXd argmin;
};

// Minimizes objective . z over {F(z) PSD, inequalities} inside |z_i| <= radius
// using ellipsoid cuts: a feasibility cut from the most negative eigenvector,
// an objective cut at feasible centers. Certified by the ellipsoid bound
// objective >= best - gap.
OracleResult ellipsoid_oracle(const SdpProblem& problem, double radius, double gap = 1e-6,
                              int max_iterations = 400000);

// Exhaustive nested grid search for problems with at most two variables.
OracleResult grid_oracle(const SdpProblem& problem, double radius, int levels = 28, int points = 33);

// Random strictly feasible block SDP with box-bounded variables: F(z0) is PD
// by construction and every |z_i| <= box_radius is kept via inequality rows.
SdpProblem random_feasible_sdp(std::mt19937_64& rng, int num_vars, int num_blocks, int max_side,
                               double box_radius = 2.0);

// Moment sequence of the measure 1_{section(w) >= 0} . (delta_u x mu_w) over
// the joint (u_k, w_k) space, computed by exact integration of w powers over
// the sign-positive intervals of the section polynomial. Requires n_w == 1.
MomentSequence restricted_pair_moments(const ProblemSpec& spec, const std::vector<double>& x_k,
                                       const std::vector<double>& u_star, int max_degree);

// Roots of a univariate polynomial inside [lo, hi] via the companion matrix.
std::vector<double> real_roots_in_interval(const Polynomial& p, double lo, double hi);

}  // namespace ccmpc::testing
