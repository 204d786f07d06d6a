#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccmpc/extraction.hpp"
#include "ccmpc/relaxation.hpp"
#include "ccmpc/rng.hpp"

namespace ccmpc {

struct RunConfig {
    std::uint64_t seed = 0;
    int max_steps = 25;
    double epsilon = 0.01;  // level-set threshold for the reach-bound report
    int mc_samples = 100000;
    bool mc_strict = false;  // abort on a validated chance-constraint shortfall

    void validate() const;
};

struct StepResult {
    SolveStatus status = SolveStatus::kNumericalFailure;
    std::vector<double> input;           // first input vector u_k (n_u entries)
    std::vector<double> input_sequence;  // full horizon sequence (unscaled)
    double objective = 0.0;
    double moment_trace = 0.0;
    double rank_ratio = 0.0;
    bool certified = false;
    double required_prob = 0.0;
    int iterations = 0;

    bool ok() const { return status == SolveStatus::kOptimal; }
};

// One receding-horizon step: build the relaxation at x_k (on the scaled
// problem when cfg.scale_variables is set), solve, extract, undo scaling.
StepResult step(const ProblemSpec& spec, const std::vector<double>& x_k, const RelaxationConfig& cfg,
                const SolverSettings& settings);

struct McEstimate {
    double probability = 0.0;
    double halfwidth = 0.0;  // 1.96 * sqrt(p(1-p)/n)
    std::int64_t successes = 0;
    std::int64_t samples = 0;
};

// Number of i.i.d. disturbance draws landing in the contraction event
// { P_chiD(f(x,u,w)) <= alpha P_chiD(x) } (or the paper-literal complementary
// event under that sign mode). The two kernels count the same integer:
// per-sample counter RNG plus an order-independent integer reduction make the
// parallel version bit-identical to the serial one.
std::int64_t mc_contraction_count(const ProblemSpec& spec, const std::vector<double>& x_k,
                                  const std::vector<double>& u_k, std::int64_t samples, std::uint64_t seed,
                                  std::uint64_t stream = kStreamValidation);
std::int64_t mc_contraction_count_serial(const ProblemSpec& spec, const std::vector<double>& x_k,
                                         const std::vector<double>& u_k, std::int64_t samples, std::uint64_t seed,
                                         std::uint64_t stream = kStreamValidation);

// Empirical contraction probability with a 95% confidence halfwidth.
McEstimate mc_validate(const ProblemSpec& spec, const std::vector<double>& x_k, const std::vector<double>& u_k,
                       std::int64_t samples, std::uint64_t seed);

struct StepRecord {
    int k = 0;
    std::vector<double> state;
    std::vector<double> input;
    std::vector<double> disturbance;
    double desired_value = 0.0;  // P_chiD(x_k)
    double required_prob = 0.0;
    double mc_probability = 0.0;
    double mc_halfwidth = 0.0;
    double sdp_objective = 0.0;
    double moment_trace = 0.0;
    double rank_ratio = 0.0;
    bool certified = false;
    std::string solver_status;
};

struct TrajectoryLog {
    std::uint64_t seed = 0;
    std::vector<StepRecord> steps;
    std::vector<double> final_state;
    double final_desired_value = 0.0;
    bool reached = false;
    std::string termination;  // reached | step_cap | solver_* | validation_failure

    std::string to_json() const;
    std::string to_csv() const;
};

// Closed-loop run: solve, apply the first input, draw the disturbance from
// the seeded generator, propagate, log; stops on P_chiD(x) <= 0 or the step
// cap. Deterministic for a fixed seed.
TrajectoryLog simulate(const ProblemSpec& spec, const std::vector<double>& x0, const RunConfig& run,
                       const RelaxationConfig& cfg, const SolverSettings& settings);

// Replay: apply the given per-step inputs and disturbances, no solver, no MC.
TrajectoryLog replay(const ProblemSpec& spec, const std::vector<double>& x0,
                     const std::vector<std::vector<double>>& inputs,
                     const std::vector<std::vector<double>>& disturbances);

// Reach bounds: smallest step count guaranteeing the epsilon level set,
// and the lower bound on the probability of getting there.
int reach_step_bound(double epsilon, double alpha, double p0);
double reach_probability_bound(double alpha, double beta, int khat);
double reach_probability_limit(double alpha, double beta);

}  // namespace ccmpc
