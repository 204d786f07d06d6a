#include "ccmpc/mpc.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ccmpc/rng.hpp"
#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccmpc {

void RunConfig::validate() const {
    if (max_steps < 1) throw std::invalid_argument("run: max_steps must be >= 1");
    if (mc_samples < 1) throw std::invalid_argument("run: samples must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("run: epsilon must be > 0");
}

StepResult step(const ProblemSpec& spec, const std::vector<double>& x_k, const RelaxationConfig& cfg,
                const SolverSettings& settings) {
    if (!spec.desired_set.in_box(x_k)) throw std::invalid_argument("step: state outside the declared state box");

    StepResult out;
    out.required_prob = required_probability(spec, x_k);

    const bool scale = cfg.scale_variables;
    ScaledSpec scaled;
    const ProblemSpec* work = &spec;
    if (scale) {
        scaled = scale_problem(spec);
        work = &scaled.spec;
    }

    const Relaxation rel = build_relaxation(*work, x_k, cfg);
    const SdpSolution sol = solve(rel.problem, settings);
    out.status = sol.status;
    out.objective = sol.objective;
    out.iterations = sol.iterations;
    if (!out.ok()) return out;

    const MomentSequence yu = rel.layout.yu_moments(sol.z);
    const ExtractionResult ex = extract_control(yu, cfg.order);
    out.moment_trace = ex.moment_trace;
    out.rank_ratio = ex.rank_ratio;
    out.certified = ex.certified;
    out.input_sequence = scale ? scaled.unscale_inputs(ex.u_star) : ex.u_star;
    out.input.assign(out.input_sequence.begin(), out.input_sequence.begin() + spec.model.n_u);
    return out;
}

namespace {

// Event polynomial over w alone: P_K(u_k, .) with the input fixed. The event
// holds iff the polynomial is >= 0 (both sign modes route through P_K).
Polynomial event_section(const ProblemSpec& spec, const std::vector<double>& x_k, const std::vector<double>& u_k) {
    const Polynomial pk = constraint_polynomial(spec, x_k);
    const int n_u = spec.model.n_u, n_w = spec.model.n_w;
    if (static_cast<int>(u_k.size()) != n_u) throw std::invalid_argument("mc: input dimension mismatch");
    std::vector<Polynomial> repl;
    for (int j = 0; j < n_u; ++j) repl.emplace_back(n_w, u_k[static_cast<std::size_t>(j)]);
    for (int c = 0; c < n_w; ++c) repl.push_back(Polynomial::variable(c, n_w));
    return pk.substitute(repl);
}

inline bool event_hit(const Polynomial& section, const DisturbanceSpec& dist, std::vector<double>& w_scratch,
                      std::uint64_t seed, std::uint64_t stream, std::int64_t sample) {
    for (int c = 0; c < dist.dimension(); ++c)
        w_scratch[static_cast<std::size_t>(c)] =
            dist.draw_coordinate(c, counter_uniform01(seed, stream, static_cast<std::uint32_t>(sample),
                                                      static_cast<std::uint32_t>(c)));
    return section.evaluate(w_scratch) >= 0.0;
}

}  // namespace

std::int64_t mc_contraction_count_serial(const ProblemSpec& spec, const std::vector<double>& x_k,
                                         const std::vector<double>& u_k, std::int64_t samples, std::uint64_t seed,
                                         std::uint64_t stream) {
    const Polynomial section = event_section(spec, x_k, u_k);
    std::vector<double> w(static_cast<std::size_t>(spec.model.n_w));
    std::int64_t count = 0;
    for (std::int64_t s = 0; s < samples; ++s)
        if (event_hit(section, spec.disturbance, w, seed, stream, s)) ++count;
    return count;
}

std::int64_t mc_contraction_count(const ProblemSpec& spec, const std::vector<double>& x_k,
                                  const std::vector<double>& u_k, std::int64_t samples, std::uint64_t seed,
                                  std::uint64_t stream) {
    const Polynomial section = event_section(spec, x_k, u_k);
    std::int64_t count = 0;
#ifdef _OPENMP
#pragma omp parallel reduction(+ : count)
    {
        std::vector<double> w(static_cast<std::size_t>(spec.model.n_w));
#pragma omp for schedule(static)
        for (std::int64_t s = 0; s < samples; ++s)
            if (event_hit(section, spec.disturbance, w, seed, stream, s)) ++count;
    }
#else
    std::vector<double> w(static_cast<std::size_t>(spec.model.n_w));
    for (std::int64_t s = 0; s < samples; ++s)
        if (event_hit(section, spec.disturbance, w, seed, stream, s)) ++count;
#endif
    return count;
}

McEstimate mc_validate(const ProblemSpec& spec, const std::vector<double>& x_k, const std::vector<double>& u_k,
                       std::int64_t samples, std::uint64_t seed) {
    if (samples < 100) throw std::invalid_argument("mc_validate: need at least 100 samples");
    McEstimate est;
    est.samples = samples;
    est.successes = mc_contraction_count(spec, x_k, u_k, samples, seed);
    est.probability = static_cast<double>(est.successes) / static_cast<double>(samples);
    est.halfwidth = 1.96 * std::sqrt(est.probability * (1.0 - est.probability) / static_cast<double>(samples));
    return est;
}

namespace {

nlohmann::json record_json(const StepRecord& r) {
    nlohmann::json j;
    j["k"] = r.k;
    j["state"] = r.state;
    j["input"] = r.input;
    j["disturbance"] = r.disturbance;
    j["desired_value"] = r.desired_value;
    j["required_prob"] = r.required_prob;
    j["mc_probability"] = r.mc_probability;
    j["mc_halfwidth"] = r.mc_halfwidth;
    j["sdp_objective"] = r.sdp_objective;
    j["moment_trace"] = r.moment_trace;
    j["rank_ratio"] = r.rank_ratio;
    j["certified"] = r.certified;
    j["solver_status"] = r.solver_status;
    return j;
}

void record_from_json(const nlohmann::json& j, StepRecord& r) {
    r.k = j.at("k").get<int>();
    r.state = j.at("state").get<std::vector<double>>();
    r.input = j.at("input").get<std::vector<double>>();
    r.disturbance = j.at("disturbance").get<std::vector<double>>();
    r.desired_value = j.at("desired_value").get<double>();
    r.required_prob = j.at("required_prob").get<double>();
    r.mc_probability = j.at("mc_probability").get<double>();
    r.mc_halfwidth = j.at("mc_halfwidth").get<double>();
    r.sdp_objective = j.at("sdp_objective").get<double>();
    r.moment_trace = j.at("moment_trace").get<double>();
    r.rank_ratio = j.at("rank_ratio").get<double>();
    r.certified = j.at("certified").get<bool>();
    r.solver_status = j.at("solver_status").get<std::string>();
}

}  // namespace

std::string TrajectoryLog::to_json() const {
    nlohmann::json j;
    j["generator"] = "philox4x32-10";
    j["seed"] = seed;
    j["reached"] = reached;
    j["termination"] = termination;
    j["final_state"] = final_state;
    j["final_desired_value"] = final_desired_value;
    j["steps"] = nlohmann::json::array();
    for (const auto& r : steps) j["steps"].push_back(record_json(r));
    return j.dump(2);
}

std::string TrajectoryLog::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "k";
    const std::size_t nx = final_state.size();
    const std::size_t nu = steps.empty() ? 0 : steps.front().input.size();
    const std::size_t nw = steps.empty() ? 0 : steps.front().disturbance.size();
    for (std::size_t i = 1; i <= nx; ++i) os << ",x" << i;
    for (std::size_t i = 1; i <= nu; ++i) os << ",u" << i;
    for (std::size_t i = 1; i <= nw; ++i) os << ",w" << i;
    os << ",desired_value,required_prob,mc_probability,mc_halfwidth,sdp_objective,moment_trace,rank_ratio,"
          "certified,solver_status\n";
    for (const auto& r : steps) {
        os << r.k;
        for (double v : r.state) os << "," << v;
        for (double v : r.input) os << "," << v;
        for (double v : r.disturbance) os << "," << v;
        os << "," << r.desired_value << "," << r.required_prob << "," << r.mc_probability << "," << r.mc_halfwidth
           << "," << r.sdp_objective << "," << r.moment_trace << "," << r.rank_ratio << ","
           << (r.certified ? 1 : 0) << "," << r.solver_status << "\n";
    }
    return os.str();
}

TrajectoryLog simulate(const ProblemSpec& spec, const std::vector<double>& x0, const RunConfig& run,
                       const RelaxationConfig& cfg, const SolverSettings& settings) {
    spec.validate();
    run.validate();
    TrajectoryLog log;
    log.seed = run.seed;
    std::vector<double> x = x0;

    for (int k = 0; k < run.max_steps; ++k) {
        if (spec.desired_value(x) <= 0.0) {
            log.reached = true;
            log.termination = "reached";
            break;
        }
        const StepResult sr = step(spec, x, cfg, settings);
        if (!sr.ok()) {
            log.termination = "solver_" + to_string(sr.status);
            break;
        }
        const McEstimate mc = mc_validate(spec, x, sr.input, run.mc_samples,
                                          run.seed ^ (0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(k)));
        StepRecord rec;
        rec.k = k;
        rec.state = x;
        rec.input = sr.input;
        rec.desired_value = spec.desired_value(x);
        rec.required_prob = sr.required_prob;
        rec.mc_probability = mc.probability;
        rec.mc_halfwidth = mc.halfwidth;
        rec.sdp_objective = sr.objective;
        rec.moment_trace = sr.moment_trace;
        rec.rank_ratio = sr.rank_ratio;
        rec.certified = sr.certified;
        rec.solver_status = to_string(sr.status);

        if (run.mc_strict && mc.probability < sr.required_prob - 3.0 * mc.halfwidth) {
            rec.disturbance.assign(static_cast<std::size_t>(spec.model.n_w), 0.0);
            log.steps.push_back(rec);
            log.termination = "validation_failure";
            break;
        }

        std::vector<double> w(static_cast<std::size_t>(spec.model.n_w));
        for (int c = 0; c < spec.model.n_w; ++c)
            w[static_cast<std::size_t>(c)] = spec.disturbance.draw_coordinate(
                c, counter_uniform01(run.seed, kStreamTrajectory, static_cast<std::uint32_t>(k),
                                     static_cast<std::uint32_t>(c)));
        rec.disturbance = w;
        log.steps.push_back(rec);
        x = spec.model.step(x, sr.input, w);
    }
    if (log.termination.empty()) {
        if (spec.desired_value(x) <= 0.0) {
            log.reached = true;
            log.termination = "reached";
        } else {
            log.termination = "step_cap";
        }
    }
    log.final_state = x;
    log.final_desired_value = spec.desired_value(x);
    return log;
}

TrajectoryLog replay(const ProblemSpec& spec, const std::vector<double>& x0,
                     const std::vector<std::vector<double>>& inputs,
                     const std::vector<std::vector<double>>& disturbances) {
    spec.validate();
    if (inputs.size() != disturbances.size())
        throw std::invalid_argument("replay: input and disturbance sequences differ in length");
    TrajectoryLog log;
    std::vector<double> x = x0;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        if (spec.desired_value(x) <= 0.0) {
            log.reached = true;
            log.termination = "reached";
            break;
        }
        StepRecord rec;
        rec.k = static_cast<int>(k);
        rec.state = x;
        rec.input = inputs[k];
        rec.disturbance = disturbances[k];
        rec.desired_value = spec.desired_value(x);
        rec.required_prob = required_probability(spec, x);
        rec.solver_status = "replay";
        log.steps.push_back(rec);
        x = spec.model.step(x, inputs[k], disturbances[k]);
    }
    if (log.termination.empty()) {
        log.reached = spec.desired_value(x) <= 0.0;
        log.termination = log.reached ? "reached" : "step_cap";
    }
    log.final_state = x;
    log.final_desired_value = spec.desired_value(x);
    return log;
}

int reach_step_bound(double epsilon, double alpha, double p0) {
    if (p0 <= 0.0) throw std::invalid_argument("reach_step_bound: bound undefined for P_chiD(x0) <= 0");
    if (!(epsilon > 0.0 && epsilon < p0)) throw std::invalid_argument("reach_step_bound: need 0 < epsilon < p0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("reach_step_bound: need 0 < alpha < 1");
    return static_cast<int>(std::ceil((std::log(epsilon) - std::log(p0)) / std::log(alpha)));
}

double reach_probability_bound(double alpha, double beta, int khat) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("reach_probability_bound: need alpha, beta in (0, 1)");
    if (khat < 0) throw std::invalid_argument("reach_probability_bound: khat must be >= 0");
    double p = 1.0, factor = beta;
    for (int i = 0; i < khat; ++i) {
        p *= 1.0 - factor;
        factor *= alpha;
    }
    return p;
}

double reach_probability_limit(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("reach_probability_limit: need alpha, beta in (0, 1)");
    double p = 1.0, factor = beta;
    while (factor > 1e-18) {
        p *= 1.0 - factor;
        factor *= alpha;
    }
    return p;
}

}  // namespace ccmpc
