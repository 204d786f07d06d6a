// Command-line front end: plan / simulate / validate / bound / inspect-moments.
// Exit codes: 0 success, 1 usage or input error, 2 solver failure,
// 3 validation failure (strict-mode Monte Carlo shortfall or an
// uncertified extraction).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ccmpc/config.hpp"
#include "ccmpc/sdpa_io.hpp"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitValidation = 3;

ccmpc::SolverSettings solver_settings() {
    ccmpc::SolverSettings st;
    const char* verbose = std::getenv("CCMPC_VERBOSE");
    st.verbose = verbose != nullptr && *verbose != '\0' && *verbose != '0';
    return st;
}

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        try {
            out.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw CLI::ValidationError("expected a comma-separated list of numbers, got '" + text + "'");
        }
    }
    if (out.empty()) throw CLI::ValidationError("empty vector argument");
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
}

int cmd_bound(double alpha, double beta, double epsilon, double p0, std::optional<int> khat_override) {
    const int khat = khat_override ? *khat_override : ccmpc::reach_step_bound(epsilon, alpha, p0);
    const double phat = ccmpc::reach_probability_bound(alpha, beta, khat);
    std::cout << "k_hat  " << khat << "\n";
    std::cout << "P_hat  " << phat << "\n";
    std::cout << "P_hat limit (k_hat -> inf)  " << ccmpc::reach_probability_limit(alpha, beta) << "\n";
    return kExitOk;
}

int cmd_plan(const std::string& config_path, const std::string& state_str, std::optional<int> order,
             std::optional<double> omega_r, const std::string& json_out, const std::string& sdp_out) {
    ccmpc::LoadedConfig cfg = ccmpc::load_config_file(config_path);
    if (order) cfg.relaxation.order = *order;
    if (omega_r) cfg.relaxation.trace_weight = *omega_r;
    const auto x = parse_vector(state_str);
    if (static_cast<int>(x.size()) != cfg.spec.model.n_x)
        throw CLI::ValidationError("--state must have n_x = " + std::to_string(cfg.spec.model.n_x) + " entries");

    if (cfg.spec.desired_value(x) <= 0.0) {
        std::cout << "target reached: P_chiD(x) = " << cfg.spec.desired_value(x) << " <= 0, no solve\n";
        return kExitOk;
    }

    if (!sdp_out.empty()) {
        const ccmpc::ScaledSpec scaled = ccmpc::scale_problem(cfg.spec);
        const ccmpc::Relaxation rel = ccmpc::build_relaxation(scaled.spec, x, cfg.relaxation);
        ccmpc::write_sdpa_file(rel.problem, sdp_out);
        std::cout << "relaxation exported to " << sdp_out << "\n";
    }

    const ccmpc::StepResult sr = ccmpc::step(cfg.spec, x, cfg.relaxation, solver_settings());
    if (!sr.ok()) {
        std::cerr << "solver failed with status: " << ccmpc::to_string(sr.status) << "\n";
        return kExitSolver;
    }
    std::cout << "input sequence u* =";
    for (double v : sr.input_sequence) std::cout << " " << v;
    std::cout << "\napplied first input:";
    for (double v : sr.input) std::cout << " " << v;
    std::cout << "\nobjective          " << sr.objective << "\n";
    std::cout << "moment trace       " << sr.moment_trace << "\n";
    std::cout << "rank ratio         " << sr.rank_ratio << (sr.certified ? "  (certified)" : "  (NOT certified)")
              << "\n";
    std::cout << "required prob      " << sr.required_prob << "\n";

    if (!json_out.empty()) {
        nlohmann::json j;
        j["input_sequence"] = sr.input_sequence;
        j["input"] = sr.input;
        j["objective"] = sr.objective;
        j["moment_trace"] = sr.moment_trace;
        j["rank_ratio"] = sr.rank_ratio;
        j["certified"] = sr.certified;
        j["required_prob"] = sr.required_prob;
        j["status"] = ccmpc::to_string(sr.status);
        write_file(json_out, j.dump(2));
    }
    if (!sr.certified) {
        std::cerr << "extraction not certified rank-one (rank ratio " << sr.rank_ratio << ")\n";
        return kExitValidation;
    }
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& x0_str, std::optional<std::uint64_t> seed,
                 std::optional<int> max_steps, std::optional<int> order, const std::string& out_path,
                 const std::string& csv_path, const std::string& replay_path, bool strict) {
    ccmpc::LoadedConfig cfg = ccmpc::load_config_file(config_path);
    if (seed) cfg.run.seed = *seed;
    if (max_steps) cfg.run.max_steps = *max_steps;
    if (order) cfg.relaxation.order = *order;
    cfg.run.mc_strict = strict;
    cfg.run.validate();
    const auto x0 = parse_vector(x0_str);
    if (static_cast<int>(x0.size()) != cfg.spec.model.n_x)
        throw CLI::ValidationError("--x0 must have n_x entries");

    ccmpc::TrajectoryLog log;
    if (!replay_path.empty()) {
        std::ifstream in(replay_path);
        if (!in) throw std::runtime_error("cannot open replay file " + replay_path);
        nlohmann::json j = nlohmann::json::parse(in);
        const auto inputs = j.at("inputs").get<std::vector<std::vector<double>>>();
        const auto dists = j.at("disturbances").get<std::vector<std::vector<double>>>();
        log = ccmpc::replay(cfg.spec, x0, inputs, dists);
    } else {
        log = ccmpc::simulate(cfg.spec, x0, cfg.run, cfg.relaxation, solver_settings());
    }

    if (!out_path.empty()) write_file(out_path, log.to_json());
    if (!csv_path.empty()) write_file(csv_path, log.to_csv());
    std::cout << "termination: " << log.termination << " after " << log.steps.size() << " steps; P_chiD(final) = "
              << log.final_desired_value << "\n";
    if (log.termination.rfind("solver_", 0) == 0) return kExitSolver;
    if (log.termination == "validation_failure") return kExitValidation;
    return kExitOk;
}

int cmd_validate(const std::string& config_path, const std::string& state_str, const std::string& input_str,
                 std::int64_t samples, std::uint64_t seed) {
    const ccmpc::LoadedConfig cfg = ccmpc::load_config_file(config_path);
    const auto x = parse_vector(state_str);
    const auto u = parse_vector(input_str);
    if (static_cast<int>(x.size()) != cfg.spec.model.n_x) throw CLI::ValidationError("--state must have n_x entries");
    if (static_cast<int>(u.size()) != cfg.spec.model.n_u) throw CLI::ValidationError("--input must have n_u entries");
    const ccmpc::McEstimate est = ccmpc::mc_validate(cfg.spec, x, u, samples, seed);
    const double required = ccmpc::required_probability(cfg.spec, x);
    std::cout << "contraction probability  " << est.probability << " +/- " << est.halfwidth << " (95%)\n";
    std::cout << "required probability     " << required << "\n";
    return kExitOk;
}

int cmd_inspect(const std::string& config_path, const std::string& uniform_str, const std::string& delta_str,
                int degree, std::optional<int> psd_order) {
    ccmpc::MomentSequence y;
    if (!uniform_str.empty()) {
        const auto ab = parse_vector(uniform_str);
        if (ab.size() != 2) throw CLI::ValidationError("--uniform expects 'a,b'");
        y = ccmpc::uniform_moments(ab[0], ab[1], degree);
    } else if (!delta_str.empty()) {
        y = ccmpc::delta_moments(parse_vector(delta_str), degree);
    } else if (!config_path.empty()) {
        const ccmpc::LoadedConfig cfg = ccmpc::load_config_file(config_path);
        y = cfg.spec.disturbance.step_moments(degree);
    } else {
        throw CLI::ValidationError("need one of --uniform, --delta, --config");
    }
    std::cout << y.to_json() << "\n";
    if (psd_order) {
        const auto check = ccmpc::representing_measure_check(y, {}, *psd_order, 1e-8);
        std::cout << "M_" << *psd_order << " min eigenvalue: " << check.moment_matrix_min_eig
                  << (check.ok ? "  (psd)" : "  (NOT psd)") << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chance-constrained MPC via moment SDP relaxations"};
    app.require_subcommand(1);

    // bound
    double alpha = 0, beta = 0, epsilon = 0, p0 = 0;
    std::optional<int> khat_override;
    auto* bound = app.add_subcommand("bound", "Theorem-style reach bounds k_hat and P_hat");
    bound->add_option("--alpha", alpha, "contraction factor in (0,1)")->required();
    bound->add_option("--beta", beta, "chance-constraint slope in (0,1)")->required();
    bound->add_option("--epsilon", epsilon, "level-set threshold");
    bound->add_option("--p0", p0, "P_chiD at the initial state");
    bound->add_option("--khat", khat_override, "use this k_hat instead of deriving it");

    // plan
    std::string config_path, state_str, json_out, sdp_out;
    std::optional<int> order;
    std::optional<double> omega_r;
    auto* plan = app.add_subcommand("plan", "one SDP build + solve + extraction at a state");
    plan->add_option("--config", config_path, "problem config JSON")->required()->check(CLI::ExistingFile);
    plan->add_option("--state", state_str, "current state, e.g. \"1,1\"")->required();
    plan->add_option("--order", order, "relaxation order override");
    plan->add_option("--omega-r", omega_r, "trace weight override");
    plan->add_option("--json", json_out, "write diagnostics JSON here");
    plan->add_option("--export-sdp", sdp_out, "write the assembled SDP in sparse SDPA text");

    // simulate
    std::string x0_str, out_path, csv_path, replay_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> max_steps;
    bool strict = false;
    auto* sim = app.add_subcommand("simulate", "closed-loop run (or replay) with logging");
    sim->add_option("--config", config_path, "problem config JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--x0", x0_str, "initial state")->required();
    sim->add_option("--seed", seed, "seed for the counter-based generator");
    sim->add_option("--max-steps", max_steps, "step cap override");
    sim->add_option("--order", order, "relaxation order override");
    sim->add_option("--out", out_path, "trajectory JSON output path");
    sim->add_option("--csv", csv_path, "trajectory CSV output path");
    sim->add_option("--replay", replay_path, "JSON with {inputs, disturbances}; bypasses the solver");
    sim->add_flag("--strict", strict, "abort when MC validation undershoots the required probability");

    // validate
    std::string input_str;
    std::int64_t samples = 100000;
    std::uint64_t vseed = 0;
    auto* val = app.add_subcommand("validate", "Monte Carlo check of the contraction probability");
    val->add_option("--config", config_path, "problem config JSON")->required()->check(CLI::ExistingFile);
    val->add_option("--state", state_str, "current state")->required();
    val->add_option("--input", input_str, "applied input u_k")->required();
    val->add_option("--samples", samples, "sample count (>= 100)");
    val->add_option("--seed", vseed, "seed");

    // inspect-moments
    std::string uniform_str, delta_str;
    int degree = 4;
    std::optional<int> psd_order;
    auto* insp = app.add_subcommand("inspect-moments", "print a moment sequence as JSON");
    insp->add_option("--config", config_path, "take the config's disturbance moments")->check(CLI::ExistingFile);
    insp->add_option("--uniform", uniform_str, "uniform interval 'a,b'");
    insp->add_option("--delta", delta_str, "point mass coordinates");
    insp->add_option("--degree", degree, "truncation degree");
    insp->add_option("--psd-order", psd_order, "also report the moment-matrix minimum eigenvalue at this order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (bound->parsed()) {
            if (!khat_override && !(epsilon > 0 && p0 > 0)) {
                std::cerr << "bound: need --epsilon and --p0 (or an explicit --khat)\n";
                return kExitUsage;
            }
            return cmd_bound(alpha, beta, epsilon, p0, khat_override);
        }
        if (plan->parsed()) return cmd_plan(config_path, state_str, order, omega_r, json_out, sdp_out);
        if (sim->parsed())
            return cmd_simulate(config_path, x0_str, seed, max_steps, order, out_path, csv_path, replay_path,
                                strict);
        if (val->parsed()) return cmd_validate(config_path, state_str, input_str, samples, vseed);
        if (insp->parsed()) return cmd_inspect(config_path, uniform_str, delta_str, degree, psd_order);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
