#include "ccmpc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ccmpc {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& section, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw std::invalid_argument("config: section '" + section + "' must be an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.contains(key))
            throw std::invalid_argument("config: unknown key '" + key + "' in section '" + section + "'");
}

std::vector<Interval> parse_box(const json& j, const std::string& field, std::size_t expected) {
    if (!j.is_array() || j.size() != expected)
        throw std::invalid_argument("config: '" + field + "' must be an array of " + std::to_string(expected) +
                                    " [lo, hi] pairs");
    std::vector<Interval> box;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2)
            throw std::invalid_argument("config: '" + field + "' entries must be [lo, hi] pairs");
        box.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return box;
}

Polynomial parse_poly_field(const json& j, const std::string& field, const std::vector<std::string>& vars) {
    if (!j.is_string()) throw std::invalid_argument("config: '" + field + "' must be a polynomial string");
    try {
        return parse_polynomial(j.get<std::string>(), vars);
    } catch (const std::exception& e) {
        throw std::invalid_argument("config: field '" + field + "': " + e.what());
    }
}

std::vector<std::string> model_var_names(int n_x, int n_u, int n_w) {
    return concat_names({numbered_names("x", n_x), numbered_names("u", n_u), numbered_names("w", n_w)});
}

}  // namespace

LoadedConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    reject_unknown(j, "(root)",
                   {"model", "desired_set", "input_set", "disturbance", "cost", "parameters", "run"});

    LoadedConfig out;
    ProblemSpec& spec = out.spec;

    const json& jm = j.at("model");
    reject_unknown(jm, "model", {"n_x", "n_u", "n_w", "f"});
    spec.model.n_x = jm.at("n_x").get<int>();
    spec.model.n_u = jm.at("n_u").get<int>();
    spec.model.n_w = jm.at("n_w").get<int>();
    const auto fvars = model_var_names(spec.model.n_x, spec.model.n_u, spec.model.n_w);
    if (!jm.at("f").is_array() || static_cast<int>(jm.at("f").size()) != spec.model.n_x)
        throw std::invalid_argument("config: model.f must list one polynomial per state");
    for (const auto& fs : jm.at("f")) spec.model.f.push_back(parse_poly_field(fs, "model.f", fvars));

    const json& jp = j.at("parameters");
    reject_unknown(jp, "parameters", {"alpha", "beta", "N_p", "r", "omega_r", "sign_mode"});
    spec.alpha = jp.at("alpha").get<double>();
    spec.beta = jp.at("beta").get<double>();
    spec.horizon = jp.at("N_p").get<int>();
    out.relaxation.order = jp.value("r", 5);
    out.relaxation.trace_weight = jp.value("omega_r", 1.0);
    const std::string mode = jp.value("sign_mode", "contraction");
    if (mode == "contraction")
        spec.sign_mode = SignMode::kContraction;
    else if (mode == "paper_literal")
        spec.sign_mode = SignMode::kPaperLiteral;
    else
        throw std::invalid_argument("config: parameters.sign_mode must be 'contraction' or 'paper_literal'");

    const json& jd = j.at("desired_set");
    reject_unknown(jd, "desired_set", {"polynomial", "box", "radius"});
    spec.desired_set.constraints.push_back(
        {parse_poly_field(jd.at("polynomial"), "desired_set.polynomial", numbered_names("x", spec.model.n_x)),
         /*geq=*/false});
    spec.desired_set.box = parse_box(jd.at("box"), "desired_set.box", static_cast<std::size_t>(spec.model.n_x));

    const int nsu = spec.horizon * spec.model.n_u;
    const json& ji = j.at("input_set");
    reject_unknown(ji, "input_set", {"polynomial", "box"});
    spec.input_set.constraints.push_back(
        {parse_poly_field(ji.at("polynomial"), "input_set.polynomial", numbered_names("u", nsu)), /*geq=*/true});
    spec.input_set.box = parse_box(ji.at("box"), "input_set.box", static_cast<std::size_t>(nsu));

    const json& jw = j.at("disturbance");
    reject_unknown(jw, "disturbance", {"kind", "bounds"});
    if (jw.at("kind").get<std::string>() != "uniform")
        throw std::invalid_argument("config: disturbance.kind must be 'uniform'");
    spec.disturbance.kind = DisturbanceSpec::Kind::kUniform;
    for (const auto& iv : parse_box(jw.at("bounds"), "disturbance.bounds", static_cast<std::size_t>(spec.model.n_w)))
        spec.disturbance.support.emplace_back(iv.lo, iv.hi);

    const json& jc = j.at("cost");
    reject_unknown(jc, "cost", {"polynomial"});
    const auto cost_vars = concat_names(
        {numbered_names("x", spec.horizon * spec.model.n_x), numbered_names("u", nsu)});
    spec.cost = parse_poly_field(jc.at("polynomial"), "cost.polynomial", cost_vars);

    if (j.contains("run")) {
        const json& jr = j.at("run");
        reject_unknown(jr, "run", {"seed", "max_steps", "samples", "epsilon"});
        out.run.seed = jr.value("seed", 0ull);
        out.run.max_steps = jr.value("max_steps", 25);
        out.run.mc_samples = jr.value("samples", 100000);
        out.run.epsilon = jr.value("epsilon", 0.01);
    }

    spec.validate();
    out.run.validate();
    return out;
}

LoadedConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const LoadedConfig& config) {
    const ProblemSpec& spec = config.spec;
    const auto fvars = model_var_names(spec.model.n_x, spec.model.n_u, spec.model.n_w);
    const int nsu = spec.stacked_inputs();

    json j;
    j["model"]["n_x"] = spec.model.n_x;
    j["model"]["n_u"] = spec.model.n_u;
    j["model"]["n_w"] = spec.model.n_w;
    j["model"]["f"] = json::array();
    for (const auto& f : spec.model.f) j["model"]["f"].push_back(format_polynomial(f, fvars));

    j["desired_set"]["polynomial"] =
        format_polynomial(spec.desired_poly(), numbered_names("x", spec.model.n_x));
    j["desired_set"]["box"] = json::array();
    for (const auto& iv : spec.desired_set.box) j["desired_set"]["box"].push_back({iv.lo, iv.hi});

    j["input_set"]["polynomial"] =
        format_polynomial(spec.input_set.constraints.front().poly, numbered_names("u", nsu));
    j["input_set"]["box"] = json::array();
    for (const auto& iv : spec.input_set.box) j["input_set"]["box"].push_back({iv.lo, iv.hi});

    j["disturbance"]["kind"] = "uniform";
    j["disturbance"]["bounds"] = json::array();
    for (const auto& [a, b] : spec.disturbance.support) j["disturbance"]["bounds"].push_back({a, b});

    const auto cost_vars =
        concat_names({numbered_names("x", spec.horizon * spec.model.n_x), numbered_names("u", nsu)});
    j["cost"]["polynomial"] = format_polynomial(spec.cost, cost_vars);

    j["parameters"]["alpha"] = spec.alpha;
    j["parameters"]["beta"] = spec.beta;
    j["parameters"]["N_p"] = spec.horizon;
    j["parameters"]["r"] = config.relaxation.order;
    j["parameters"]["omega_r"] = config.relaxation.trace_weight;
    j["parameters"]["sign_mode"] =
        spec.sign_mode == SignMode::kContraction ? "contraction" : "paper_literal";

    j["run"]["seed"] = config.run.seed;
    j["run"]["max_steps"] = config.run.max_steps;
    j["run"]["samples"] = config.run.mc_samples;
    j["run"]["epsilon"] = config.run.epsilon;
    return j.dump(2);
}

bool config_equal(const LoadedConfig& a, const LoadedConfig& b) {
    const ProblemSpec &sa = a.spec, &sb = b.spec;
    if (sa.model.n_x != sb.model.n_x || sa.model.n_u != sb.model.n_u || sa.model.n_w != sb.model.n_w) return false;
    for (int i = 0; i < sa.model.n_x; ++i)
        if (!sa.model.f[static_cast<std::size_t>(i)].same_terms(sb.model.f[static_cast<std::size_t>(i)]))
            return false;
    if (!sa.desired_poly().same_terms(sb.desired_poly())) return false;
    if (!sa.input_set.constraints.front().poly.same_terms(sb.input_set.constraints.front().poly)) return false;
    if (!sa.cost.same_terms(sb.cost)) return false;
    auto box_equal = [](const std::vector<Interval>& x, const std::vector<Interval>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i].lo != y[i].lo || x[i].hi != y[i].hi) return false;
        return true;
    };
    if (!box_equal(sa.desired_set.box, sb.desired_set.box)) return false;
    if (!box_equal(sa.input_set.box, sb.input_set.box)) return false;
    if (sa.disturbance.support != sb.disturbance.support) return false;
    if (sa.alpha != sb.alpha || sa.beta != sb.beta || sa.horizon != sb.horizon || sa.sign_mode != sb.sign_mode)
        return false;
    if (a.relaxation.order != b.relaxation.order || a.relaxation.trace_weight != b.relaxation.trace_weight)
        return false;
    return a.run.seed == b.run.seed && a.run.max_steps == b.run.max_steps &&
           a.run.mc_samples == b.run.mc_samples && a.run.epsilon == b.run.epsilon;
}

}  // namespace ccmpc
