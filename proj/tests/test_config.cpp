#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "ccmpc/config.hpp"
#include "doctest.h"

using namespace ccmpc;

namespace {

std::string config_path(const std::string& name) { return std::string(CCMPC_CONFIG_DIR) + "/" + name; }

}  // namespace

TEST_CASE("fixture configs parse to the expected problems") {
    const LoadedConfig one = load_config_file(config_path("example1.json"));
    CHECK(one.spec.model.n_x == 2);
    CHECK(one.spec.horizon == 3);
    CHECK(one.spec.alpha == 0.8);
    CHECK(one.spec.beta == 0.0510);
    CHECK(one.relaxation.order == 5);
    CHECK(one.relaxation.trace_weight == 1.0);
    CHECK(one.spec.desired_value({1.0, 1.0}) == doctest::Approx(1.96));
    CHECK(one.spec.sign_mode == SignMode::kContraction);

    const LoadedConfig two = load_config_file(config_path("example2.json"));
    CHECK(two.spec.model.n_x == 3);
    CHECK(two.spec.alpha == 0.9);
    CHECK(two.spec.beta == 0.2027);
    CHECK(two.spec.desired_value({1.0, 1.0, 1.0}) == doctest::Approx(2.96));
}

TEST_CASE("serialize then parse reproduces the configuration") {
    const LoadedConfig one = load_config_file(config_path("example1.json"));
    const LoadedConfig back = parse_config(serialize_config(one));
    CHECK(config_equal(one, back));
    const LoadedConfig twice = parse_config(serialize_config(back));
    CHECK(config_equal(back, twice));
}

TEST_CASE("unknown keys are rejected with the offending name") {
    const char* bad = R"({
      "model": {"n_x": 1, "n_u": 1, "n_w": 1, "f": ["x1 + u1 + w1"], "typo_key": 1},
      "desired_set": {"polynomial": "x1^2 - 0.04", "box": [[-1, 1]]},
      "input_set": {"polynomial": "1 - u1^2", "box": [[-1, 1]]},
      "disturbance": {"kind": "uniform", "bounds": [[-0.1, 0.1]]},
      "cost": {"polynomial": "x1^2 + u1^2"},
      "parameters": {"alpha": 0.8, "beta": 0.05, "N_p": 1}
    })";
    CHECK_THROWS_WITH_AS(parse_config(bad), doctest::Contains("typo_key"), std::invalid_argument);
}

TEST_CASE("malformed polynomial names the field") {
    const char* bad = R"({
      "model": {"n_x": 1, "n_u": 1, "n_w": 1, "f": ["x1 + u9"]},
      "desired_set": {"polynomial": "x1^2 - 0.04", "box": [[-1, 1]]},
      "input_set": {"polynomial": "1 - u1^2", "box": [[-1, 1]]},
      "disturbance": {"kind": "uniform", "bounds": [[-0.1, 0.1]]},
      "cost": {"polynomial": "x1^2 + u1^2"},
      "parameters": {"alpha": 0.8, "beta": 0.05, "N_p": 1}
    })";
    CHECK_THROWS_WITH_AS(parse_config(bad), doctest::Contains("model.f"), std::invalid_argument);
}

TEST_CASE("parameter range violations are rejected") {
    const char* tmpl = R"({
      "model": {"n_x": 1, "n_u": 1, "n_w": 1, "f": ["x1 + u1 + w1"]},
      "desired_set": {"polynomial": "x1^2 - 0.04", "box": [[-1, 1]]},
      "input_set": {"polynomial": "1 - u1^2", "box": [[-1, 1]]},
      "disturbance": {"kind": "uniform", "bounds": [[-0.1, 0.1]]},
      "cost": {"polynomial": "x1^2 + u1^2"},
      "parameters": {"alpha": %A%, "beta": 0.05, "N_p": 1}
    })";
    std::string bad_alpha = tmpl;
    bad_alpha.replace(bad_alpha.find("%A%"), 3, "1.2");
    CHECK_THROWS_AS(parse_config(bad_alpha), std::invalid_argument);
    std::string raw = tmpl;
    raw.replace(raw.find("%A%"), 3, "0.8");
    CHECK_NOTHROW(parse_config(raw));
    CHECK_THROWS_AS(parse_config("{"), std::invalid_argument);
    CHECK_THROWS_AS(load_config_file(config_path("missing.json")), std::runtime_error);
}

TEST_CASE("dimension mismatches between sections are caught") {
    // cost references u2 but N_p * n_u = 1
    const char* bad = R"({
      "model": {"n_x": 1, "n_u": 1, "n_w": 1, "f": ["x1 + u1 + w1"]},
      "desired_set": {"polynomial": "x1^2 - 0.04", "box": [[-1, 1]]},
      "input_set": {"polynomial": "1 - u1^2", "box": [[-1, 1]]},
      "disturbance": {"kind": "uniform", "bounds": [[-0.1, 0.1]]},
      "cost": {"polynomial": "x1^2 + u2^2"},
      "parameters": {"alpha": 0.8, "beta": 0.05, "N_p": 1}
    })";
    CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
    // disturbance bounds count must match n_w
    const char* bad2 = R"({
      "model": {"n_x": 1, "n_u": 1, "n_w": 2, "f": ["x1 + u1 + w1 + w2"]},
      "desired_set": {"polynomial": "x1^2 - 0.04", "box": [[-1, 1]]},
      "input_set": {"polynomial": "1 - u1^2", "box": [[-1, 1]]},
      "disturbance": {"kind": "uniform", "bounds": [[-0.1, 0.1]]},
      "cost": {"polynomial": "x1^2 + u1^2"},
      "parameters": {"alpha": 0.8, "beta": 0.05, "N_p": 1}
    })";
    CHECK_THROWS_AS(parse_config(bad2), std::invalid_argument);
}
