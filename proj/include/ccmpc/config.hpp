#pragma once

#include <string>

#include "ccmpc/mpc.hpp"

namespace ccmpc {

// Problem configuration bundle as read from a JSON config file. Unknown keys
// are rejected so typos surface instead of silently acquiring defaults.
struct LoadedConfig {
    ProblemSpec spec;
    RelaxationConfig relaxation;
    RunConfig run;
};

LoadedConfig parse_config(const std::string& json_text);
LoadedConfig load_config_file(const std::string& path);
std::string serialize_config(const LoadedConfig& config);

// Structural equality of everything a config round trip must preserve.
bool config_equal(const LoadedConfig& a, const LoadedConfig& b);

}  // namespace ccmpc
