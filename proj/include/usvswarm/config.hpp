#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "usvswarm/ddpg.hpp"
#include "usvswarm/world.hpp"

namespace usvswarm {

enum class Algorithm { DdpgSingle, Maddpg };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct TrainingConfig {
    int episodes = 1000;
    int eval_every = 50;
    int eval_episodes = 10;
    int checkpoint_every = 200;
};

struct RunConfig {
    WorldConfig world;
    Algorithm algorithm = Algorithm::Maddpg;
    TrainingConfig training;
    AgentHyper agent;
    std::string output_dir = "run_output";
    uint64_t master_seed = 0;

    void validate() const;
};

// Strict parse: every key must be known, every value well-typed; fields not
// present keep their defaults. Throws std::invalid_argument with the
// offending key path.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

// Fully resolved configuration (defaults included), suitable for the
// config-echo file.
nlohmann::json run_config_to_json(const RunConfig& config);

}  // namespace usvswarm
