#include "usvswarm/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace usvswarm {

std::string algorithm_name(Algorithm a) {
    return a == Algorithm::DdpgSingle ? "ddpg_single" : "maddpg";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "ddpg_single") return Algorithm::DdpgSingle;
    if (name == "maddpg") return Algorithm::Maddpg;
    throw std::invalid_argument("unknown algorithm: " + name);
}

void RunConfig::validate() const {
    world.validate();
    agent.validate();
    if (algorithm == Algorithm::DdpgSingle && world.n_agents != 1)
        throw std::invalid_argument("algorithm ddpg_single requires world.n_agents = 1");
    if (training.episodes < 1 || training.eval_every < 1 || training.eval_episodes < 1 ||
        training.checkpoint_every < 1)
        throw std::invalid_argument("training counts must all be >= 1");
    if (output_dir.empty()) throw std::invalid_argument("output_dir must not be empty");
}

namespace {

void check_keys(const nlohmann::json& j, const std::string& path,
                const std::set<std::string>& allowed) {
    if (!j.is_object())
        throw std::invalid_argument("config: " + path + " must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key))
            throw std::invalid_argument("config: unknown key \"" + path + key + "\"");
    }
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer() && !v.is_number_unsigned())
            throw std::invalid_argument(std::string("config: key \"") + key +
                                        "\" must be an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number())
            throw std::invalid_argument(std::string("config: key \"") + key +
                                        "\" must be a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string())
            throw std::invalid_argument(std::string("config: key \"") + key +
                                        "\" must be a string");
    }
    try {
        v.get_to(out);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: bad value for key \"") + key + "\": " +
                                    e.what());
    }
}

void parse_vessel(const nlohmann::json& j, VesselParams& v) {
    check_keys(j, "world.vessel.",
               {"mass", "yaw_inertia", "thrust_gain", "beam", "drag_surge", "drag_yaw",
                "hull_radius"});
    read_field(j, "mass", v.mass);
    read_field(j, "yaw_inertia", v.yaw_inertia);
    read_field(j, "thrust_gain", v.thrust_gain);
    read_field(j, "beam", v.beam);
    read_field(j, "drag_surge", v.drag_surge);
    read_field(j, "drag_yaw", v.drag_yaw);
    read_field(j, "hull_radius", v.hull_radius);
}

void parse_reward_weights(const nlohmann::json& j, RewardWeights& w) {
    check_keys(j, "world.reward_weights.",
               {"w1", "w2", "w3", "w4", "r_collect_unit", "p_coll_unit", "p_time_unit", "d_max"});
    read_field(j, "w1", w.w1);
    read_field(j, "w2", w.w2);
    read_field(j, "w3", w.w3);
    read_field(j, "w4", w.w4);
    read_field(j, "r_collect_unit", w.r_collect_unit);
    read_field(j, "p_coll_unit", w.p_coll_unit);
    read_field(j, "p_time_unit", w.p_time_unit);
    read_field(j, "d_max", w.d_max);
}

void parse_world(const nlohmann::json& j, WorldConfig& w) {
    check_keys(j, "world.",
               {"arena_width", "arena_height", "n_agents", "n_trash", "trash_radius",
                "collect_radius", "detect_radius", "lidar_beams", "lidar_max_range",
                "max_steps", "dt", "vessel", "reward_weights", "seed"});
    read_field(j, "arena_width", w.arena_width);
    read_field(j, "arena_height", w.arena_height);
    read_field(j, "n_agents", w.n_agents);
    read_field(j, "n_trash", w.n_trash);
    read_field(j, "trash_radius", w.trash_radius);
    read_field(j, "collect_radius", w.collect_radius);
    read_field(j, "detect_radius", w.detect_radius);
    read_field(j, "lidar_beams", w.lidar_beams);
    read_field(j, "lidar_max_range", w.lidar_max_range);
    read_field(j, "max_steps", w.max_steps);
    read_field(j, "dt", w.dt);
    read_field(j, "seed", w.seed);
    bool d_max_given = false;
    if (j.contains("vessel")) parse_vessel(j.at("vessel"), w.vessel);
    if (j.contains("reward_weights")) {
        d_max_given = j.at("reward_weights").contains("d_max");
        parse_reward_weights(j.at("reward_weights"), w.reward_weights);
    }
    // Default d_max is the arena diagonal, so pairwise distances never clamp.
    if (!d_max_given)
        w.reward_weights.d_max = std::hypot(w.arena_width, w.arena_height);
}

void parse_training(const nlohmann::json& j, TrainingConfig& t) {
    check_keys(j, "training.", {"episodes", "eval_every", "eval_episodes", "checkpoint_every"});
    read_field(j, "episodes", t.episodes);
    read_field(j, "eval_every", t.eval_every);
    read_field(j, "eval_episodes", t.eval_episodes);
    read_field(j, "checkpoint_every", t.checkpoint_every);
}

void parse_agent(const nlohmann::json& j, AgentHyper& a) {
    check_keys(j, "agent.",
               {"gamma", "tau", "batch_size", "noise_sigma", "noise_decay", "noise_floor",
                "actor_lr", "critic_lr", "actor_hidden", "critic_hidden", "buffer_capacity",
                "warmup_factor"});
    read_field(j, "gamma", a.gamma);
    read_field(j, "tau", a.tau);
    read_field(j, "batch_size", a.batch_size);
    read_field(j, "noise_sigma", a.noise_sigma);
    read_field(j, "noise_decay", a.noise_decay);
    read_field(j, "noise_floor", a.noise_floor);
    read_field(j, "actor_lr", a.actor_lr);
    read_field(j, "critic_lr", a.critic_lr);
    read_field(j, "actor_hidden", a.actor_hidden);
    read_field(j, "critic_hidden", a.critic_hidden);
    read_field(j, "buffer_capacity", a.buffer_capacity);
    read_field(j, "warmup_factor", a.warmup_factor);
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j) {
    check_keys(j, "", {"world", "algorithm", "training", "agent", "output_dir", "master_seed"});
    RunConfig config;
    if (j.contains("world")) parse_world(j.at("world"), config.world);
    else config.world.reward_weights.d_max = std::hypot(config.world.arena_width, config.world.arena_height);
    if (j.contains("algorithm"))
        config.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
    if (j.contains("training")) parse_training(j.at("training"), config.training);
    if (j.contains("agent")) parse_agent(j.at("agent"), config.agent);
    read_field(j, "output_dir", config.output_dir);
    read_field(j, "master_seed", config.master_seed);
    config.validate();
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return parse_run_config(j);
}

nlohmann::json run_config_to_json(const RunConfig& config) {
    const auto& w = config.world;
    return nlohmann::json{
        {"world",
         {{"arena_width", w.arena_width},
          {"arena_height", w.arena_height},
          {"n_agents", w.n_agents},
          {"n_trash", w.n_trash},
          {"trash_radius", w.trash_radius},
          {"collect_radius", w.collect_radius},
          {"detect_radius", w.detect_radius},
          {"lidar_beams", w.lidar_beams},
          {"lidar_max_range", w.lidar_max_range},
          {"max_steps", w.max_steps},
          {"dt", w.dt},
          {"seed", w.seed},
          {"vessel",
           {{"mass", w.vessel.mass},
            {"yaw_inertia", w.vessel.yaw_inertia},
            {"thrust_gain", w.vessel.thrust_gain},
            {"beam", w.vessel.beam},
            {"drag_surge", w.vessel.drag_surge},
            {"drag_yaw", w.vessel.drag_yaw},
            {"hull_radius", w.vessel.hull_radius}}},
          {"reward_weights",
           {{"w1", w.reward_weights.w1},
            {"w2", w.reward_weights.w2},
            {"w3", w.reward_weights.w3},
            {"w4", w.reward_weights.w4},
            {"r_collect_unit", w.reward_weights.r_collect_unit},
            {"p_coll_unit", w.reward_weights.p_coll_unit},
            {"p_time_unit", w.reward_weights.p_time_unit},
            {"d_max", w.reward_weights.d_max}}}}},
        {"algorithm", algorithm_name(config.algorithm)},
        {"training",
         {{"episodes", config.training.episodes},
          {"eval_every", config.training.eval_every},
          {"eval_episodes", config.training.eval_episodes},
          {"checkpoint_every", config.training.checkpoint_every}}},
        {"agent",
         {{"gamma", config.agent.gamma},
          {"tau", config.agent.tau},
          {"batch_size", config.agent.batch_size},
          {"noise_sigma", config.agent.noise_sigma},
          {"noise_decay", config.agent.noise_decay},
          {"noise_floor", config.agent.noise_floor},
          {"actor_lr", config.agent.actor_lr},
          {"critic_lr", config.agent.critic_lr},
          {"actor_hidden", config.agent.actor_hidden},
          {"critic_hidden", config.agent.critic_hidden},
          {"buffer_capacity", config.agent.buffer_capacity},
          {"warmup_factor", config.agent.warmup_factor}}},
        {"output_dir", config.output_dir},
        {"master_seed", config.master_seed},
    };
}

}  // namespace usvswarm
