#include "usvswarm/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "usvswarm/nn_json.hpp"

namespace usvswarm {

namespace {

nlohmann::json hyper_to_json(const AgentHyper& h) {
    return nlohmann::json{
        {"gamma", h.gamma},
        {"tau", h.tau},
        {"batch_size", h.batch_size},
        {"noise_sigma", h.noise_sigma},
        {"noise_decay", h.noise_decay},
        {"noise_floor", h.noise_floor},
        {"actor_lr", h.actor_lr},
        {"critic_lr", h.critic_lr},
        {"actor_hidden", h.actor_hidden},
        {"critic_hidden", h.critic_hidden},
        {"buffer_capacity", h.buffer_capacity},
        {"warmup_factor", h.warmup_factor},
    };
}

AgentHyper hyper_from_json(const nlohmann::json& j) {
    AgentHyper h;
    j.at("gamma").get_to(h.gamma);
    j.at("tau").get_to(h.tau);
    j.at("batch_size").get_to(h.batch_size);
    j.at("noise_sigma").get_to(h.noise_sigma);
    j.at("noise_decay").get_to(h.noise_decay);
    j.at("noise_floor").get_to(h.noise_floor);
    j.at("actor_lr").get_to(h.actor_lr);
    j.at("critic_lr").get_to(h.critic_lr);
    j.at("actor_hidden").get_to(h.actor_hidden);
    j.at("critic_hidden").get_to(h.critic_hidden);
    j.at("buffer_capacity").get_to(h.buffer_capacity);
    j.at("warmup_factor").get_to(h.warmup_factor);
    return h;
}

nlohmann::json transition_to_json(const Transition& t) {
    return nlohmann::json{
        {"obs", t.obs}, {"action", t.action}, {"reward", t.reward},
        {"next_obs", t.next_obs}, {"done", t.done},
    };
}

Transition transition_from_json(const nlohmann::json& j) {
    Transition t;
    j.at("obs").get_to(t.obs);
    j.at("action").get_to(t.action);
    j.at("reward").get_to(t.reward);
    j.at("next_obs").get_to(t.next_obs);
    j.at("done").get_to(t.done);
    return t;
}

}  // namespace

Checkpoint checkpoint_from_agent(const DdpgAgent& agent, const ReplayBuffer& buffer,
                                 uint64_t episodes_completed, uint64_t master_seed) {
    Checkpoint c;
    c.algorithm = Algorithm::DdpgSingle;
    c.n_agents = 1;
    c.obs_size = agent.obs_size();
    c.act_size = agent.act_size();
    c.noise_sigma = agent.noise_sigma();
    c.episodes_completed = episodes_completed;
    c.master_seed = master_seed;
    c.hyper = agent.hyper();
    c.actors = {agent.actor()};
    c.target_actors = {agent.target_actor()};
    c.critic = agent.critic();
    c.target_critic = agent.target_critic();
    c.actor_opts = {agent.actor_opt()};
    c.critic_opt = agent.critic_opt();
    c.replay = buffer.raw();
    c.replay_cursor = buffer.cursor();
    return c;
}

Checkpoint checkpoint_from_system(const MaddpgSystem& system, const ReplayBuffer& buffer,
                                  uint64_t episodes_completed, uint64_t master_seed) {
    Checkpoint c;
    c.algorithm = Algorithm::Maddpg;
    c.n_agents = system.n_agents();
    c.obs_size = system.obs_size();
    c.act_size = system.act_size();
    c.noise_sigma = system.noise_sigma();
    c.episodes_completed = episodes_completed;
    c.master_seed = master_seed;
    c.hyper = system.hyper();
    c.actors = system.actors();
    c.target_actors = system.target_actors();
    c.critic = system.critic();
    c.target_critic = system.target_critic();
    c.actor_opts = system.actor_opts();
    c.critic_opt = system.critic_opt();
    c.replay = buffer.raw();
    c.replay_cursor = buffer.cursor();
    return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    nlohmann::json j;
    j["version"] = ckpt.version;
    j["algorithm"] = algorithm_name(ckpt.algorithm);
    j["n_agents"] = ckpt.n_agents;
    j["obs_size"] = ckpt.obs_size;
    j["act_size"] = ckpt.act_size;
    j["noise_sigma"] = ckpt.noise_sigma;
    j["episodes_completed"] = ckpt.episodes_completed;
    j["master_seed"] = ckpt.master_seed;
    j["hyper"] = hyper_to_json(ckpt.hyper);
    j["actors"] = ckpt.actors;
    j["target_actors"] = ckpt.target_actors;
    j["critic"] = ckpt.critic;
    j["target_critic"] = ckpt.target_critic;
    auto opts = nlohmann::json::array();
    for (const auto& o : ckpt.actor_opts) opts.push_back(o);
    j["actor_opts"] = std::move(opts);
    j["critic_opt"] = ckpt.critic_opt;
    auto replay = nlohmann::json::array();
    for (const auto& t : ckpt.replay) replay.push_back(transition_to_json(t));
    j["replay"] = {{"cursor", ckpt.replay_cursor}, {"transitions", std::move(replay)}};

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << j.dump();
    out << '\n';
    if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("checkpoint parse error in " + path + ": " + e.what());
    }

    Checkpoint c;
    j.at("version").get_to(c.version);
    if (c.version != kCheckpointVersion)
        throw std::runtime_error("checkpoint version mismatch: got " + std::to_string(c.version) +
                                 ", expected " + std::to_string(kCheckpointVersion));
    c.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
    j.at("n_agents").get_to(c.n_agents);
    j.at("obs_size").get_to(c.obs_size);
    j.at("act_size").get_to(c.act_size);
    j.at("noise_sigma").get_to(c.noise_sigma);
    j.at("episodes_completed").get_to(c.episodes_completed);
    j.at("master_seed").get_to(c.master_seed);
    c.hyper = hyper_from_json(j.at("hyper"));
    j.at("actors").get_to(c.actors);
    j.at("target_actors").get_to(c.target_actors);
    j.at("critic").get_to(c.critic);
    j.at("target_critic").get_to(c.target_critic);
    const auto& opts = j.at("actor_opts");
    for (size_t i = 0; i < opts.size(); ++i)
        c.actor_opts.push_back(adam_state_from_json(opts[i], c.actors.at(i)));
    c.critic_opt = adam_state_from_json(j.at("critic_opt"), c.critic);
    const auto& replay = j.at("replay");
    replay.at("cursor").get_to(c.replay_cursor);
    for (const auto& t : replay.at("transitions"))
        c.replay.push_back(transition_from_json(t));

    if (c.actors.size() != static_cast<size_t>(c.n_agents) ||
        c.target_actors.size() != c.actors.size() || c.actor_opts.size() != c.actors.size())
        throw std::runtime_error("checkpoint is truncated or inconsistent: " + path);
    return c;
}

void check_compatible(const Checkpoint& ckpt, const WorldConfig& world) {
    if (ckpt.n_agents != world.n_agents)
        throw std::invalid_argument("checkpoint has " + std::to_string(ckpt.n_agents) +
                                    " agents but config has " + std::to_string(world.n_agents));
    if (ckpt.obs_size != world.observation_size())
        throw std::invalid_argument("checkpoint observation size " + std::to_string(ckpt.obs_size) +
                                    " does not match config observation size " +
                                    std::to_string(world.observation_size()));
    if (ckpt.act_size != 2)
        throw std::invalid_argument("checkpoint action size must be 2");
}

}  // namespace usvswarm
