#include <doctest.h>

#include <stdexcept>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "usvswarm/checkpoint.hpp"

using namespace usvswarm;

namespace {

AgentHyper tiny_hyper() {
    AgentHyper h;
    h.batch_size = 4;
    h.actor_hidden = {8};
    h.critic_hidden = {8};
    h.buffer_capacity = 16;
    h.warmup_factor = 1;
    return h;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

bool params_equal(const MlpParams& a, const MlpParams& b) {
    if (a.layer_sizes != b.layer_sizes) return false;
    for (size_t l = 0; l < a.layer_count(); ++l)
        if (a.weights[l].data != b.weights[l].data || a.biases[l] != b.biases[l]) return false;
    return true;
}

}  // namespace

TEST_CASE("checkpoint round trip is bit exact") {
    auto hyper = tiny_hyper();
    MaddpgSystem sys(2, 5, 2, hyper, 42);
    ReplayBuffer buf(16);
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        Transition t;
        for (int k = 0; k < 10; ++k) t.obs.push_back(rng.uniform(-1.0, 1.0));
        for (int k = 0; k < 4; ++k) t.action.push_back(rng.uniform(-1.0, 1.0));
        for (int k = 0; k < 10; ++k) t.next_obs.push_back(rng.uniform(-1.0, 1.0));
        t.reward = rng.normal();  // exercise non-round doubles
        t.done = i % 3 == 0;
        buf.store(std::move(t));
    }
    for (int i = 0; i < 10; ++i) sys.train_step(buf, rng);

    auto ckpt = checkpoint_from_system(sys, buf, 7, 12345);
    const auto path = temp_path("usvswarm_ckpt_test.json");
    save_checkpoint(ckpt, path);
    auto loaded = load_checkpoint(path);
    std::remove(path.c_str());

    CHECK(loaded.version == kCheckpointVersion);
    CHECK(loaded.algorithm == ckpt.algorithm);
    CHECK(loaded.n_agents == 2);
    CHECK(loaded.obs_size == 5);
    CHECK(loaded.act_size == 2);
    CHECK(loaded.noise_sigma == ckpt.noise_sigma);
    CHECK(loaded.episodes_completed == 7);
    CHECK(loaded.master_seed == 12345);
    CHECK(loaded.hyper.gamma == hyper.gamma);
    CHECK(loaded.hyper.actor_hidden == hyper.actor_hidden);

    REQUIRE(loaded.actors.size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(params_equal(loaded.actors[i], ckpt.actors[i]));
        CHECK(params_equal(loaded.target_actors[i], ckpt.target_actors[i]));
    }
    CHECK(params_equal(loaded.critic, ckpt.critic));
    CHECK(params_equal(loaded.target_critic, ckpt.target_critic));

    REQUIRE(loaded.actor_opts.size() == 2);
    CHECK(loaded.actor_opts[0].step_count == ckpt.actor_opts[0].step_count);
    for (size_t l = 0; l < ckpt.critic_opt.weight_m.size(); ++l) {
        CHECK(loaded.critic_opt.weight_m[l].data == ckpt.critic_opt.weight_m[l].data);
        CHECK(loaded.critic_opt.weight_v[l].data == ckpt.critic_opt.weight_v[l].data);
    }

    REQUIRE(loaded.replay.size() == ckpt.replay.size());
    CHECK(loaded.replay_cursor == ckpt.replay_cursor);
    for (size_t i = 0; i < loaded.replay.size(); ++i) {
        CHECK(loaded.replay[i].obs == ckpt.replay[i].obs);
        CHECK(loaded.replay[i].action == ckpt.replay[i].action);
        CHECK(loaded.replay[i].reward == ckpt.replay[i].reward);
        CHECK(loaded.replay[i].done == ckpt.replay[i].done);
    }
}

TEST_CASE("ddpg checkpoint restore reproduces the agent") {
    auto hyper = tiny_hyper();
    DdpgAgent agent(4, 2, hyper, 9);
    ReplayBuffer buf(16);
    Rng rng(5);
    for (int i = 0; i < 8; ++i) {
        Transition t;
        for (int k = 0; k < 4; ++k) t.obs.push_back(rng.uniform(-1.0, 1.0));
        for (int k = 0; k < 2; ++k) t.action.push_back(rng.uniform(-1.0, 1.0));
        for (int k = 0; k < 4; ++k) t.next_obs.push_back(rng.uniform(-1.0, 1.0));
        t.reward = rng.normal();
        buf.store(std::move(t));
    }
    agent.train_step(buf, rng);
    agent.decay_noise();

    auto ckpt = checkpoint_from_agent(agent, buf, 3, 111);
    CHECK(ckpt.algorithm == Algorithm::DdpgSingle);

    DdpgAgent copy(4, 2, hyper, 999);  // different init, then restored
    copy.restore(ckpt.actors[0], ckpt.critic, ckpt.target_actors[0], ckpt.target_critic,
                 ckpt.actor_opts[0], ckpt.critic_opt, ckpt.noise_sigma);
    CHECK(params_equal(copy.actor(), agent.actor()));
    CHECK(copy.noise_sigma() == agent.noise_sigma());

    // Next train step on an identical batch stays bit-identical.
    std::vector<const Transition*> batch;
    Rng pick(1);
    for (int i = 0; i < hyper.batch_size; ++i) batch.push_back(&buf.at(pick.uniform_index(buf.size())));
    auto sa = agent.train_step_on_batch(batch);
    auto sb = copy.train_step_on_batch(batch);
    CHECK(sa.critic_loss == sb.critic_loss);
    CHECK(params_equal(copy.actor(), agent.actor()));
}

TEST_CASE("version mismatch is a hard error") {
    auto hyper = tiny_hyper();
    DdpgAgent agent(3, 2, hyper, 1);
    ReplayBuffer buf(4);
    auto ckpt = checkpoint_from_agent(agent, buf, 0, 0);
    const auto path = temp_path("usvswarm_ckpt_badver.json");
    save_checkpoint(ckpt, path);

    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    auto pos = text.find("\"version\":1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 11, "\"version\":999");
    std::ofstream out(path);
    out << text;
    out.close();

    CHECK_THROWS_WITH_AS(load_checkpoint(path),
                         "checkpoint version mismatch: got 999, expected 1", std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("missing and truncated files are errors") {
    CHECK_THROWS_AS(load_checkpoint("/nonexistent/ckpt.json"), std::runtime_error);
    const auto path = temp_path("usvswarm_ckpt_trunc.json");
    std::ofstream out(path);
    out << "{\"version\": 1, \"alg";
    out.close();
    CHECK_THROWS(load_checkpoint(path));
    std::remove(path.c_str());
}

TEST_CASE("check_compatible guards dimensions") {
    WorldConfig world;
    world.n_agents = 2;
    world.lidar_beams = 8;
    auto hyper = tiny_hyper();
    MaddpgSystem sys(2, world.observation_size(), 2, hyper, 1);
    ReplayBuffer buf(4);
    auto ckpt = checkpoint_from_system(sys, buf, 0, 0);
    CHECK_NOTHROW(check_compatible(ckpt, world));

    auto wrong_agents = world;
    wrong_agents.n_agents = 3;
    CHECK_THROWS_AS(check_compatible(ckpt, wrong_agents), std::invalid_argument);

    auto wrong_obs = world;
    wrong_obs.lidar_beams = 16;
    CHECK_THROWS_AS(check_compatible(ckpt, wrong_obs), std::invalid_argument);
}
