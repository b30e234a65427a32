#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "usvswarm/maddpg.hpp"

using namespace usvswarm;

namespace {

AgentHyper tiny_hyper() {
    AgentHyper h;
    h.batch_size = 8;
    h.actor_hidden = {8};
    h.critic_hidden = {16};
    h.buffer_capacity = 256;
    h.warmup_factor = 1;
    return h;
}

Transition joint_transition(Rng& rng, int n_agents, int obs_size, int act_size) {
    Transition t;
    for (int i = 0; i < n_agents * obs_size; ++i) t.obs.push_back(rng.uniform(-1.0, 1.0));
    for (int i = 0; i < n_agents * act_size; ++i) t.action.push_back(rng.uniform(-1.0, 1.0));
    for (int i = 0; i < n_agents * obs_size; ++i) t.next_obs.push_back(rng.uniform(-1.0, 1.0));
    t.reward = rng.uniform(-1.0, 1.0);
    t.done = rng.uniform() < 0.2;
    return t;
}

}  // namespace

TEST_CASE("concat_vectors preserves agent order") {
    auto joint = concat_vectors({{1.0, 2.0}, {3.0}, {4.0, 5.0}});
    CHECK(joint == std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0});
}

TEST_CASE("critic operates on the joint observation/action width") {
    MaddpgSystem sys(3, 5, 2, tiny_hyper(), 4);
    CHECK(sys.joint_obs_size() == 15);
    CHECK(sys.joint_act_size() == 6);
    CHECK(sys.critic().layer_sizes.front() == 21);
    CHECK(sys.critic().layer_sizes.back() == 1);
    REQUIRE(sys.actors().size() == 3);
    for (const auto& a : sys.actors()) {
        CHECK(a.layer_sizes.front() == 5);
        CHECK(a.layer_sizes.back() == 2);
    }
}

TEST_CASE("actions are decentralized: peer observations never matter") {
    MaddpgSystem sys(3, 4, 2, tiny_hyper(), 9);
    Rng rng(6);
    std::vector<std::vector<double>> obs(3);
    for (auto& o : obs)
        for (int i = 0; i < 4; ++i) o.push_back(rng.uniform(-1.0, 1.0));

    Rng ra(0);
    auto base = sys.select_joint_actions(obs, false, ra);

    for (int trial = 0; trial < 100; ++trial) {
        auto perturbed = obs;
        for (int i = 0; i < 4; ++i) {
            perturbed[1][i] = rng.uniform(-1.0, 1.0);
            perturbed[2][i] = rng.uniform(-1.0, 1.0);
        }
        Rng rb(0);
        auto moved = sys.select_joint_actions(perturbed, false, rb);
        CHECK(moved[0] == base[0]);  // agent 0 unaffected, bitwise
    }
}

TEST_CASE("n = 1 MADDPG reduces exactly to DDPG") {
    const int obs_size = 6, act_size = 2;
    auto hyper = tiny_hyper();
    hyper.batch_size = 16;
    const uint64_t seed = 2718;
    DdpgAgent ddpg(obs_size, act_size, hyper, seed);
    MaddpgSystem maddpg(1, obs_size, act_size, hyper, seed);

    // Identical initialization.
    for (size_t l = 0; l < ddpg.actor().layer_count(); ++l) {
        CHECK(ddpg.actor().weights[l].data == maddpg.actors()[0].weights[l].data);
        CHECK(ddpg.critic().weights[l].data == maddpg.critic().weights[l].data);
    }

    // Identical greedy and noisy action selection.
    Rng fill(51);
    std::vector<double> obs;
    for (int i = 0; i < obs_size; ++i) obs.push_back(fill.uniform(-1.0, 1.0));
    Rng r1(3), r2(3);
    CHECK(ddpg.select_action(obs, true, r1) == maddpg.select_joint_actions({obs}, true, r2)[0]);

    // 100 identical train steps on frozen batches stay bit-for-bit aligned.
    std::vector<Transition> owned;
    for (int i = 0; i < 400; ++i) owned.push_back(joint_transition(fill, 1, obs_size, act_size));
    Rng pick(99);
    double worst = 0.0;
    for (int step = 0; step < 100; ++step) {
        std::vector<const Transition*> batch;
        for (int i = 0; i < hyper.batch_size; ++i)
            batch.push_back(&owned[pick.uniform_index(owned.size())]);
        auto sd = ddpg.train_step_on_batch(batch);
        auto sm = maddpg.train_step_on_batch(batch);
        worst = std::max(worst, std::abs(sd.critic_loss - sm.critic_loss));
        worst = std::max(worst, std::abs(sd.actor_objective - sm.actor_objectives[0]));
    }
    for (size_t l = 0; l < ddpg.actor().layer_count(); ++l) {
        for (size_t i = 0; i < ddpg.actor().weights[l].data.size(); ++i)
            worst = std::max(worst, std::abs(ddpg.actor().weights[l].data[i] -
                                             maddpg.actors()[0].weights[l].data[i]));
        for (size_t i = 0; i < ddpg.critic().weights[l].data.size(); ++i)
            worst = std::max(worst, std::abs(ddpg.critic().weights[l].data[i] -
                                             maddpg.critic().weights[l].data[i]));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("actors improve against a synthetic per-agent objective") {
    // Team reward -(a0 - 0.5)^2 - (a1 + 0.5)^2 with gamma 0: agent 0 should
    // drift toward +0.5 and agent 1 toward -0.5.
    const int obs_size = 2, act_size = 1, n = 2;
    auto hyper = tiny_hyper();
    hyper.gamma = 0.0;
    hyper.tau = 0.0;
    hyper.actor_lr = 1e-3;
    hyper.critic_lr = 1e-2;
    hyper.batch_size = 64;
    hyper.actor_hidden = {16};
    hyper.critic_hidden = {32, 32};
    MaddpgSystem sys(n, obs_size, act_size, hyper, 23);

    Rng rng(37);
    ReplayBuffer buf(4096);
    for (int i = 0; i < 4096; ++i) {
        Transition t = joint_transition(rng, n, obs_size, act_size);
        t.done = true;
        const double a0 = t.action[0], a1 = t.action[1];
        t.reward = -(a0 - 0.5) * (a0 - 0.5) - (a1 + 0.5) * (a1 + 0.5);
        buf.store(std::move(t));
    }

    auto mean_actions = [&] {
        Rng probe(7);
        double s0 = 0.0, s1 = 0.0;
        const int m = 64;
        for (int i = 0; i < m; ++i) {
            std::vector<std::vector<double>> obs(n);
            for (auto& o : obs)
                for (int k = 0; k < obs_size; ++k) o.push_back(probe.uniform(-1.0, 1.0));
            Rng quiet(0);
            auto a = sys.select_joint_actions(obs, false, quiet);
            s0 += a[0][0];
            s1 += a[1][0];
        }
        return std::pair<double, double>{s0 / m, s1 / m};
    };

    const auto before = mean_actions();
    for (int step = 0; step < 3000; ++step) sys.train_step(buf, rng);
    const auto after = mean_actions();
    CHECK(std::abs(after.first - 0.5) < std::abs(before.first - 0.5));
    CHECK(std::abs(after.second + 0.5) < std::abs(before.second + 0.5));
    CHECK(std::abs(after.first - 0.5) < 0.15);
    CHECK(std::abs(after.second + 0.5) < 0.15);
}

TEST_CASE("evaluate_decentralized is deterministic and shape-checked") {
    WorldConfig config;
    config.arena_width = config.arena_height = 20.0;
    config.n_agents = 2;
    config.n_trash = 3;
    config.lidar_beams = 8;
    config.max_steps = 60;

    auto hyper = tiny_hyper();
    MaddpgSystem sys(2, config.observation_size(), 2, hyper, 77);
    auto a = evaluate_decentralized(sys, config, 4, 555);
    auto b = evaluate_decentralized(sys, config, 4, 555);
    CHECK(a.mean_return == b.mean_return);
    CHECK(a.returns == b.returns);
    CHECK(a.returns.size() == 4);
    CHECK(a.mean_steps > 0.0);

    // Wrong output width is rejected.
    auto bad = mlp_init({config.observation_size(), 8, 3}, Activation::ReLU, Activation::Tanh, 1);
    auto good = mlp_init({config.observation_size(), 8, 2}, Activation::ReLU, Activation::Tanh, 1);
    CHECK_THROWS_AS(evaluate_decentralized({&bad, &good}, config, 1, 1), std::invalid_argument);
}
