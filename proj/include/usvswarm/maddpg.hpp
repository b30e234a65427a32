#pragma once

#include <cstdint>
#include <vector>

#include "usvswarm/ddpg.hpp"
#include "usvswarm/world.hpp"

namespace usvswarm {

struct MaddpgTrainStats {
    double critic_loss = 0.0;
    std::vector<double> actor_objectives;
};

struct EvalMetrics {
    double mean_return = 0.0;
    double mean_collected = 0.0;
    double mean_collisions = 0.0;
    double mean_steps = 0.0;
    std::vector<double> returns;
    std::vector<double> collected;
    std::vector<double> collisions;
    std::vector<double> steps;
};

// Centralized training, decentralized execution: one critic over the joint
// observation/action concatenation, one actor per agent acting on its own
// observation only. All agents share the team reward and hyperparameters.
class MaddpgSystem {
public:
    MaddpgSystem(int n_agents, int obs_size, int act_size, const AgentHyper& hyper, uint64_t seed);

    // Agent i's action depends only on observations[i].
    std::vector<std::vector<double>> select_joint_actions(
        const std::vector<std::vector<double>>& observations, bool explore, Rng& rng) const;

    // Critic step on the joint TD target, then one actor step per agent
    // (own action re-generated, peer actions replayed from the buffer),
    // then soft updates of every target.
    MaddpgTrainStats train_step(const ReplayBuffer& buffer, Rng& rng);
    MaddpgTrainStats train_step_on_batch(const std::vector<const Transition*>& batch);

    void decay_noise();

    int n_agents() const { return n_agents_; }
    int obs_size() const { return obs_size_; }
    int act_size() const { return act_size_; }
    int joint_obs_size() const { return n_agents_ * obs_size_; }
    int joint_act_size() const { return n_agents_ * act_size_; }
    const AgentHyper& hyper() const { return hyper_; }
    double noise_sigma() const { return noise_sigma_; }
    void set_noise_sigma(double sigma) { noise_sigma_ = sigma; }

    const std::vector<MlpParams>& actors() const { return actors_; }
    const std::vector<MlpParams>& target_actors() const { return target_actors_; }
    const MlpParams& critic() const { return critic_; }
    const MlpParams& target_critic() const { return target_critic_; }
    const std::vector<AdamState>& actor_opts() const { return actor_opts_; }
    const AdamState& critic_opt() const { return critic_opt_; }

    void restore(std::vector<MlpParams> actors, std::vector<MlpParams> target_actors,
                 MlpParams critic, MlpParams target_critic,
                 std::vector<AdamState> actor_opts, AdamState critic_opt,
                 double noise_sigma);

private:
    int n_agents_;
    int obs_size_;
    int act_size_;
    AgentHyper hyper_;
    double noise_sigma_;
    std::vector<MlpParams> actors_, target_actors_;
    MlpParams critic_, target_critic_;
    std::vector<AdamState> actor_opts_;
    AdamState critic_opt_;
};

// Concatenation helpers; agent index order is the frozen contract.
std::vector<double> concat_vectors(const std::vector<std::vector<double>>& parts);

// Greedy (no-noise) episodes through the world; each actor sees only its
// own observation. Episode e uses seed derive_seed(seed, e).
EvalMetrics evaluate_decentralized(const std::vector<const MlpParams*>& actors,
                                   const WorldConfig& config, int episodes, uint64_t seed);

EvalMetrics evaluate_decentralized(const MaddpgSystem& system, const WorldConfig& config,
                                   int episodes, uint64_t seed);

}  // namespace usvswarm
