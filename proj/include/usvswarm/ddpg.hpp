#pragma once

#include <cstdint>
#include <vector>

#include "usvswarm/nn.hpp"
#include "usvswarm/replay.hpp"
#include "usvswarm/rng.hpp"

namespace usvswarm {

struct AgentHyper {
    double gamma = 0.99;
    double tau = 0.005;
    int batch_size = 128;
    double noise_sigma = 0.2;
    double noise_decay = 0.9995;
    double noise_floor = 0.02;
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    std::vector<int> actor_hidden{64, 64};
    std::vector<int> critic_hidden{128, 128};
    size_t buffer_capacity = 100000;
    int warmup_factor = 10;  // train once buffer >= warmup_factor * batch_size

    void validate() const;
};

struct TrainStats {
    double critic_loss = 0.0;
    double actor_objective = 0.0;
};

// Single-agent DDPG: actor with tanh head, critic over (obs, action),
// slowly tracking target copies, Gaussian exploration noise. Targets equal
// the online networks at construction.
class DdpgAgent {
public:
    DdpgAgent(int obs_size, int act_size, const AgentHyper& hyper, uint64_t seed);

    // Greedy actor output; with explore, per-component Gaussian noise of the
    // current sigma is added before clamping to [-1, 1].
    std::vector<double> select_action(const std::vector<double>& obs, bool explore, Rng& rng) const;

    // Bootstrap targets y = r + gamma*(1-done)*Q_target(s', mu_target(s'))
    // computed with target networks only.
    std::vector<double> td_target(const std::vector<const Transition*>& batch) const;

    // One critic step (MSE to td_target), one actor step (ascend mean
    // Q(s, mu(s)) through the frozen critic), then soft target updates.
    TrainStats train_step(const ReplayBuffer& buffer, Rng& rng);
    TrainStats train_step_on_batch(const std::vector<const Transition*>& batch);

    void decay_noise();

    int obs_size() const { return obs_size_; }
    int act_size() const { return act_size_; }
    const AgentHyper& hyper() const { return hyper_; }
    double noise_sigma() const { return noise_sigma_; }
    void set_noise_sigma(double sigma) { noise_sigma_ = sigma; }

    const MlpParams& actor() const { return actor_; }
    const MlpParams& critic() const { return critic_; }
    const MlpParams& target_actor() const { return target_actor_; }
    const MlpParams& target_critic() const { return target_critic_; }
    MlpParams& mutable_actor() { return actor_; }
    const AdamState& actor_opt() const { return actor_opt_; }
    const AdamState& critic_opt() const { return critic_opt_; }

    // Checkpoint restore; shapes must match the constructed agent.
    void restore(const MlpParams& actor, const MlpParams& critic,
                 const MlpParams& target_actor, const MlpParams& target_critic,
                 const AdamState& actor_opt, const AdamState& critic_opt,
                 double noise_sigma);

private:
    int obs_size_;
    int act_size_;
    AgentHyper hyper_;
    double noise_sigma_;
    MlpParams actor_, critic_, target_actor_, target_critic_;
    AdamState actor_opt_, critic_opt_;
};

// Shared by DDPG and MADDPG so the single-agent reduction is exact.
namespace detail {

std::vector<double> actor_forward_single(const MlpParams& actor, const std::vector<double>& obs);

std::vector<double> noisy_clamped(std::vector<double> action, double sigma, Rng& rng);

// Gathers batch rows into (B, obs) / (B, act) matrices plus reward/done
// columns.
struct BatchView {
    Matrix obs;
    Matrix action;
    Matrix next_obs;
    std::vector<double> reward;
    std::vector<double> done;
};
BatchView gather_batch(const std::vector<const Transition*>& batch, int obs_size, int act_size);

Matrix concat_cols(const Matrix& a, const Matrix& b);

}  // namespace detail

}  // namespace usvswarm
