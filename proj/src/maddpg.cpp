#include "usvswarm/maddpg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace usvswarm {

namespace {

std::vector<int> layer_plan(int in, const std::vector<int>& hidden, int out) {
    std::vector<int> sizes;
    sizes.push_back(in);
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    return sizes;
}

}  // namespace

MaddpgSystem::MaddpgSystem(int n_agents, int obs_size, int act_size,
                           const AgentHyper& hyper, uint64_t seed)
    : n_agents_(n_agents), obs_size_(obs_size), act_size_(act_size),
      hyper_(hyper), noise_sigma_(hyper.noise_sigma) {
    if (n_agents < 1) throw std::invalid_argument("MaddpgSystem: n_agents must be >= 1");
    hyper_.validate();
    for (int i = 0; i < n_agents; ++i) {
        actors_.push_back(mlp_init(layer_plan(obs_size, hyper_.actor_hidden, act_size),
                                   Activation::ReLU, Activation::Tanh,
                                   Rng::derive_seed(seed, static_cast<uint64_t>(i))));
        actor_opts_.push_back(adam_init(actors_.back(), hyper_.actor_lr));
    }
    target_actors_ = actors_;
    critic_ = mlp_init(layer_plan(joint_obs_size() + joint_act_size(), hyper_.critic_hidden, 1),
                       Activation::ReLU, Activation::Identity,
                       Rng::derive_seed(seed, static_cast<uint64_t>(n_agents)));
    target_critic_ = critic_;
    critic_opt_ = adam_init(critic_, hyper_.critic_lr);
}

std::vector<std::vector<double>> MaddpgSystem::select_joint_actions(
    const std::vector<std::vector<double>>& observations, bool explore, Rng& rng) const {
    if (observations.size() != static_cast<size_t>(n_agents_))
        throw std::invalid_argument("select_joint_actions: expected one observation per agent");
    std::vector<std::vector<double>> actions;
    actions.reserve(n_agents_);
    for (int i = 0; i < n_agents_; ++i) {
        if (observations[i].size() != static_cast<size_t>(obs_size_))
            throw std::invalid_argument("select_joint_actions: observation size mismatch for agent " +
                                        std::to_string(i));
        std::vector<double> a = detail::actor_forward_single(actors_[i], observations[i]);
        if (explore) a = detail::noisy_clamped(std::move(a), noise_sigma_, rng);
        actions.push_back(std::move(a));
    }
    return actions;
}

MaddpgTrainStats MaddpgSystem::train_step(const ReplayBuffer& buffer, Rng& rng) {
    const auto indices = buffer.sample_indices(hyper_.batch_size, rng);
    std::vector<const Transition*> batch;
    batch.reserve(indices.size());
    for (size_t i : indices) batch.push_back(&buffer.at(i));
    return train_step_on_batch(batch);
}

MaddpgTrainStats MaddpgSystem::train_step_on_batch(const std::vector<const Transition*>& batch) {
    const int b = static_cast<int>(batch.size());
    if (b == 0) throw std::invalid_argument("train_step_on_batch: empty batch");
    auto view = detail::gather_batch(batch, joint_obs_size(), joint_act_size());

    MaddpgTrainStats stats;

    // Joint TD target from the target actors and target critic.
    Matrix next_actions(b, joint_act_size());
    for (int i = 0; i < n_agents_; ++i) {
        Matrix obs_i(b, obs_size_);
        for (int row = 0; row < b; ++row)
            for (int j = 0; j < obs_size_; ++j)
                obs_i.at(row, j) = view.next_obs.at(row, i * obs_size_ + j);
        Matrix a_i = mlp_forward(target_actors_[i], obs_i);
        for (int row = 0; row < b; ++row)
            for (int j = 0; j < act_size_; ++j)
                next_actions.at(row, i * act_size_ + j) = a_i.at(row, j);
    }
    Matrix q_next = mlp_forward(target_critic_, detail::concat_cols(view.next_obs, next_actions));
    std::vector<double> y(b);
    for (int i = 0; i < b; ++i)
        y[i] = view.reward[i] + hyper_.gamma * (1.0 - view.done[i]) * q_next.data[i];

    // Critic step.
    ForwardCache critic_cache;
    Matrix q = mlp_forward(critic_, detail::concat_cols(view.obs, view.action), &critic_cache);
    Matrix dq(b, 1);
    for (int i = 0; i < b; ++i) {
        const double err = q.data[i] - y[i];
        stats.critic_loss += err * err;
        dq.data[i] = 2.0 * err / b;
    }
    stats.critic_loss /= b;
    if (!std::isfinite(stats.critic_loss))
        throw std::runtime_error("maddpg train_step: non-finite critic loss");
    MlpGrads critic_grads = mlp_backward(critic_, critic_cache, dq);
    adam_step(critic_, critic_grads, critic_opt_);

    // Per-agent actor steps: agent i's action is re-generated, peers are
    // replayed from the buffer; the gradient reaches actor i through the
    // critic's input slice for agent i's action only.
    stats.actor_objectives.resize(n_agents_, 0.0);
    for (int i = 0; i < n_agents_; ++i) {
        Matrix obs_i(b, obs_size_);
        for (int row = 0; row < b; ++row)
            for (int j = 0; j < obs_size_; ++j)
                obs_i.at(row, j) = view.obs.at(row, i * obs_size_ + j);
        ForwardCache actor_cache;
        Matrix own_action = mlp_forward(actors_[i], obs_i, &actor_cache);

        Matrix joint_action = view.action;
        for (int row = 0; row < b; ++row)
            for (int j = 0; j < act_size_; ++j)
                joint_action.at(row, i * act_size_ + j) = own_action.at(row, j);

        ForwardCache q_cache;
        Matrix q_pi = mlp_forward(critic_, detail::concat_cols(view.obs, joint_action), &q_cache);
        double objective = 0.0;
        for (int row = 0; row < b; ++row) objective += q_pi.data[row];
        objective /= b;
        if (!std::isfinite(objective))
            throw std::runtime_error("maddpg train_step: non-finite actor objective for agent " +
                                     std::to_string(i));
        stats.actor_objectives[i] = objective;

        Matrix dq_pi(b, 1);
        for (int row = 0; row < b; ++row) dq_pi.data[row] = 1.0 / b;
        Matrix input_grad;
        mlp_backward(critic_, q_cache, dq_pi, &input_grad);
        Matrix action_grad(b, act_size_);
        const int offset = joint_obs_size() + i * act_size_;
        for (int row = 0; row < b; ++row)
            for (int j = 0; j < act_size_; ++j)
                action_grad.at(row, j) = -input_grad.at(row, offset + j);
        MlpGrads actor_grads = mlp_backward(actors_[i], actor_cache, action_grad);
        adam_step(actors_[i], actor_grads, actor_opts_[i]);
    }

    for (int i = 0; i < n_agents_; ++i) soft_update(target_actors_[i], actors_[i], hyper_.tau);
    soft_update(target_critic_, critic_, hyper_.tau);
    return stats;
}

void MaddpgSystem::decay_noise() {
    noise_sigma_ = std::max(noise_sigma_ * hyper_.noise_decay, hyper_.noise_floor);
}

void MaddpgSystem::restore(std::vector<MlpParams> actors, std::vector<MlpParams> target_actors,
                           MlpParams critic, MlpParams target_critic,
                           std::vector<AdamState> actor_opts, AdamState critic_opt,
                           double noise_sigma) {
    if (actors.size() != static_cast<size_t>(n_agents_) || target_actors.size() != actors.size() ||
        actor_opts.size() != actors.size())
        throw std::invalid_argument("MaddpgSystem::restore: agent count mismatch");
    for (const auto& a : actors)
        if (a.layer_sizes != actors_[0].layer_sizes)
            throw std::invalid_argument("MaddpgSystem::restore: actor shape mismatch");
    if (critic.layer_sizes != critic_.layer_sizes)
        throw std::invalid_argument("MaddpgSystem::restore: critic shape mismatch");
    actors_ = std::move(actors);
    target_actors_ = std::move(target_actors);
    critic_ = std::move(critic);
    target_critic_ = std::move(target_critic);
    actor_opts_ = std::move(actor_opts);
    critic_opt_ = std::move(critic_opt);
    noise_sigma_ = noise_sigma;
}

std::vector<double> concat_vectors(const std::vector<std::vector<double>>& parts) {
    std::vector<double> out;
    size_t total = 0;
    for (const auto& p : parts) total += p.size();
    out.reserve(total);
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

EvalMetrics evaluate_decentralized(const std::vector<const MlpParams*>& actors,
                                   const WorldConfig& config, int episodes, uint64_t seed) {
    if (episodes < 1) throw std::invalid_argument("evaluate_decentralized: episodes must be >= 1");
    if (actors.size() != static_cast<size_t>(config.n_agents))
        throw std::invalid_argument("evaluate_decentralized: actor count != n_agents");
    for (const auto* actor : actors)
        if (actor->input_size() != config.observation_size() || actor->output_size() != 2)
            throw std::invalid_argument("evaluate_decentralized: actor dimensions do not match world");

    EvalMetrics metrics;
    World world(config);
    for (int ep = 0; ep < episodes; ++ep) {
        auto observations = world.reset(Rng::derive_seed(seed, static_cast<uint64_t>(ep)));
        double ep_return = 0.0;
        int steps = 0;
        while (!world.done()) {
            std::vector<Action> joint;
            joint.reserve(actors.size());
            for (size_t i = 0; i < actors.size(); ++i) {
                const auto a = detail::actor_forward_single(*actors[i], observations[i]);
                joint.emplace_back(a[0], a[1]);
            }
            StepResult result = world.step(joint);
            ep_return += result.reward;
            observations = std::move(result.observations);
            ++steps;
        }
        metrics.returns.push_back(ep_return);
        metrics.collected.push_back(world.total_collected());
        metrics.collisions.push_back(world.total_collisions());
        metrics.steps.push_back(steps);
    }
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / v.size();
    };
    metrics.mean_return = mean(metrics.returns);
    metrics.mean_collected = mean(metrics.collected);
    metrics.mean_collisions = mean(metrics.collisions);
    metrics.mean_steps = mean(metrics.steps);
    return metrics;
}

EvalMetrics evaluate_decentralized(const MaddpgSystem& system, const WorldConfig& config,
                                   int episodes, uint64_t seed) {
    std::vector<const MlpParams*> actors;
    actors.reserve(system.actors().size());
    for (const auto& a : system.actors()) actors.push_back(&a);
    return evaluate_decentralized(actors, config, episodes, seed);
}

}  // namespace usvswarm
