#include "usvswarm/ddpg.hpp"

#include <cmath>
#include <stdexcept>

namespace usvswarm {

void AgentHyper::validate() const {
    if (gamma < 0.0 || gamma >= 1.0) throw std::invalid_argument("AgentHyper: gamma must be in [0,1)");
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("AgentHyper: tau must be in [0,1]");
    if (batch_size < 1) throw std::invalid_argument("AgentHyper: batch_size must be >= 1");
    if (noise_sigma < 0.0 || noise_floor < 0.0 || noise_decay <= 0.0 || noise_decay > 1.0)
        throw std::invalid_argument("AgentHyper: invalid noise settings");
    if (actor_lr <= 0.0 || critic_lr <= 0.0) throw std::invalid_argument("AgentHyper: learning rates must be > 0");
    if (buffer_capacity == 0) throw std::invalid_argument("AgentHyper: buffer_capacity must be > 0");
    if (warmup_factor < 1) throw std::invalid_argument("AgentHyper: warmup_factor must be >= 1");
}

namespace detail {

std::vector<double> actor_forward_single(const MlpParams& actor, const std::vector<double>& obs) {
    Matrix out = mlp_forward(actor, Matrix::row(obs));
    return out.data;
}

std::vector<double> noisy_clamped(std::vector<double> action, double sigma, Rng& rng) {
    for (auto& a : action) {
        a += rng.normal(0.0, sigma);
        a = a < -1.0 ? -1.0 : (a > 1.0 ? 1.0 : a);
    }
    return action;
}

BatchView gather_batch(const std::vector<const Transition*>& batch, int obs_size, int act_size) {
    const int b = static_cast<int>(batch.size());
    BatchView view;
    view.obs = Matrix(b, obs_size);
    view.action = Matrix(b, act_size);
    view.next_obs = Matrix(b, obs_size);
    view.reward.resize(b);
    view.done.resize(b);
    for (int i = 0; i < b; ++i) {
        const Transition& t = *batch[i];
        if (t.obs.size() != static_cast<size_t>(obs_size) ||
            t.next_obs.size() != static_cast<size_t>(obs_size) ||
            t.action.size() != static_cast<size_t>(act_size))
            throw std::invalid_argument("gather_batch: transition shape mismatch");
        for (int j = 0; j < obs_size; ++j) {
            view.obs.at(i, j) = t.obs[j];
            view.next_obs.at(i, j) = t.next_obs[j];
        }
        for (int j = 0; j < act_size; ++j) view.action.at(i, j) = t.action[j];
        view.reward[i] = t.reward;
        view.done[i] = t.done ? 1.0 : 0.0;
    }
    return view;
}

Matrix concat_cols(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows, a.cols + b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) out.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols; ++j) out.at(i, a.cols + j) = b.at(i, j);
    }
    return out;
}

}  // namespace detail

namespace {

std::vector<int> layer_plan(int in, const std::vector<int>& hidden, int out) {
    std::vector<int> sizes;
    sizes.push_back(in);
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    return sizes;
}

}  // namespace

DdpgAgent::DdpgAgent(int obs_size, int act_size, const AgentHyper& hyper, uint64_t seed)
    : obs_size_(obs_size), act_size_(act_size), hyper_(hyper), noise_sigma_(hyper.noise_sigma) {
    hyper_.validate();
    actor_ = mlp_init(layer_plan(obs_size, hyper_.actor_hidden, act_size),
                      Activation::ReLU, Activation::Tanh, Rng::derive_seed(seed, 0));
    critic_ = mlp_init(layer_plan(obs_size + act_size, hyper_.critic_hidden, 1),
                       Activation::ReLU, Activation::Identity, Rng::derive_seed(seed, 1));
    target_actor_ = actor_;
    target_critic_ = critic_;
    actor_opt_ = adam_init(actor_, hyper_.actor_lr);
    critic_opt_ = adam_init(critic_, hyper_.critic_lr);
}

std::vector<double> DdpgAgent::select_action(const std::vector<double>& obs, bool explore, Rng& rng) const {
    if (obs.size() != static_cast<size_t>(obs_size_))
        throw std::invalid_argument("select_action: observation size mismatch");
    std::vector<double> action = detail::actor_forward_single(actor_, obs);
    if (explore) action = detail::noisy_clamped(std::move(action), noise_sigma_, rng);
    return action;
}

std::vector<double> DdpgAgent::td_target(const std::vector<const Transition*>& batch) const {
    if (batch.empty()) throw std::invalid_argument("td_target: empty batch");
    auto view = detail::gather_batch(batch, obs_size_, act_size_);
    Matrix next_actions = mlp_forward(target_actor_, view.next_obs);
    Matrix q_next = mlp_forward(target_critic_, detail::concat_cols(view.next_obs, next_actions));
    std::vector<double> y(batch.size());
    for (size_t i = 0; i < batch.size(); ++i)
        y[i] = view.reward[i] + hyper_.gamma * (1.0 - view.done[i]) * q_next.data[i];
    return y;
}

TrainStats DdpgAgent::train_step(const ReplayBuffer& buffer, Rng& rng) {
    const auto indices = buffer.sample_indices(hyper_.batch_size, rng);
    std::vector<const Transition*> batch;
    batch.reserve(indices.size());
    for (size_t i : indices) batch.push_back(&buffer.at(i));
    return train_step_on_batch(batch);
}

TrainStats DdpgAgent::train_step_on_batch(const std::vector<const Transition*>& batch) {
    const int b = static_cast<int>(batch.size());
    if (b == 0) throw std::invalid_argument("train_step_on_batch: empty batch");
    auto view = detail::gather_batch(batch, obs_size_, act_size_);
    const std::vector<double> y = td_target(batch);

    TrainStats stats;

    // Critic: minimize mean squared TD error.
    ForwardCache critic_cache;
    Matrix q = mlp_forward(critic_, detail::concat_cols(view.obs, view.action), &critic_cache);
    Matrix dq(b, 1);
    for (int i = 0; i < b; ++i) {
        const double err = q.data[i] - y[i];
        stats.critic_loss += err * err;
        dq.data[i] = 2.0 * err / b;
    }
    stats.critic_loss /= b;
    MlpGrads critic_grads = mlp_backward(critic_, critic_cache, dq);
    if (!std::isfinite(stats.critic_loss))
        throw std::runtime_error("train_step: non-finite critic loss");
    adam_step(critic_, critic_grads, critic_opt_);

    // Actor: ascend mean Q(s, mu(s)); critic parameters stay frozen, only
    // its input gradient w.r.t. the action feeds the actor.
    ForwardCache actor_cache;
    Matrix actions = mlp_forward(actor_, view.obs, &actor_cache);
    ForwardCache q_cache;
    Matrix q_pi = mlp_forward(critic_, detail::concat_cols(view.obs, actions), &q_cache);
    for (int i = 0; i < b; ++i) stats.actor_objective += q_pi.data[i];
    stats.actor_objective /= b;
    if (!std::isfinite(stats.actor_objective))
        throw std::runtime_error("train_step: non-finite actor objective");

    Matrix dq_pi(b, 1);
    for (int i = 0; i < b; ++i) dq_pi.data[i] = 1.0 / b;
    Matrix input_grad;
    mlp_backward(critic_, q_cache, dq_pi, &input_grad);
    // Adam minimizes, so hand it the gradient of -J.
    Matrix action_grad(b, act_size_);
    for (int i = 0; i < b; ++i)
        for (int j = 0; j < act_size_; ++j)
            action_grad.at(i, j) = -input_grad.at(i, obs_size_ + j);
    MlpGrads actor_grads = mlp_backward(actor_, actor_cache, action_grad);
    adam_step(actor_, actor_grads, actor_opt_);

    soft_update(target_actor_, actor_, hyper_.tau);
    soft_update(target_critic_, critic_, hyper_.tau);
    return stats;
}

void DdpgAgent::decay_noise() {
    noise_sigma_ = std::max(noise_sigma_ * hyper_.noise_decay, hyper_.noise_floor);
}

void DdpgAgent::restore(const MlpParams& actor, const MlpParams& critic,
                        const MlpParams& target_actor, const MlpParams& target_critic,
                        const AdamState& actor_opt, const AdamState& critic_opt,
                        double noise_sigma) {
    if (actor.layer_sizes != actor_.layer_sizes || critic.layer_sizes != critic_.layer_sizes)
        throw std::invalid_argument("DdpgAgent::restore: network shape mismatch");
    actor_ = actor;
    critic_ = critic;
    target_actor_ = target_actor;
    target_critic_ = target_critic;
    actor_opt_ = actor_opt;
    critic_opt_ = critic_opt;
    noise_sigma_ = noise_sigma;
}

}  // namespace usvswarm
