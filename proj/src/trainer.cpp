#include "usvswarm/trainer.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace usvswarm {

namespace {

// Evaluation suites use a fixed offset stream so every periodic evaluation
// replays the same seeds.
constexpr uint64_t kEvalSeedOffset = 0xE7A1;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string metrics_csv_header() {
    return "episode,steps,return,collected,collisions,mean_pairwise_distance,wall_clock_s";
}

std::string metrics_csv_row(const EpisodeRecord& rec) {
    return std::to_string(rec.episode) + "," + std::to_string(rec.steps) + "," +
           fmt_double(rec.episode_return) + "," + std::to_string(rec.collected) + "," +
           std::to_string(rec.collisions) + "," + fmt_double(rec.mean_pairwise_distance) + "," +
           fmt_double(rec.wall_clock_s);
}

Trainer::Trainer(const RunConfig& config)
    : config_(config), world_(config.world), buffer_(config.agent.buffer_capacity) {
    config_.validate();
    const int obs_size = config_.world.observation_size();
    if (config_.algorithm == Algorithm::DdpgSingle) {
        ddpg_.emplace(obs_size, 2, config_.agent, config_.master_seed);
    } else {
        maddpg_.emplace(config_.world.n_agents, obs_size, 2, config_.agent, config_.master_seed);
    }
}

void Trainer::resume_from(const Checkpoint& ckpt) {
    if (ckpt.algorithm != config_.algorithm)
        throw std::invalid_argument("resume_from: checkpoint algorithm mismatch");
    check_compatible(ckpt, config_.world);
    if (ddpg_) {
        ddpg_->restore(ckpt.actors.at(0), ckpt.critic, ckpt.target_actors.at(0),
                       ckpt.target_critic, ckpt.actor_opts.at(0), ckpt.critic_opt,
                       ckpt.noise_sigma);
    } else {
        maddpg_->restore(ckpt.actors, ckpt.target_actors, ckpt.critic, ckpt.target_critic,
                         ckpt.actor_opts, ckpt.critic_opt, ckpt.noise_sigma);
    }
    buffer_.restore(ckpt.replay, ckpt.replay_cursor);
    episodes_completed_ = ckpt.episodes_completed;
}

std::vector<std::vector<double>> Trainer::select_actions(const std::vector<Observation>& obs,
                                                         Rng& rng) {
    if (ddpg_) return {ddpg_->select_action(obs[0], true, rng)};
    return maddpg_->select_joint_actions(obs, true, rng);
}

void Trainer::store_transition(const std::vector<Observation>& obs,
                               const std::vector<std::vector<double>>& actions,
                               const StepResult& result) {
    Transition t;
    t.obs = concat_vectors(obs);
    t.action = concat_vectors(actions);
    t.reward = result.reward;
    t.next_obs = concat_vectors(result.observations);
    t.done = result.done;
    buffer_.store(std::move(t));
}

void Trainer::train_if_ready(Rng& rng) {
    const size_t warmup = static_cast<size_t>(config_.agent.warmup_factor) *
                          static_cast<size_t>(config_.agent.batch_size);
    if (buffer_.size() < warmup) return;
    if (ddpg_) ddpg_->train_step(buffer_, rng);
    else maddpg_->train_step(buffer_, rng);
}

void Trainer::decay_noise() {
    if (ddpg_) ddpg_->decay_noise();
    else maddpg_->decay_noise();
}

EpisodeRecord Trainer::run_episode(int episode_index) {
    const auto start = std::chrono::steady_clock::now();
    const uint64_t env_seed = Rng::derive_seed(config_.master_seed, 2ULL * episode_index);
    Rng rng(Rng::derive_seed(config_.master_seed, 2ULL * episode_index + 1));

    auto obs = world_.reset(env_seed);
    double ep_return = 0.0;
    double pairwise_sum = 0.0;
    int steps = 0;
    while (!world_.done()) {
        auto actions = select_actions(obs, rng);
        std::vector<Action> joint;
        joint.reserve(actions.size());
        for (const auto& a : actions) joint.emplace_back(a[0], a[1]);
        StepResult result = world_.step(joint);
        store_transition(obs, actions, result);
        train_if_ready(rng);
        ep_return += result.reward;
        if (!result.info.pairwise_distances.empty()) {
            double sum = 0.0;
            for (double d : result.info.pairwise_distances) sum += d;
            pairwise_sum += sum / result.info.pairwise_distances.size();
        }
        obs = std::move(result.observations);
        ++steps;
    }
    decay_noise();

    EpisodeRecord rec;
    rec.episode = episode_index + 1;  // 1-based in logs
    rec.steps = steps;
    rec.episode_return = ep_return;
    rec.collected = world_.total_collected();
    rec.collisions = world_.total_collisions();
    rec.mean_pairwise_distance = steps > 0 ? pairwise_sum / steps : 0.0;
    rec.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<const MlpParams*> Trainer::greedy_actors() const {
    std::vector<const MlpParams*> actors;
    if (ddpg_) {
        actors.push_back(&ddpg_->actor());
    } else {
        for (const auto& a : maddpg_->actors()) actors.push_back(&a);
    }
    return actors;
}

Checkpoint Trainer::make_checkpoint() const {
    if (ddpg_) return checkpoint_from_agent(*ddpg_, buffer_, episodes_completed_, config_.master_seed);
    return checkpoint_from_system(*maddpg_, buffer_, episodes_completed_, config_.master_seed);
}

int Trainer::run() {
    namespace fs = std::filesystem;
    fs::create_directories(config_.output_dir);
    const fs::path out_dir(config_.output_dir);

    {
        std::ofstream echo(out_dir / "config_echo.json");
        echo << run_config_to_json(config_).dump(2) << '\n';
    }

    std::ofstream metrics(out_dir / "metrics.csv");
    metrics << metrics_csv_header() << '\n';
    std::ofstream eval_csv(out_dir / "eval.csv");
    eval_csv << "episode,mean_return,mean_collected,mean_collisions,mean_steps" << '\n';

    const uint64_t eval_seed = Rng::derive_seed(config_.master_seed, kEvalSeedOffset);
    char name_buf[64];

    try {
        for (int ep = static_cast<int>(episodes_completed_); ep < config_.training.episodes; ++ep) {
            EpisodeRecord rec = run_episode(ep);
            episodes_completed_ = static_cast<uint64_t>(ep) + 1;
            records_.push_back(rec);
            metrics << metrics_csv_row(rec) << '\n';
            metrics.flush();

            if ((ep + 1) % config_.training.eval_every == 0) {
                EvalMetrics m = evaluate_decentralized(greedy_actors(), config_.world,
                                                       config_.training.eval_episodes, eval_seed);
                eval_csv << (ep + 1) << ',' << fmt_double(m.mean_return) << ','
                         << fmt_double(m.mean_collected) << ',' << fmt_double(m.mean_collisions)
                         << ',' << fmt_double(m.mean_steps) << '\n';
                eval_csv.flush();
            }
            if ((ep + 1) % config_.training.checkpoint_every == 0) {
                std::snprintf(name_buf, sizeof(name_buf), "checkpoint_%06d.json", ep + 1);
                save_checkpoint(make_checkpoint(), (out_dir / name_buf).string());
            }
        }
        save_checkpoint(make_checkpoint(), (out_dir / "checkpoint_final.json").string());
    } catch (const std::runtime_error& e) {
        nlohmann::json diag{{"error", e.what()}, {"episodes_completed", episodes_completed_}};
        std::ofstream fail(out_dir / "failure.json");
        fail << diag.dump(2) << '\n';
        return 3;
    }
    return 0;
}

EvalMetrics random_policy_baseline(const WorldConfig& config, int episodes, uint64_t seed) {
    if (episodes < 1) throw std::invalid_argument("random_policy_baseline: episodes must be >= 1");
    EvalMetrics metrics;
    World world(config);
    for (int ep = 0; ep < episodes; ++ep) {
        world.reset(Rng::derive_seed(seed, static_cast<uint64_t>(ep)));
        Rng rng(Rng::derive_seed(seed ^ 0xBA5EBA11ULL, static_cast<uint64_t>(ep)));
        double ep_return = 0.0;
        int steps = 0;
        while (!world.done()) {
            std::vector<Action> joint;
            joint.reserve(config.n_agents);
            for (int i = 0; i < config.n_agents; ++i)
                joint.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            StepResult result = world.step(joint);
            ep_return += result.reward;
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

}  // namespace usvswarm
