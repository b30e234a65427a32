#pragma once

#include <optional>
#include <string>
#include <vector>

#include "usvswarm/checkpoint.hpp"
#include "usvswarm/config.hpp"
#include "usvswarm/ddpg.hpp"
#include "usvswarm/maddpg.hpp"
#include "usvswarm/world.hpp"

namespace usvswarm {

struct EpisodeRecord {
    int episode = 0;
    int steps = 0;
    double episode_return = 0.0;
    int collected = 0;
    int collisions = 0;
    double mean_pairwise_distance = 0.0;
    double wall_clock_s = 0.0;
};

// Episode loop shared by both algorithms. Episode e draws its environment
// seed from derive_seed(master_seed, 2e) and its noise/sampling stream from
// derive_seed(master_seed, 2e+1), so a resumed run replays the exact same
// randomness as an uninterrupted one.
class Trainer {
public:
    explicit Trainer(const RunConfig& config);

    // Restores networks, optimizer state, noise level, and replay contents;
    // training continues from ckpt.episodes_completed.
    void resume_from(const Checkpoint& ckpt);

    // Runs episodes [episodes_completed, training.episodes), writing
    // metrics.csv, eval.csv, checkpoints, and the config echo into
    // output_dir. Returns 0, or 3 on numerical failure (diagnostics in
    // failure.json).
    int run();

    const std::vector<EpisodeRecord>& records() const { return records_; }
    Checkpoint make_checkpoint() const;
    std::vector<const MlpParams*> greedy_actors() const;

private:
    EpisodeRecord run_episode(int episode_index);
    void store_transition(const std::vector<Observation>& obs,
                          const std::vector<std::vector<double>>& actions,
                          const StepResult& result);
    std::vector<std::vector<double>> select_actions(const std::vector<Observation>& obs, Rng& rng);
    void train_if_ready(Rng& rng);
    void decay_noise();

    RunConfig config_;
    World world_;
    ReplayBuffer buffer_;
    std::optional<DdpgAgent> ddpg_;
    std::optional<MaddpgSystem> maddpg_;
    uint64_t episodes_completed_ = 0;
    std::vector<EpisodeRecord> records_;
};

std::string metrics_csv_header();
std::string metrics_csv_row(const EpisodeRecord& rec);

// Uniform random actions each step; the self-measured baseline the
// acceptance checks compare trained policies against.
EvalMetrics random_policy_baseline(const WorldConfig& config, int episodes, uint64_t seed);

}  // namespace usvswarm
