#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "usvswarm/nn.hpp"
#include "usvswarm/world.hpp"

namespace usvswarm {

// One JSON Lines record per environment step (post-step state).
nlohmann::json step_record(int t, const World& world, const StepResult& result);

// Recomputes the shared reward from a logged step record; used to validate
// exported trajectories against the reward arithmetic.
double recompute_record_reward(const nlohmann::json& record, const RewardWeights& weights);

struct ReplayOutput {
    int steps = 0;
    double episode_return = 0.0;
    int collected = 0;
};

// Runs one greedy episode, streaming JSON Lines records to traj_out and an
// overhead SVG (one path per vessel, one marker per trash item) to svg_out.
ReplayOutput run_replay_episode(const std::vector<const MlpParams*>& actors,
                                const WorldConfig& config, uint64_t seed,
                                std::ostream& traj_out, std::ostream& svg_out);

}  // namespace usvswarm
