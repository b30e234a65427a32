#pragma once

#include <cstdint>
#include <vector>

#include "usvswarm/bus.hpp"
#include "usvswarm/nn.hpp"
#include "usvswarm/vessel.hpp"
#include "usvswarm/world.hpp"

namespace usvswarm {

struct EpisodeTrace {
    std::vector<std::vector<Action>> actions;  // [step][agent]
    double episode_return = 0.0;
    int steps = 0;
    int collected = 0;
    // Mean pairwise distance per step as seen through the bus (bus-driven
    // mode) or computed directly (direct mode); diagnostics only, peer
    // poses never feed actor inputs.
    std::vector<double> mean_pairwise_distance;
};

// Greedy episode where each agent reads its observation straight from the
// environment.
EpisodeTrace run_direct_episode(const std::vector<const MlpParams*>& actors,
                                const WorldConfig& config, uint64_t seed);

// Greedy episode where each agent node publishes "/usv_<i>/pose" and
// "/usv_<i>/status" every step and tracks peers by draining its
// subscriptions. Actions still depend only on the agent's own observation,
// so with large-enough queues this matches run_direct_episode
// action-for-action.
EpisodeTrace run_bus_driven_episode(const std::vector<const MlpParams*>& actors,
                                    const WorldConfig& config, uint64_t seed,
                                    int queue_capacity);

}  // namespace usvswarm
