#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "usvswarm/rewards.hpp"
#include "usvswarm/rng.hpp"
#include "usvswarm/vessel.hpp"

namespace usvswarm {

struct WorldConfig {
    double arena_width = 40.0;
    double arena_height = 40.0;
    int n_agents = 3;
    int n_trash = 6;
    double trash_radius = 0.2;
    double collect_radius = 1.0;
    double detect_radius = 8.0;
    int lidar_beams = 16;
    double lidar_max_range = 20.0;
    int max_steps = 1000;
    double dt = 0.1;
    VesselParams vessel;
    RewardWeights reward_weights;
    uint64_t seed = 0;

    void validate() const;
    int observation_size() const { return 9 + lidar_beams; }
};

struct TrashItem {
    double x = 0.0;
    double y = 0.0;
    bool active = true;
};

// Per-step diagnostics. The shared reward is derived from these.
struct StepInfo {
    std::vector<int> collected_ids;
    std::vector<std::pair<int, int>> collision_pairs;
    int wall_hits = 0;
    std::vector<double> pairwise_distances;  // D(i,j) for i<j in index order
};

using Observation = std::vector<double>;

struct StepResult {
    std::vector<Observation> observations;
    double reward = 0.0;
    bool done = false;
    StepInfo info;
};

// Episodic MDP over a rectangular arena with hard walls: vessels start on a
// grid along the south edge, trash is rejection-sampled uniformly, and the
// episode ends when all trash is collected or max_steps is reached.
class World {
public:
    explicit World(const WorldConfig& config);

    std::vector<Observation> reset(uint64_t seed);

    // Steps every vessel, handles wall clipping, collection, collisions,
    // and the shared reward. Throws if the episode is already done.
    StepResult step(const std::vector<Action>& joint_action);

    // Exact ray-cast ranges against trash discs, other vessels, and the
    // arena walls; beam k points at heading + 2*pi*k/K.
    std::vector<double> lidar_scan(int agent_index) const;

    // Frozen component order:
    //   [2x/W-1, 2y/H-1, cos th, sin th, n_L, n_R, u/u_max, r/r_max,
    //    K lidar ranges / max_range, trash_detected]
    Observation build_observation(int agent_index) const;

    // All unordered pairs with center distance < 2*hull_radius.
    std::vector<std::pair<int, int>> detect_collisions() const;

    const WorldConfig& config() const { return config_; }
    const std::vector<VesselState>& vessels() const { return vessels_; }
    const std::vector<TrashItem>& trash() const { return trash_; }
    int step_index() const { return step_index_; }
    bool done() const { return done_; }
    int active_trash_count() const;
    int total_collected() const { return total_collected_; }
    int total_collisions() const { return total_collisions_; }

private:
    void check_agent_index(int agent_index) const;

    WorldConfig config_;
    std::vector<VesselState> vessels_;
    std::vector<TrashItem> trash_;
    int step_index_ = 0;
    bool done_ = false;
    int total_collected_ = 0;
    int total_collisions_ = 0;
    Rng rng_;
};

}  // namespace usvswarm
