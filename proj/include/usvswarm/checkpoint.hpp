#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "usvswarm/config.hpp"
#include "usvswarm/ddpg.hpp"
#include "usvswarm/maddpg.hpp"

namespace usvswarm {

inline constexpr int kCheckpointVersion = 1;

// Everything needed to resume training deterministically: networks,
// optimizer moments, noise level, episode counter, master seed, and the
// replay buffer contents. JSON doubles round-trip bit-exactly.
struct Checkpoint {
    int version = kCheckpointVersion;
    Algorithm algorithm = Algorithm::Maddpg;
    int n_agents = 0;
    int obs_size = 0;
    int act_size = 0;
    double noise_sigma = 0.0;
    uint64_t episodes_completed = 0;
    uint64_t master_seed = 0;
    AgentHyper hyper;
    std::vector<MlpParams> actors, target_actors;
    MlpParams critic, target_critic;
    std::vector<AdamState> actor_opts;
    AdamState critic_opt;
    std::vector<Transition> replay;
    size_t replay_cursor = 0;
};

Checkpoint checkpoint_from_agent(const DdpgAgent& agent, const ReplayBuffer& buffer,
                                 uint64_t episodes_completed, uint64_t master_seed);
Checkpoint checkpoint_from_system(const MaddpgSystem& system, const ReplayBuffer& buffer,
                                  uint64_t episodes_completed, uint64_t master_seed);

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// Dimension guard used by eval/replay before running a checkpoint against
// a world configuration.
void check_compatible(const Checkpoint& ckpt, const WorldConfig& world);

}  // namespace usvswarm
