#include "usvswarm/bus_eval.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "usvswarm/ddpg.hpp"

namespace usvswarm {

namespace {

std::vector<Action> greedy_actions(const std::vector<const MlpParams*>& actors,
                                   const std::vector<Observation>& observations) {
    std::vector<Action> joint;
    joint.reserve(actors.size());
    for (size_t i = 0; i < actors.size(); ++i) {
        const auto a = detail::actor_forward_single(*actors[i], observations[i]);
        joint.emplace_back(a[0], a[1]);
    }
    return joint;
}

double mean_pairwise(const std::vector<std::pair<double, double>>& positions) {
    if (positions.size() < 2) return 0.0;
    double sum = 0.0;
    int count = 0;
    for (size_t i = 0; i < positions.size(); ++i)
        for (size_t j = i + 1; j < positions.size(); ++j) {
            sum += std::hypot(positions[i].first - positions[j].first,
                              positions[i].second - positions[j].second);
            ++count;
        }
    return sum / count;
}

}  // namespace

EpisodeTrace run_direct_episode(const std::vector<const MlpParams*>& actors,
                                const WorldConfig& config, uint64_t seed) {
    World world(config);
    auto observations = world.reset(seed);
    EpisodeTrace trace;
    while (!world.done()) {
        auto joint = greedy_actions(actors, observations);
        trace.actions.push_back(joint);
        StepResult result = world.step(joint);
        std::vector<std::pair<double, double>> positions;
        for (const auto& v : world.vessels()) positions.emplace_back(v.x, v.y);
        trace.mean_pairwise_distance.push_back(mean_pairwise(positions));
        trace.episode_return += result.reward;
        observations = std::move(result.observations);
        ++trace.steps;
    }
    trace.collected = world.total_collected();
    return trace;
}

EpisodeTrace run_bus_driven_episode(const std::vector<const MlpParams*>& actors,
                                    const WorldConfig& config, uint64_t seed,
                                    int queue_capacity) {
    const int n = static_cast<int>(actors.size());
    SwarmBus bus;
    std::vector<SwarmBus::TopicHandle> pose_topics(n), status_topics(n);
    for (int i = 0; i < n; ++i) {
        pose_topics[i] = bus.create_topic("/usv_" + std::to_string(i) + "/pose",
                                          PayloadKind::Pose, queue_capacity);
        status_topics[i] = bus.create_topic("/usv_" + std::to_string(i) + "/status",
                                            PayloadKind::Status, queue_capacity);
    }
    // Agent i subscribes to every peer's pose stream.
    std::vector<std::vector<SwarmBus::Subscription>> peer_subs(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i) peer_subs[i].push_back(bus.subscribe(pose_topics[j]));

    World world(config);
    auto observations = world.reset(seed);
    // Latest known peer pose per (agent, peer slot).
    std::vector<std::vector<PoseMsg>> last_peer_pose(n, std::vector<PoseMsg>(std::max(n - 1, 0)));

    EpisodeTrace trace;
    while (!world.done()) {
        const int stamp = world.step_index();
        for (int i = 0; i < n; ++i) {
            const VesselState& v = world.vessels()[i];
            bus.publish(pose_topics[i],
                        PoseMsg{v.x, v.y, v.heading, v.surge_speed, v.yaw_rate}, stamp);
            bus.publish(status_topics[i],
                        StatusMsg{observations[i].back() > 0.5, world.total_collected()}, stamp);
        }
        // Every agent drains its peer queues before acting; the poses feed
        // the coordination diagnostic only.
        for (int i = 0; i < n; ++i) {
            for (size_t slot = 0; slot < peer_subs[i].size(); ++slot) {
                auto messages = bus.drain(peer_subs[i][slot]);
                if (!messages.empty())
                    last_peer_pose[i][slot] = std::get<PoseMsg>(messages.back().payload);
            }
        }
        if (n >= 2) {
            std::vector<std::pair<double, double>> positions;
            positions.emplace_back(world.vessels()[0].x, world.vessels()[0].y);
            for (const auto& pose : last_peer_pose[0])
                positions.emplace_back(pose.x, pose.y);
            trace.mean_pairwise_distance.push_back(mean_pairwise(positions));
        } else {
            trace.mean_pairwise_distance.push_back(0.0);
        }

        auto joint = greedy_actions(actors, observations);
        trace.actions.push_back(joint);
        StepResult result = world.step(joint);
        trace.episode_return += result.reward;
        observations = std::move(result.observations);
        ++trace.steps;
    }
    trace.collected = world.total_collected();
    return trace;
}

}  // namespace usvswarm
