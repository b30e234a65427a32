#include "usvswarm/trajectory.hpp"

#include <cmath>
#include <utility>

#include "usvswarm/ddpg.hpp"
#include "usvswarm/maddpg.hpp"

namespace usvswarm {

nlohmann::json step_record(int t, const World& world, const StepResult& result) {
    auto vessels = nlohmann::json::array();
    for (const auto& v : world.vessels())
        vessels.push_back({{"x", v.x}, {"y", v.y}, {"heading", v.heading},
                           {"u", v.surge_speed}, {"r", v.yaw_rate}});
    auto trash = nlohmann::json::array();
    for (const auto& item : world.trash())
        trash.push_back({{"x", item.x}, {"y", item.y}, {"active", item.active}});
    auto pairs = nlohmann::json::array();
    for (const auto& [i, j] : result.info.collision_pairs) pairs.push_back({i, j});
    return nlohmann::json{
        {"t", t},
        {"vessels", std::move(vessels)},
        {"trash", std::move(trash)},
        {"reward", result.reward},
        {"events",
         {{"collected_ids", result.info.collected_ids},
          {"collision_pairs", std::move(pairs)},
          {"wall_hits", result.info.wall_hits}}},
    };
}

double recompute_record_reward(const nlohmann::json& record, const RewardWeights& weights) {
    RewardEvents events;
    const auto& ev = record.at("events");
    events.n_collected = static_cast<int>(ev.at("collected_ids").size());
    events.n_collisions = static_cast<int>(ev.at("collision_pairs").size()) +
                          ev.at("wall_hits").get<int>();
    std::vector<std::pair<double, double>> positions;
    for (const auto& v : record.at("vessels"))
        positions.emplace_back(v.at("x").get<double>(), v.at("y").get<double>());
    return compute_reward(events, positions, weights);
}

namespace {

void write_svg(std::ostream& out, const WorldConfig& config,
               const std::vector<std::vector<std::pair<double, double>>>& paths,
               const std::vector<TrashItem>& initial_trash) {
    const double scale = 16.0;
    const double width = config.arena_width * scale;
    const double height = config.arena_height * scale;
    // SVG y grows downward; flip so north is up.
    auto sx = [&](double x) { return x * scale; };
    auto sy = [&](double y) { return height - y * scale; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"#eaf4fb\" stroke=\"#345\" stroke-width=\"2\"/>\n";
    for (const auto& item : initial_trash)
        out << "  <circle class=\"trash\" cx=\"" << sx(item.x) << "\" cy=\"" << sy(item.y)
            << "\" r=\"" << std::max(config.trash_radius * scale, 3.0)
            << "\" fill=\"#b5651d\"/>\n";
    const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    for (size_t i = 0; i < paths.size(); ++i) {
        out << "  <polyline class=\"vessel-path\" fill=\"none\" stroke=\""
            << colors[i % 6] << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : paths[i]) out << sx(x) << ',' << sy(y) << ' ';
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace

ReplayOutput run_replay_episode(const std::vector<const MlpParams*>& actors,
                                const WorldConfig& config, uint64_t seed,
                                std::ostream& traj_out, std::ostream& svg_out) {
    World world(config);
    auto observations = world.reset(seed);
    const std::vector<TrashItem> initial_trash = world.trash();

    std::vector<std::vector<std::pair<double, double>>> paths(actors.size());
    for (size_t i = 0; i < actors.size(); ++i)
        paths[i].emplace_back(world.vessels()[i].x, world.vessels()[i].y);

    ReplayOutput out;
    int t = 0;
    while (!world.done()) {
        std::vector<Action> joint;
        joint.reserve(actors.size());
        for (size_t i = 0; i < actors.size(); ++i) {
            const auto a = detail::actor_forward_single(*actors[i], observations[i]);
            joint.emplace_back(a[0], a[1]);
        }
        StepResult result = world.step(joint);
        traj_out << step_record(t, world, result).dump() << '\n';
        for (size_t i = 0; i < actors.size(); ++i)
            paths[i].emplace_back(world.vessels()[i].x, world.vessels()[i].y);
        out.episode_return += result.reward;
        observations = std::move(result.observations);
        ++t;
    }
    out.steps = t;
    out.collected = world.total_collected();
    write_svg(svg_out, config, paths, initial_trash);
    return out;
}

}  // namespace usvswarm
