#include "usvswarm/world.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace usvswarm {

namespace {

constexpr int kMaxPlacementAttempts = 10000;

double clamp01sym(double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); }

// Nearest non-negative ray-circle intersection; infinity on miss. A ray
// starting inside the disc reports range 0.
double ray_circle(double ox, double oy, double dx, double dy,
                  double cx, double cy, double radius) {
    const double fx = ox - cx;
    const double fy = oy - cy;
    const double c = fx * fx + fy * fy - radius * radius;
    if (c < 0.0) return 0.0;
    const double b = fx * dx + fy * dy;
    const double disc = b * b - c;
    if (disc < 0.0) return std::numeric_limits<double>::infinity();
    const double t = -b - std::sqrt(disc);
    return t >= 0.0 ? t : std::numeric_limits<double>::infinity();
}

}  // namespace

void WorldConfig::validate() const {
    if (arena_width <= 0 || arena_height <= 0)
        throw std::invalid_argument("WorldConfig: arena dimensions must be positive");
    if (n_agents < 1) throw std::invalid_argument("WorldConfig: n_agents must be >= 1");
    if (n_trash < 0) throw std::invalid_argument("WorldConfig: n_trash must be >= 0");
    if (trash_radius <= 0 || collect_radius <= 0 || detect_radius <= 0)
        throw std::invalid_argument("WorldConfig: radii must be positive");
    if (collect_radius < trash_radius)
        throw std::invalid_argument("WorldConfig: collect_radius must be >= trash_radius");
    if (lidar_beams < 1) throw std::invalid_argument("WorldConfig: lidar_beams must be >= 1");
    if (lidar_max_range <= 0) throw std::invalid_argument("WorldConfig: lidar_max_range must be positive");
    if (max_steps < 1) throw std::invalid_argument("WorldConfig: max_steps must be >= 1");
    if (dt <= 0) throw std::invalid_argument("WorldConfig: dt must be positive");
    vessel.validate();
    reward_weights.validate();
}

World::World(const WorldConfig& config) : config_(config), rng_(config.seed) {
    config_.validate();
    reset(config_.seed);
}

std::vector<Observation> World::reset(uint64_t seed) {
    rng_.reseed(seed);
    step_index_ = 0;
    done_ = false;
    total_collected_ = 0;
    total_collisions_ = 0;

    const double width = config_.arena_width;
    const double height = config_.arena_height;
    const int n = config_.n_agents;

    vessels_.assign(n, VesselState{});
    for (int i = 0; i < n; ++i) {
        vessels_[i].x = width * (i + 1) / (n + 1);
        vessels_[i].y = config_.vessel.hull_radius + 0.5;
        vessels_[i].heading = std::numbers::pi / 2.0;
    }

    const double min_clearance = 2.0 * (config_.trash_radius + config_.vessel.hull_radius);
    trash_.clear();
    trash_.reserve(config_.n_trash);
    for (int t = 0; t < config_.n_trash; ++t) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
            const double x = rng_.uniform(0.0, width);
            const double y = rng_.uniform(0.0, height);
            bool clear = true;
            for (const auto& v : vessels_) {
                if (std::hypot(x - v.x, y - v.y) < min_clearance) { clear = false; break; }
            }
            for (const auto& item : trash_) {
                if (!clear) break;
                if (std::hypot(x - item.x, y - item.y) < min_clearance) { clear = false; break; }
            }
            if (clear) {
                trash_.push_back({x, y, true});
                placed = true;
                break;
            }
        }
        if (!placed)
            throw std::invalid_argument("World::reset: arena too small to place trash item " +
                                        std::to_string(t));
    }

    std::vector<Observation> obs;
    obs.reserve(n);
    for (int i = 0; i < n; ++i) obs.push_back(build_observation(i));
    return obs;
}

int World::active_trash_count() const {
    int count = 0;
    for (const auto& t : trash_) count += t.active ? 1 : 0;
    return count;
}

void World::check_agent_index(int agent_index) const {
    if (agent_index < 0 || agent_index >= config_.n_agents)
        throw std::out_of_range("invalid agent index " + std::to_string(agent_index));
}

std::vector<std::pair<int, int>> World::detect_collisions() const {
    std::vector<std::pair<int, int>> pairs;
    const double threshold = 2.0 * config_.vessel.hull_radius;
    for (size_t i = 0; i < vessels_.size(); ++i) {
        for (size_t j = i + 1; j < vessels_.size(); ++j) {
            const double d = std::hypot(vessels_[i].x - vessels_[j].x,
                                        vessels_[i].y - vessels_[j].y);
            if (d < threshold) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return pairs;
}

std::vector<double> World::lidar_scan(int agent_index) const {
    check_agent_index(agent_index);
    const VesselState& self = vessels_[agent_index];
    const int beams = config_.lidar_beams;
    const double max_range = config_.lidar_max_range;
    std::vector<double> ranges(beams, max_range);

    for (int k = 0; k < beams; ++k) {
        const double angle = self.heading + 2.0 * std::numbers::pi * k / beams;
        const double dx = std::cos(angle);
        const double dy = std::sin(angle);
        double best = max_range;

        // Arena walls: the ray starts inside, so the first boundary crossing
        // along each axis is the wall hit.
        if (dx > 0.0) best = std::min(best, (config_.arena_width - self.x) / dx);
        else if (dx < 0.0) best = std::min(best, -self.x / dx);
        if (dy > 0.0) best = std::min(best, (config_.arena_height - self.y) / dy);
        else if (dy < 0.0) best = std::min(best, -self.y / dy);

        for (const auto& item : trash_) {
            if (!item.active) continue;
            best = std::min(best, ray_circle(self.x, self.y, dx, dy, item.x, item.y,
                                             config_.trash_radius));
        }
        for (size_t j = 0; j < vessels_.size(); ++j) {
            if (static_cast<int>(j) == agent_index) continue;
            best = std::min(best, ray_circle(self.x, self.y, dx, dy, vessels_[j].x,
                                             vessels_[j].y, config_.vessel.hull_radius));
        }
        ranges[k] = std::min(best, max_range);
    }
    return ranges;
}

Observation World::build_observation(int agent_index) const {
    check_agent_index(agent_index);
    const VesselState& self = vessels_[agent_index];
    const double u_max = config_.vessel.max_surge_speed();
    const double r_max = config_.vessel.max_yaw_rate();

    Observation obs;
    obs.reserve(config_.observation_size());
    obs.push_back(2.0 * (self.x / config_.arena_width) - 1.0);
    obs.push_back(2.0 * (self.y / config_.arena_height) - 1.0);
    obs.push_back(std::cos(self.heading));
    obs.push_back(std::sin(self.heading));
    obs.push_back(self.prop_left);
    obs.push_back(self.prop_right);
    obs.push_back(clamp01sym(self.surge_speed / u_max));
    obs.push_back(clamp01sym(self.yaw_rate / r_max));
    for (double range : lidar_scan(agent_index))
        obs.push_back(range / config_.lidar_max_range);

    bool detected = false;
    for (const auto& item : trash_) {
        if (item.active &&
            std::hypot(item.x - self.x, item.y - self.y) <= config_.detect_radius) {
            detected = true;
            break;
        }
    }
    obs.push_back(detected ? 1.0 : 0.0);
    return obs;
}

StepResult World::step(const std::vector<Action>& joint_action) {
    if (done_) throw std::logic_error("World::step: episode is already done");
    if (joint_action.size() != static_cast<size_t>(config_.n_agents))
        throw std::invalid_argument("World::step: expected one action per agent");

    StepResult result;

    for (int i = 0; i < config_.n_agents; ++i) {
        const Action action = clamp_action(joint_action[i]);
        VesselState next = step_vessel(vessels_[i], action, config_.vessel, config_.dt);

        // Hard walls: clip the center and keep only the along-wall part of
        // the velocity, projected back onto the heading.
        bool hit_x = false, hit_y = false;
        if (next.x < 0.0) { next.x = 0.0; hit_x = true; }
        if (next.x > config_.arena_width) { next.x = config_.arena_width; hit_x = true; }
        if (next.y < 0.0) { next.y = 0.0; hit_y = true; }
        if (next.y > config_.arena_height) { next.y = config_.arena_height; hit_y = true; }
        if (hit_x && hit_y) {
            next.surge_speed = 0.0;
        } else if (hit_x) {
            const double s = std::sin(next.heading);
            next.surge_speed *= s * s;
        } else if (hit_y) {
            const double c = std::cos(next.heading);
            next.surge_speed *= c * c;
        }
        if (hit_x || hit_y) result.info.wall_hits += 1;
        vessels_[i] = next;
    }

    // Collection: nearest vessel gets the credit, ties to the lowest index.
    for (size_t t = 0; t < trash_.size(); ++t) {
        if (!trash_[t].active) continue;
        int best_agent = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int i = 0; i < config_.n_agents; ++i) {
            const double d = std::hypot(trash_[t].x - vessels_[i].x,
                                        trash_[t].y - vessels_[i].y);
            if (d <= config_.collect_radius && d < best_dist) {
                best_dist = d;
                best_agent = i;
            }
        }
        if (best_agent >= 0) {
            trash_[t].active = false;
            result.info.collected_ids.push_back(static_cast<int>(t));
            total_collected_ += 1;
        }
    }

    result.info.collision_pairs = detect_collisions();
    total_collisions_ += static_cast<int>(result.info.collision_pairs.size());

    std::vector<std::pair<double, double>> positions;
    positions.reserve(vessels_.size());
    for (const auto& v : vessels_) positions.emplace_back(v.x, v.y);
    for (size_t i = 0; i < positions.size(); ++i)
        for (size_t j = i + 1; j < positions.size(); ++j)
            result.info.pairwise_distances.push_back(
                std::hypot(positions[i].first - positions[j].first,
                           positions[i].second - positions[j].second));

    RewardEvents events;
    events.n_collected = static_cast<int>(result.info.collected_ids.size());
    events.n_collisions = static_cast<int>(result.info.collision_pairs.size()) +
                          result.info.wall_hits;
    result.reward = compute_reward(events, positions, config_.reward_weights);

    step_index_ += 1;
    done_ = (active_trash_count() == 0) || (step_index_ >= config_.max_steps);
    result.done = done_;

    result.observations.reserve(config_.n_agents);
    for (int i = 0; i < config_.n_agents; ++i)
        result.observations.push_back(build_observation(i));
    return result;
}

}  // namespace usvswarm
