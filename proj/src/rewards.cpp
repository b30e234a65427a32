#include "usvswarm/rewards.hpp"

#include <cmath>
#include <stdexcept>

namespace usvswarm {

void RewardWeights::validate() const {
    if (!(d_max > 0.0)) throw std::invalid_argument("RewardWeights: d_max must be > 0");
    for (double w : {w1, w2, w3, w4, r_collect_unit, p_coll_unit, p_time_unit})
        if (!std::isfinite(w) || w < 0.0)
            throw std::invalid_argument("RewardWeights: weights must be finite and >= 0");
}

double coordination_term(const std::vector<std::pair<double, double>>& positions, double d_max) {
    if (!(d_max > 0.0)) throw std::invalid_argument("coordination_term: d_max must be > 0");
    double sum = 0.0;
    for (size_t i = 0; i < positions.size(); ++i) {
        for (size_t j = i + 1; j < positions.size(); ++j) {
            const double dx = positions[i].first - positions[j].first;
            const double dy = positions[i].second - positions[j].second;
            const double d = std::min(std::sqrt(dx * dx + dy * dy), d_max);
            sum += 1.0 - d / d_max;
        }
    }
    return sum;
}

double compute_reward(const RewardEvents& events,
                      const std::vector<std::pair<double, double>>& positions,
                      const RewardWeights& weights) {
    if (events.n_collected < 0 || events.n_collisions < 0)
        throw std::invalid_argument("compute_reward: negative event counts");
    for (const auto& p : positions)
        if (!std::isfinite(p.first) || !std::isfinite(p.second))
            throw std::invalid_argument("compute_reward: non-finite position");

    return weights.w1 * (events.n_collected * weights.r_collect_unit) -
           weights.w2 * (events.n_collisions * weights.p_coll_unit) -
           weights.w3 * weights.p_time_unit +
           weights.w4 * coordination_term(positions, weights.d_max);
}

}  // namespace usvswarm
