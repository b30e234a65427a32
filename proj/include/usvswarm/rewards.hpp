#pragma once

#include <utility>
#include <vector>

namespace usvswarm {

// Weighted shared team reward:
//   R = w1*Rcollect - w2*Pcoll - w3*Ptime + w4*Rcoord
// Rcoord sums (1 - D(i,j)/d_max) over agent pairs, with D clamped at d_max
// so each pair contributes a value in [0, 1].
struct RewardWeights {
    double w1 = 1.0;
    double w2 = 1.0;
    double w3 = 1.0;
    double w4 = 0.25;
    double r_collect_unit = 10.0;  // per trash item
    double p_coll_unit = 5.0;      // per collision event
    double p_time_unit = 0.01;     // per step
    double d_max = 56.5685424949238;  // default: 40x40 arena diagonal

    void validate() const;
};

struct RewardEvents {
    int n_collected = 0;
    int n_collisions = 0;  // vessel-vessel pairs plus wall hits
};

double coordination_term(const std::vector<std::pair<double, double>>& positions, double d_max);

double compute_reward(const RewardEvents& events,
                      const std::vector<std::pair<double, double>>& positions,
                      const RewardWeights& weights);

}  // namespace usvswarm
