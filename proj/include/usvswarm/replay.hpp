#pragma once

#include <cstddef>
#include <vector>

#include "usvswarm/rng.hpp"

namespace usvswarm {

// One replay record. For the multi-agent buffer the vectors hold the
// agent-index-ordered concatenation of per-agent observations/actions and
// the reward is the shared team reward.
struct Transition {
    std::vector<double> obs;
    std::vector<double> action;
    double reward = 0.0;
    std::vector<double> next_obs;
    bool done = false;
};

// Fixed-capacity ring buffer with uniform with-replacement sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(size_t capacity);

    void store(Transition t);

    // Uniform with replacement; throws if fewer than batch_size records.
    std::vector<size_t> sample_indices(size_t batch_size, Rng& rng) const;

    const Transition& at(size_t i) const { return storage_[i]; }
    size_t size() const { return storage_.size(); }
    size_t capacity() const { return capacity_; }
    size_t cursor() const { return cursor_; }
    const std::vector<Transition>& raw() const { return storage_; }
    void restore(std::vector<Transition> storage, size_t cursor);

private:
    size_t capacity_;
    size_t cursor_ = 0;  // next write slot once full
    std::vector<Transition> storage_;
};

}  // namespace usvswarm
