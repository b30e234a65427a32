#include "usvswarm/replay.hpp"

#include <stdexcept>

namespace usvswarm {

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
    storage_.reserve(capacity);
}

void ReplayBuffer::store(Transition t) {
    if (storage_.size() < capacity_) {
        storage_.push_back(std::move(t));
    } else {
        storage_[cursor_] = std::move(t);
        cursor_ = (cursor_ + 1) % capacity_;
    }
}

std::vector<size_t> ReplayBuffer::sample_indices(size_t batch_size, Rng& rng) const {
    if (storage_.size() < batch_size)
        throw std::runtime_error("ReplayBuffer: not enough records to sample");
    std::vector<size_t> indices(batch_size);
    for (auto& i : indices) i = rng.uniform_index(storage_.size());
    return indices;
}

void ReplayBuffer::restore(std::vector<Transition> storage, size_t cursor) {
    if (storage.size() > capacity_ || (storage.size() < capacity_ && cursor != 0))
        throw std::invalid_argument("ReplayBuffer: inconsistent restore state");
    storage_ = std::move(storage);
    cursor_ = cursor;
}

}  // namespace usvswarm
