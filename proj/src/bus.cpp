#include "usvswarm/bus.hpp"

#include <stdexcept>

namespace usvswarm {

namespace {

PayloadKind kind_of(const Payload& payload) {
    return std::holds_alternative<PoseMsg>(payload) ? PayloadKind::Pose : PayloadKind::Status;
}

}  // namespace

SwarmBus::TopicState& SwarmBus::topic_state(int id) {
    if (id < 0 || id >= static_cast<int>(topics_.size()) || !topics_[id].alive)
        throw std::invalid_argument("SwarmBus: stale or invalid topic handle");
    return topics_[id];
}

const SwarmBus::TopicState& SwarmBus::topic_state(int id) const {
    if (id < 0 || id >= static_cast<int>(topics_.size()) || !topics_[id].alive)
        throw std::invalid_argument("SwarmBus: stale or invalid topic handle");
    return topics_[id];
}

SwarmBus::TopicHandle SwarmBus::create_topic(const std::string& name, PayloadKind kind,
                                             int queue_capacity) {
    std::lock_guard lock(mutex_);
    if (queue_capacity < 1) throw std::invalid_argument("SwarmBus: queue capacity must be >= 1");
    for (const auto& t : topics_)
        if (t.alive && t.name == name)
            throw std::invalid_argument("SwarmBus: duplicate topic name " + name);
    TopicState state;
    state.name = name;
    state.kind = kind;
    state.capacity = queue_capacity;
    topics_.push_back(std::move(state));
    return {static_cast<int>(topics_.size()) - 1};
}

void SwarmBus::remove_topic(TopicHandle topic) {
    std::lock_guard lock(mutex_);
    topic_state(topic.id).alive = false;
}

SwarmBus::TopicHandle SwarmBus::topic(const std::string& name) const {
    std::lock_guard lock(mutex_);
    for (size_t i = 0; i < topics_.size(); ++i)
        if (topics_[i].alive && topics_[i].name == name) return {static_cast<int>(i)};
    throw std::invalid_argument("SwarmBus: unknown topic " + name);
}

uint64_t SwarmBus::publish(TopicHandle topic, const Payload& payload, int stamp) {
    std::lock_guard lock(mutex_);
    TopicState& state = topic_state(topic.id);
    if (kind_of(payload) != state.kind)
        throw std::invalid_argument("SwarmBus: payload kind mismatch on " + state.name);
    Message msg;
    msg.sequence = state.next_sequence++;
    msg.stamp = stamp;
    msg.payload = payload;
    for (auto& sub : state.subscribers) {
        if (!sub.alive) continue;
        if (sub.queue.size() == static_cast<size_t>(state.capacity)) {
            sub.queue.pop_front();
            sub.dropped += 1;
        }
        sub.queue.push_back(msg);
    }
    return msg.sequence;
}

SwarmBus::Subscription SwarmBus::subscribe(TopicHandle topic) {
    std::lock_guard lock(mutex_);
    TopicState& state = topic_state(topic.id);
    state.subscribers.emplace_back();
    return {topic.id, static_cast<int>(state.subscribers.size()) - 1};
}

std::vector<Message> SwarmBus::drain(const Subscription& sub) {
    std::lock_guard lock(mutex_);
    TopicState& state = topic_state(sub.topic_id);
    if (sub.sub_id < 0 || sub.sub_id >= static_cast<int>(state.subscribers.size()))
        throw std::invalid_argument("SwarmBus: invalid subscription handle");
    auto& queue = state.subscribers[sub.sub_id];
    std::vector<Message> out(queue.queue.begin(), queue.queue.end());
    queue.queue.clear();
    queue.delivered += out.size();
    return out;
}

SubscriptionStats SwarmBus::stats(const Subscription& sub) const {
    std::lock_guard lock(mutex_);
    const TopicState& state = topic_state(sub.topic_id);
    if (sub.sub_id < 0 || sub.sub_id >= static_cast<int>(state.subscribers.size()))
        throw std::invalid_argument("SwarmBus: invalid subscription handle");
    const auto& queue = state.subscribers[sub.sub_id];
    return {queue.delivered, queue.dropped, queue.queue.size()};
}

uint64_t SwarmBus::published_count(TopicHandle topic) const {
    std::lock_guard lock(mutex_);
    return topic_state(topic.id).next_sequence;
}

size_t SwarmBus::subscriber_count(TopicHandle topic) const {
    std::lock_guard lock(mutex_);
    return topic_state(topic.id).subscribers.size();
}

}  // namespace usvswarm
