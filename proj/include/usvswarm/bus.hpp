#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

namespace usvswarm {

struct PoseMsg {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
    double u = 0.0;
    double r = 0.0;
};

struct StatusMsg {
    bool trash_detected = false;
    int collected_count = 0;
};

using Payload = std::variant<PoseMsg, StatusMsg>;

enum class PayloadKind { Pose, Status };

struct Message {
    uint64_t sequence = 0;  // strictly increasing per topic
    int stamp = 0;          // simulation step index
    Payload payload;
};

struct SubscriptionStats {
    uint64_t delivered = 0;
    uint64_t dropped = 0;
    uint64_t queued = 0;
};

// In-process topic bus: bounded per-subscriber FIFO queues, oldest-drop on
// overflow, fan-out to every subscriber registered at publish time.
// Publish and drain behave as if executed atomically in some total order
// (a single mutex serializes them).
class SwarmBus {
public:
    struct TopicHandle { int id = -1; };
    struct Subscription { int topic_id = -1; int sub_id = -1; };

    TopicHandle create_topic(const std::string& name, PayloadKind kind, int queue_capacity);
    void remove_topic(TopicHandle topic);

    TopicHandle topic(const std::string& name) const;

    uint64_t publish(TopicHandle topic, const Payload& payload, int stamp);

    Subscription subscribe(TopicHandle topic);

    // Returns queued messages in publication order and empties the queue.
    std::vector<Message> drain(const Subscription& sub);

    SubscriptionStats stats(const Subscription& sub) const;
    uint64_t published_count(TopicHandle topic) const;
    size_t subscriber_count(TopicHandle topic) const;

private:
    struct SubscriberQueue {
        std::deque<Message> queue;
        uint64_t delivered = 0;
        uint64_t dropped = 0;
        bool alive = true;
    };
    struct TopicState {
        std::string name;
        PayloadKind kind = PayloadKind::Pose;
        int capacity = 0;
        uint64_t next_sequence = 0;
        std::vector<SubscriberQueue> subscribers;
        bool alive = true;
    };

    TopicState& topic_state(int id);
    const TopicState& topic_state(int id) const;

    mutable std::mutex mutex_;
    std::vector<TopicState> topics_;
};

}  // namespace usvswarm
