#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "opmax/graph.hpp"
#include "opmax/rng.hpp"

namespace opmax {

// Content class index in 0..classes-1, or the personal class.
class MessageClass {
public:
    constexpr MessageClass() = default;
    constexpr explicit MessageClass(int index) : index_(index) {}

    static constexpr MessageClass personal() { return MessageClass{-1}; }

    constexpr bool is_personal() const noexcept { return index_ < 0; }
    constexpr std::size_t index() const noexcept { return static_cast<std::size_t>(index_); }
    constexpr int raw() const noexcept { return index_; }

    friend constexpr bool operator==(MessageClass, MessageClass) = default;

private:
    int index_ = -1;
};

struct Message {
    std::uint64_t id = 0;
    MessageClass cls;
    NodeId origin = 0;
    // Forwarding target attached when a strategy routed this copy.
    std::optional<NodeId> recommendation;
};

// Bounded FIFO; index 0 is the newest message.
class Feed {
public:
    explicit Feed(std::size_t capacity = 1);

    void push(Message m);

    std::size_t size() const noexcept { return slots_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    const Message& operator[](std::size_t i) const { return slots_[i]; }
    std::size_t content_count() const noexcept;

    auto begin() const { return slots_.begin(); }
    auto end() const { return slots_.end(); }

private:
    std::deque<Message> slots_;
    std::size_t capacity_;
};

struct NodeState {
    std::vector<double> alpha;  // per content class, all positive
    double beta = 1.0;          // retention in (0, 1]
    double zeta = 1.0;          // trust gain >= 0
    Feed feed;
    std::unordered_set<std::uint64_t> seen;  // ids already counted toward alpha
};

enum class SourceKind { Smart, Random };

struct SourceSpec {
    NodeId node = 0;
    MessageClass cls{0};
    int rate = 1;
    SourceKind kind = SourceKind::Random;
};

// alpha normalized onto the simplex.
std::vector<double> opinion(std::span<const double> alpha);
inline std::vector<double> opinion(const NodeState& s) { return opinion(s.alpha); }

// alpha'_c = beta * alpha_c + zeta * counts_c for every content class.
std::vector<double> belief_update(std::span<const double> alpha, double beta, double zeta,
                                  std::span<const int> counts);
void belief_update(NodeState& s, std::span<const int> counts);

// One-step gain in the target's opinion of `cls` from a single delivery:
// mu (1 - mu) / (mu + alpha_cls * beta / zeta). Zero when zeta is zero.
double myopic_reward(std::span<const double> alpha, double beta, double zeta, MessageClass cls);
inline double myopic_reward(const NodeState& s, MessageClass cls) {
    return myopic_reward(s.alpha, s.beta, s.zeta, cls);
}

struct Selection {
    enum class Kind { Personal, Content, NoOp };
    Kind kind = Kind::NoOp;
    std::size_t slot = 0;   // feed index of the picked message (Content only)
    bool forward = false;   // forward gate passed (Content only)
};

// With probability p_sp a personal message; otherwise a uniform pick among
// the feed's content messages, forwarded with probability equal to the
// node's opinion of that message's class. No-op when no content is present.
Selection select_message(const NodeState& s, double p_sp, Rng& rng);

// Pushes msg into the feed and, when it is a content message not seen before,
// increments counts[class]. Returns whether it counted.
bool deliver(NodeState& s, const Message& msg, std::span<int> counts);

}  // namespace opmax
