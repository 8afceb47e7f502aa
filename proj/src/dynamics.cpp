#include "opmax/dynamics.hpp"

#include <numeric>

#include "opmax/error.hpp"

namespace opmax {

Feed::Feed(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw InvalidArgument("feed capacity must be positive");
}

void Feed::push(Message m) {
    slots_.push_front(std::move(m));
    if (slots_.size() > capacity_) slots_.pop_back();
}

std::size_t Feed::content_count() const noexcept {
    std::size_t count = 0;
    for (const auto& m : slots_) count += m.cls.is_personal() ? 0 : 1;
    return count;
}

std::vector<double> opinion(std::span<const double> alpha) {
    const double rho = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    std::vector<double> mu(alpha.size());
    for (std::size_t c = 0; c < alpha.size(); ++c) mu[c] = alpha[c] / rho;
    return mu;
}

std::vector<double> belief_update(std::span<const double> alpha, double beta, double zeta,
                                  std::span<const int> counts) {
    std::vector<double> next(alpha.size());
    for (std::size_t c = 0; c < alpha.size(); ++c) {
        next[c] = beta * alpha[c] + zeta * static_cast<double>(counts[c]);
    }
    return next;
}

void belief_update(NodeState& s, std::span<const int> counts) {
    s.alpha = belief_update(s.alpha, s.beta, s.zeta, counts);
}

double myopic_reward(std::span<const double> alpha, double beta, double zeta, MessageClass cls) {
    if (zeta <= 0.0) return 0.0;
    const double rho = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    const double a = alpha[cls.index()];
    const double mu = a / rho;
    return mu * (1.0 - mu) / (mu + a * beta / zeta);
}

Selection select_message(const NodeState& s, double p_sp, Rng& rng) {
    if (rng.bernoulli(p_sp)) return {Selection::Kind::Personal, 0, false};
    const std::size_t n_content = s.feed.content_count();
    if (n_content == 0) return {};
    std::size_t pick = rng.index(n_content);
    std::size_t slot = 0;
    for (; slot < s.feed.size(); ++slot) {
        if (s.feed[slot].cls.is_personal()) continue;
        if (pick-- == 0) break;
    }
    const MessageClass cls = s.feed[slot].cls;
    const double rho = std::accumulate(s.alpha.begin(), s.alpha.end(), 0.0);
    const bool forward = rng.bernoulli(s.alpha[cls.index()] / rho);
    return {Selection::Kind::Content, slot, forward};
}

bool deliver(NodeState& s, const Message& msg, std::span<int> counts) {
    s.feed.push(msg);
    if (msg.cls.is_personal()) return false;
    if (!s.seen.insert(msg.id).second) return false;
    ++counts[msg.cls.index()];
    return true;
}

}  // namespace opmax
