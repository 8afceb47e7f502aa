#include "opmax/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "opmax/error.hpp"

namespace opmax {

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Random: return "random";
        case Algorithm::Damo: return "damo";
        case Algorithm::Admo: return "admo";
        case Algorithm::Camo: return "camo";
        case Algorithm::Acmo: return "acmo";
    }
    return "unknown";
}

Algorithm algorithm_from_string(std::string_view name) {
    for (auto a : {Algorithm::Random, Algorithm::Damo, Algorithm::Admo, Algorithm::Camo, Algorithm::Acmo}) {
        if (name == to_string(a)) return a;
    }
    throw InvalidArgument("unknown algorithm: " + std::string(name));
}

void StrategyConfig::validate() const {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw InvalidArgument("temperature must be positive");
    }
    if (gamma_prime < 0.0 || gamma_prime > 1.0) throw InvalidArgument("gamma_prime must be in [0,1]");
    if (gamma_double_prime < 0.0 || gamma_double_prime > 1.0) {
        throw InvalidArgument("gamma_double_prime must be in [0,1]");
    }
    if (n_q < 0) throw InvalidArgument("n_q must be >= 0");
    if (window < 1) throw InvalidArgument("window must be >= 1");
    if (n_samples < 1) throw InvalidArgument("n_samples must be >= 1");
    if (sweep_rule == SweepRule::Fixed && fixed_sweeps < 0) {
        throw InvalidArgument("fixed_sweeps must be >= 0");
    }
}

bool Environment::is_random_source(NodeId v) const noexcept {
    const auto* s = source_at(v);
    return s != nullptr && s->kind == SourceKind::Random;
}

bool Environment::is_source(NodeId v) const noexcept { return source_at(v) != nullptr; }

const SourceSpec* Environment::source_at(NodeId v) const noexcept {
    for (const auto& s : sources) {
        if (s.node == v) return &s;
    }
    return nullptr;
}

std::vector<double> boltzmann(std::span<const double> h, double temperature) {
    std::vector<double> p(h.size());
    if (h.empty()) return p;
    const double top = *std::max_element(h.begin(), h.end());
    double total = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        p[i] = std::exp((h[i] - top) / temperature);
        total += p[i];
    }
    for (double& x : p) x /= total;
    return p;
}

double discount(int t, const StrategyConfig& cfg) {
    return cfg.gamma_prime * std::pow(cfg.gamma_double_prime, static_cast<double>(t));
}

NodeId random_recommend(const Graph& g, NodeId v, Rng& rng) {
    auto nb = g.neighbors(v);
    if (nb.empty()) throw InvalidArgument("node " + std::to_string(v) + " has no neighbors");
    return nb[rng.index(nb.size())];
}

std::vector<double> node_rewards(const Environment& env, const BeliefMatrix& beliefs) {
    std::vector<double> r(beliefs.nodes());
    for (NodeId w = 0; w < beliefs.nodes(); ++w) {
        r[w] = myopic_reward(beliefs.row(w), env.beta[w], env.zeta[w], env.smart_class);
    }
    return r;
}

std::vector<double> damo_row(const Graph& g, NodeId v, std::span<const double> rewards, double temperature) {
    auto nb = g.neighbors(v);
    std::vector<double> h(nb.size());
    for (std::size_t i = 0; i < nb.size(); ++i) h[i] = rewards[nb[i]];
    return boltzmann(h, temperature);
}

namespace {

NodeId sample_neighbor(const Graph& g, NodeId v, std::span<const double> row, Rng& rng) {
    auto nb = g.neighbors(v);
    if (nb.empty()) throw InvalidArgument("node " + std::to_string(v) + " has no neighbors");
    return nb[rng.categorical(row)];
}

void fill_uniform(std::span<double> row) {
    std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
}

void fill_boltzmann(std::span<double> row, std::span<const double> h, double temperature) {
    auto p = boltzmann(h, temperature);
    std::copy(p.begin(), p.end(), row.begin());
}

}  // namespace

NodeId damo_recommend(const Graph& g, NodeId v, std::span<const double> rewards, const StrategyConfig& cfg,
                      Rng& rng) {
    return sample_neighbor(g, v, damo_row(g, v, rewards, cfg.temperature), rng);
}

QTable admo_q_sweep(const QTable& q, std::span<const double> rewards, const Environment& env, double gamma) {
    const Graph& g = env.g();
    const std::size_t n = g.node_count();
    // Top two entries of every row so the sender can be excluded in O(1).
    std::vector<double> best(n, 0.0);
    std::vector<double> second(n, 0.0);
    std::vector<NodeId> argbest(n, std::numeric_limits<NodeId>::max());
    for (NodeId x = 0; x < n; ++x) {
        auto nb = g.neighbors(x);
        auto row = q.row(x);
        bool have_best = false;
        for (std::size_t i = 0; i < nb.size(); ++i) {
            if (!have_best || row[i] > best[x]) {
                if (have_best) second[x] = best[x];
                best[x] = row[i];
                argbest[x] = nb[i];
                have_best = true;
            } else if (row[i] > second[x]) {
                second[x] = row[i];
            }
        }
    }

    QTable next = q;
    for (NodeId u = 0; u < n; ++u) {
        if (env.is_random_source(u)) continue;
        auto nb = g.neighbors(u);
        auto row = next.row(u);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            const NodeId x = nb[i];
            const double future = argbest[x] == u ? second[x] : best[x];
            row[i] = rewards[x] + gamma * future;
        }
    }
    return next;
}

QTable build_q_table(const Environment& env, std::span<const double> rewards, int sweeps, double gamma) {
    QTable q(env.g(), 0.0);
    for (int k = 0; k < sweeps; ++k) q = admo_q_sweep(q, rewards, env, gamma);
    return q;
}

NodeId admo_recommend(const QTable& q, NodeId v, const StrategyConfig& cfg, Rng& rng) {
    return sample_neighbor(q.graph(), v, boltzmann(q.row(v), cfg.temperature), rng);
}

std::vector<MessageClass> map_omega(const BeliefMatrix& alpha_hat) {
    std::vector<MessageClass> omega(alpha_hat.nodes());
    for (NodeId v = 0; v < alpha_hat.nodes(); ++v) {
        auto row = alpha_hat.row(v);
        auto it = std::max_element(row.begin(), row.end());
        omega[v] = MessageClass(static_cast<int>(it - row.begin()));
    }
    return omega;
}

namespace {

// Shared shape of the CAMO and ACMO rows: `scores` is consulted only for
// nodes pushing the smart class.
template <class ScoreRow>
StrategyRows smart_or_uniform_rows(const Environment& env, std::span<const MessageClass> omega,
                                   double temperature, ScoreRow&& scores) {
    const Graph& g = env.g();
    StrategyRows rows(g, 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.degree(v) == 0) continue;
        const auto* src = env.source_at(v);
        const bool smart = src != nullptr ? src->kind == SourceKind::Smart : omega[v] == env.smart_class;
        if (smart) {
            fill_boltzmann(rows.row(v), scores(v), temperature);
        } else {
            fill_uniform(rows.row(v));
        }
    }
    return rows;
}

}  // namespace

StrategyRows camo_mixed_strategy(const Environment& env, const BeliefMatrix& alpha_hat,
                                 std::span<const MessageClass> omega, const StrategyConfig& cfg) {
    const auto rewards = node_rewards(env, alpha_hat);
    std::vector<double> h;
    return smart_or_uniform_rows(env, omega, cfg.temperature, [&](NodeId v) {
        auto nb = env.g().neighbors(v);
        h.resize(nb.size());
        for (std::size_t i = 0; i < nb.size(); ++i) h[i] = rewards[nb[i]];
        return std::span<const double>(h);
    });
}

StrategyRows acmo_mixed_strategy(const Environment& env, const BeliefMatrix& alpha_hat,
                                 std::span<const MessageClass> omega, const StrategyConfig& cfg, int sweeps,
                                 double gamma) {
    const auto rewards = node_rewards(env, alpha_hat);
    const QTable q = build_q_table(env, rewards, sweeps, gamma);
    return smart_or_uniform_rows(env, omega, cfg.temperature, [&](NodeId v) { return q.row(v); });
}

int acmo_sweeps(const StrategyConfig& cfg, int tau) {
    switch (cfg.sweep_rule) {
        case SweepRule::Max: return std::max(cfg.window - tau, cfg.n_q);
        case SweepRule::Min: return std::min(cfg.window - tau, cfg.n_q);
        case SweepRule::Fixed: return cfg.fixed_sweeps;
    }
    return cfg.n_q;
}

BeliefMatrix expected_delta(const Environment& env, const BeliefMatrix& alpha_hat,
                            std::span<const MessageClass> omega, const StrategyRows& pi) {
    const Graph& g = env.g();
    BeliefMatrix delta(alpha_hat.nodes(), alpha_hat.classes(), 0.0);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        MessageClass cls;
        double weight = 0.0;
        if (const auto* src = env.source_at(u)) {
            cls = src->cls;
            weight = static_cast<double>(src->rate);
        } else {
            cls = omega[u];
            if (cls.is_personal()) continue;
            auto a = alpha_hat.row(u);
            const double rho = std::accumulate(a.begin(), a.end(), 0.0);
            weight = a[cls.index()] / rho * (1.0 - env.p_sp);
        }
        auto nb = g.neighbors(u);
        auto row = pi.row(u);
        for (std::size_t i = 0; i < nb.size(); ++i) {
            if (row[i] == 0.0) continue;
            const NodeId v = nb[i];
            delta(v, cls.index()) += env.zeta[v] * weight * row[i];
        }
    }
    return delta;
}

namespace {

void step_expectation(const Environment& env, BeliefMatrix& alpha, std::span<const MessageClass> omega,
                      const StrategyRows& pi) {
    const BeliefMatrix delta = expected_delta(env, alpha, omega, pi);
    for (NodeId v = 0; v < alpha.nodes(); ++v) {
        auto a = alpha.row(v);
        auto d = delta.row(v);
        for (std::size_t c = 0; c < a.size(); ++c) a[c] = env.beta[v] * a[c] + d[c];
    }
}

StrategyRows with_point_masses(const Environment& env, StrategyRows rows, std::span<const MessageClass> omega0,
                               std::span<const std::optional<NodeId>> actions) {
    const Graph& g = env.g();
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (env.is_source(v) || omega0[v] != env.smart_class) continue;
        if (!actions[v]) throw InvalidArgument("missing action for node " + std::to_string(v));
        const std::size_t idx = g.neighbor_index(v, *actions[v]);
        if (idx >= g.degree(v)) {
            throw InvalidArgument("action target " + std::to_string(*actions[v]) + " is not a neighbor of " +
                                  std::to_string(v));
        }
        auto row = rows.row(v);
        std::fill(row.begin(), row.end(), 0.0);
        row[idx] = 1.0;
    }
    return rows;
}

}  // namespace

BeliefMatrix diffuse(const Environment& env, const BeliefMatrix& alpha0, std::span<const MessageClass> omega0,
                     std::span<const std::optional<NodeId>> actions, int window, const StrategyRows& rows0,
                     const RowBuilder& build) {
    if (window < 1) throw InvalidArgument("diffusion window must be >= 1");
    BeliefMatrix alpha = alpha0;
    step_expectation(env, alpha, omega0, with_point_masses(env, rows0, omega0, actions));
    for (int tau = 1; tau < window; ++tau) {
        const auto omega = map_omega(alpha);
        const StrategyRows pi = build(alpha, omega, tau);
        step_expectation(env, alpha, omega, pi);
    }
    return alpha;
}

BeliefMatrix diffuse(const Environment& env, const BeliefMatrix& alpha0, std::span<const MessageClass> omega0,
                     std::span<const std::optional<NodeId>> actions, int window, const StrategyConfig& cfg) {
    const StrategyRows rows0 = camo_mixed_strategy(env, alpha0, omega0, cfg);
    return diffuse(env, alpha0, omega0, actions, window, rows0,
                   [&](const BeliefMatrix& a, std::span<const MessageClass> omega, int) {
                       return camo_mixed_strategy(env, a, omega, cfg);
                   });
}

double diffusion_score(const Environment& env, const BeliefMatrix& alpha_hat) {
    double total = 0.0;
    for (NodeId v = 0; v < alpha_hat.nodes(); ++v) {
        auto a = alpha_hat.row(v);
        total += a[env.smart_class.index()] / std::accumulate(a.begin(), a.end(), 0.0);
    }
    return total;
}

namespace {

JointAction select_by_sampling(const Environment& env, const BeliefMatrix& alpha_t,
                               std::span<const MessageClass> omega0, std::span<const NodeId> senders,
                               const StrategyConfig& cfg, const StrategyRows& rows0, const RowBuilder& build,
                               Rng& rng) {
    JointAction best;
    best.senders.assign(senders.begin(), senders.end());
    if (senders.empty()) return best;

    std::vector<MessageClass> omega(omega0.begin(), omega0.end());
    for (NodeId s : senders) omega[s] = env.smart_class;

    std::vector<std::optional<NodeId>> actions(alpha_t.nodes());
    std::vector<NodeId> targets(senders.size());
    best.score = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < cfg.n_samples; ++k) {
        for (std::size_t i = 0; i < senders.size(); ++i) {
            targets[i] = sample_neighbor(env.g(), senders[i], rows0.row(senders[i]), rng);
            actions[senders[i]] = targets[i];
        }
        const BeliefMatrix alpha_n = diffuse(env, alpha_t, omega, actions, cfg.window, rows0, build);
        const double score = diffusion_score(env, alpha_n);
        best.sample_scores.push_back(score);
        if (score > best.score) {
            best.score = score;
            best.targets = targets;
        }
    }
    return best;
}

}  // namespace

JointAction camo_select(const Environment& env, const BeliefMatrix& alpha_t, std::span<const MessageClass> omega0,
                        std::span<const NodeId> senders, const StrategyConfig& cfg, Rng& rng) {
    if (senders.empty()) return {};
    std::vector<MessageClass> omega(omega0.begin(), omega0.end());
    for (NodeId s : senders) omega[s] = env.smart_class;
    const StrategyRows rows0 = camo_mixed_strategy(env, alpha_t, omega, cfg);
    return select_by_sampling(env, alpha_t, omega, senders, cfg, rows0,
                              [&](const BeliefMatrix& a, std::span<const MessageClass> om, int) {
                                  return camo_mixed_strategy(env, a, om, cfg);
                              },
                              rng);
}

JointAction acmo_select(const Environment& env, const BeliefMatrix& alpha_t, std::span<const MessageClass> omega0,
                        std::span<const NodeId> senders, const StrategyConfig& cfg, int t, Rng& rng) {
    if (senders.empty()) return {};
    const double gamma = discount(t, cfg);
    std::vector<MessageClass> omega(omega0.begin(), omega0.end());
    for (NodeId s : senders) omega[s] = env.smart_class;
    const StrategyRows rows0 = acmo_mixed_strategy(env, alpha_t, omega, cfg, acmo_sweeps(cfg, 0), gamma);
    return select_by_sampling(env, alpha_t, omega, senders, cfg, rows0,
                              [&](const BeliefMatrix& a, std::span<const MessageClass> om, int tau) {
                                  return acmo_mixed_strategy(env, a, om, cfg, acmo_sweeps(cfg, tau), gamma);
                              },
                              rng);
}

namespace {

class RandomSpreader final : public Spreader {
public:
    void observe(const Environment& env, const BeliefMatrix&, int) override { env_ = &env; }

    NodeId route_source(NodeId source, Rng& rng) override { return random_recommend(env_->g(), source, rng); }

    std::vector<NodeId> route(std::span<const NodeId> senders, std::span<const MessageClass>, Rng& rng) override {
        std::vector<NodeId> out;
        out.reserve(senders.size());
        for (NodeId s : senders) out.push_back(random_recommend(env_->g(), s, rng));
        return out;
    }

private:
    const Environment* env_ = nullptr;
};

class DamoSpreader final : public Spreader {
public:
    explicit DamoSpreader(StrategyConfig cfg) : cfg_(cfg) {}

    void observe(const Environment& env, const BeliefMatrix& beliefs, int) override {
        env_ = &env;
        rewards_ = node_rewards(env, beliefs);
    }

    NodeId route_source(NodeId source, Rng& rng) override {
        return damo_recommend(env_->g(), source, rewards_, cfg_, rng);
    }

    std::vector<NodeId> route(std::span<const NodeId> senders, std::span<const MessageClass>, Rng& rng) override {
        std::vector<NodeId> out;
        out.reserve(senders.size());
        for (NodeId s : senders) out.push_back(damo_recommend(env_->g(), s, rewards_, cfg_, rng));
        return out;
    }

private:
    StrategyConfig cfg_;
    const Environment* env_ = nullptr;
    std::vector<double> rewards_;
};

class AdmoSpreader final : public Spreader {
public:
    explicit AdmoSpreader(StrategyConfig cfg) : cfg_(cfg) {}

    void observe(const Environment& env, const BeliefMatrix& beliefs, int t) override {
        q_ = build_q_table(env, node_rewards(env, beliefs), cfg_.n_q, discount(t, cfg_));
    }

    NodeId route_source(NodeId source, Rng& rng) override { return admo_recommend(q_, source, cfg_, rng); }

    std::vector<NodeId> route(std::span<const NodeId> senders, std::span<const MessageClass>, Rng& rng) override {
        std::vector<NodeId> out;
        out.reserve(senders.size());
        for (NodeId s : senders) out.push_back(admo_recommend(q_, s, cfg_, rng));
        return out;
    }

private:
    StrategyConfig cfg_;
    QTable q_;
};

// CAMO and ACMO: the smart source samples its own row independently per
// message; regular senders get the best sampled joint action.
class CentralizedSpreader final : public Spreader {
public:
    CentralizedSpreader(StrategyConfig cfg, bool augmented) : cfg_(cfg), augmented_(augmented) {}

    void observe(const Environment& env, const BeliefMatrix& beliefs, int t) override {
        env_ = &env;
        beliefs_ = &beliefs;
        t_ = t;
        source_rows_.reset();
    }

    NodeId route_source(NodeId source, Rng& rng) override {
        if (!source_rows_) {
            std::vector<MessageClass> omega(beliefs_->nodes(), MessageClass::personal());
            source_rows_ = augmented_ ? acmo_mixed_strategy(*env_, *beliefs_, omega, cfg_, acmo_sweeps(cfg_, 0),
                                                            discount(t_, cfg_))
                                      : camo_mixed_strategy(*env_, *beliefs_, omega, cfg_);
        }
        return sample_neighbor(env_->g(), source, source_rows_->row(source), rng);
    }

    std::vector<NodeId> route(std::span<const NodeId> senders, std::span<const MessageClass> omega,
                              Rng& rng) override {
        JointAction a = augmented_ ? acmo_select(*env_, *beliefs_, omega, senders, cfg_, t_, rng)
                                   : camo_select(*env_, *beliefs_, omega, senders, cfg_, rng);
        return a.targets;
    }

private:
    StrategyConfig cfg_;
    bool augmented_;
    const Environment* env_ = nullptr;
    const BeliefMatrix* beliefs_ = nullptr;
    int t_ = 0;
    std::optional<StrategyRows> source_rows_;
};

}  // namespace

std::unique_ptr<Spreader> make_spreader(Algorithm algorithm, const StrategyConfig& cfg) {
    cfg.validate();
    switch (algorithm) {
        case Algorithm::Random: return std::make_unique<RandomSpreader>();
        case Algorithm::Damo: return std::make_unique<DamoSpreader>(cfg);
        case Algorithm::Admo: return std::make_unique<AdmoSpreader>(cfg);
        case Algorithm::Camo: return std::make_unique<CentralizedSpreader>(cfg, false);
        case Algorithm::Acmo: return std::make_unique<CentralizedSpreader>(cfg, true);
    }
    throw InvalidArgument("unknown algorithm");
}

}  // namespace opmax
