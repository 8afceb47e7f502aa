#include "opmax/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "opmax/config.hpp"
#include "opmax/error.hpp"

namespace opmax {

void RoleAssignment::validate(std::size_t node_count) const {
    if (smart_source >= node_count) throw InvalidArgument("smart source out of range");
    if (random_sources.empty()) throw InvalidArgument("at least one random source is required");
    for (std::size_t i = 0; i < random_sources.size(); ++i) {
        const NodeId r = random_sources[i];
        if (r >= node_count) throw InvalidArgument("random source out of range");
        if (r == smart_source) throw InvalidArgument("smart source cannot also be a random source");
        for (std::size_t j = 0; j < i; ++j) {
            if (random_sources[j] == r) throw InvalidArgument("duplicate random source");
        }
    }
}

void SimConfig::validate() const {
    if (horizon < 0) throw InvalidArgument("horizon must be >= 0");
    if (p_sp < 0.0 || p_sp > 1.0) throw InvalidArgument("p_sp must be in [0,1]");
    if (feed_capacity < 1) throw InvalidArgument("feed_capacity must be >= 1");
    if (source_rate < 1) throw InvalidArgument("source_rate must be >= 1");
    if (classes < 2) throw InvalidArgument("need at least two content classes");
    if (smart_class < 0 || static_cast<std::size_t>(smart_class) >= classes) {
        throw InvalidArgument("smart_class out of range");
    }
    if (!(prior_alpha > 0.0)) throw InvalidArgument("prior_alpha must be positive");
    if (!(beta_range.first > 0.0) || beta_range.second > 1.0 || beta_range.first > beta_range.second) {
        throw InvalidArgument("beta_range must lie in (0,1]");
    }
    if (zeta_range.first < 0.0 || zeta_range.first > zeta_range.second) {
        throw InvalidArgument("zeta_range must lie in [0,inf)");
    }
    if (replications < 1) throw InvalidArgument("replications must be >= 1");
    if (placement.smart_quantile < 0.0 || placement.smart_quantile > 1.0) {
        throw InvalidArgument("placement.smart_quantile must be in [0,1]");
    }
    if (placement.random_count < 1) throw InvalidArgument("placement.random_count must be >= 1");
    if (graph.kind == GraphSpec::Kind::File && graph.path.empty()) throw InvalidArgument("graph.path is empty");
    for (int t : snapshot_at) {
        if (t < 0 || t > horizon) throw InvalidArgument("snapshot time outside [0, horizon]");
    }
    strategy.validate();
}

Graph build_graph(const GraphSpec& spec) {
    if (spec.kind == GraphSpec::Kind::PreferentialAttachment) return generate_pa(spec.n, spec.m, spec.seed);
    return load_edge_list_file(spec.path).graph;
}

namespace {

// Node ids sorted by descending score, ties to the lower id.
std::vector<NodeId> rank_descending(std::span<const double> score) {
    std::vector<NodeId> order(score.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return score[a] > score[b]; });
    return order;
}

bool contains(std::span<const NodeId> xs, NodeId v) { return std::find(xs.begin(), xs.end(), v) != xs.end(); }

}  // namespace

RoleAssignment resolve_roles(const Graph& g, const SimConfig& cfg) {
    if (cfg.roles) {
        cfg.roles->validate(g.node_count());
        return *cfg.roles;
    }
    const std::size_t n = g.node_count();
    const std::size_t r = cfg.placement.random_count;
    if (n < r + 1) throw InvalidArgument("graph too small for the requested sources");
    const auto score = centrality(g, cfg.placement.centrality);
    const auto order = rank_descending(score);

    RoleAssignment roles;
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < r; ++j) {
        std::size_t rank = r == 1 ? 0 : j * half / (r - 1);
        while (contains(roles.random_sources, order[rank])) ++rank;
        roles.random_sources.push_back(order[rank]);
    }
    // Rank counted from the bottom of the ordering.
    auto from_bottom = static_cast<std::size_t>(std::floor(cfg.placement.smart_quantile * static_cast<double>(n - 1)));
    std::size_t rank = n - 1 - from_bottom;
    while (contains(roles.random_sources, order[rank])) rank = rank == 0 ? n - 1 : rank - 1;
    roles.smart_source = order[rank];
    roles.validate(n);
    return roles;
}

Simulation::Simulation(SimConfig cfg) : Simulation(cfg, Graph{}) {}

Simulation::Simulation(SimConfig cfg, Graph graph) : cfg_(std::move(cfg)), graph_(std::move(graph)) {
    cfg_.validate();
    if (graph_.node_count() == 0) graph_ = build_graph(cfg_.graph);
    if (!graph_.is_connected()) throw DisconnectedGraph("simulation graph is disconnected");
    roles_ = resolve_roles(graph_, cfg_);
    hash_ = opmax::config_hash(cfg_);
}

namespace {

struct Outgoing {
    NodeId target = 0;
    Message msg;
    bool routed_by_strategy = false;
};

BeliefMatrix snapshot(std::span<const NodeState> states, std::size_t classes) {
    BeliefMatrix m(states.size(), classes);
    for (NodeId v = 0; v < states.size(); ++v) {
        std::copy(states[v].alpha.begin(), states[v].alpha.end(), m.row(v).begin());
    }
    return m;
}

std::vector<double> class_totals(std::span<const NodeState> states, std::size_t classes) {
    std::vector<double> totals(classes, 0.0);
    for (const auto& s : states) {
        const double rho = std::accumulate(s.alpha.begin(), s.alpha.end(), 0.0);
        for (std::size_t c = 0; c < classes; ++c) totals[c] += s.alpha[c] / rho;
    }
    return totals;
}

}  // namespace

Trace Simulation::run(std::size_t replication) const {
    const Graph& g = graph_;
    const std::size_t n = g.node_count();
    const std::size_t k = cfg_.classes;
    const MessageClass smart{cfg_.smart_class};

    Trace trace;
    trace.seed = Rng::stream_seed(cfg_.seed, replication);
    trace.replication = replication;
    trace.config_hash = hash_;
    trace.roles = roles_;
    Rng rng(trace.seed);

    Environment env;
    env.graph = &g;
    env.p_sp = cfg_.p_sp;
    env.smart_class = smart;
    env.classes = k;
    env.sources.push_back({roles_.smart_source, smart, cfg_.source_rate, SourceKind::Smart});
    for (std::size_t j = 0; j < roles_.random_sources.size(); ++j) {
        // Random sources cycle through the non-smart classes.
        int cls = static_cast<int>(j % (k - 1));
        if (cls >= cfg_.smart_class) ++cls;
        env.sources.push_back({roles_.random_sources[j], MessageClass{cls}, cfg_.source_rate, SourceKind::Random});
    }
    std::sort(env.sources.begin(), env.sources.end(),
              [](const SourceSpec& a, const SourceSpec& b) { return a.node < b.node; });

    std::uint64_t next_id = 0;
    std::vector<NodeState> states(n);
    env.beta.resize(n);
    env.zeta.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        NodeState& s = states[v];
        s.alpha.assign(k, cfg_.prior_alpha);
        s.beta = rng.uniform(cfg_.beta_range.first, cfg_.beta_range.second);
        s.zeta = rng.uniform(cfg_.zeta_range.first, cfg_.zeta_range.second);
        env.beta[v] = s.beta;
        env.zeta[v] = s.zeta;
        s.feed = Feed(cfg_.feed_capacity);
        for (std::size_t i = 0; i < cfg_.feed_capacity; ++i) {
            s.feed.push({next_id++, MessageClass::personal(), v, std::nullopt});
        }
    }

    auto spreader = make_spreader(cfg_.algorithm, cfg_.strategy);
    auto wants_snapshot = [&](int t) {
        return std::find(cfg_.snapshot_at.begin(), cfg_.snapshot_at.end(), t) != cfg_.snapshot_at.end();
    };

    trace.totals.push_back(class_totals(states, k));
    if (wants_snapshot(0)) trace.snapshots[0] = snapshot(states, k);

    std::vector<Outgoing> outbox;
    std::vector<NodeId> senders;
    std::vector<std::size_t> sender_slots;
    std::vector<MessageClass> omega(n);
    std::vector<int> counts(n * k);

    for (int t = 0; t < cfg_.horizon; ++t) {
        const BeliefMatrix observed = snapshot(states, k);
        spreader->observe(env, observed, t);
        outbox.clear();
        senders.clear();
        sender_slots.clear();
        std::fill(omega.begin(), omega.end(), MessageClass::personal());

        for (const SourceSpec& src : env.sources) {
            for (int i = 0; i < src.rate; ++i) {
                Message msg{next_id++, src.cls, src.node, std::nullopt};
                if (src.kind == SourceKind::Smart) {
                    msg.recommendation = spreader->route_source(src.node, rng);
                    outbox.push_back({*msg.recommendation, msg, true});
                } else {
                    outbox.push_back({random_recommend(g, src.node, rng), msg, false});
                }
            }
        }

        for (NodeId v = 0; v < n; ++v) {
            if (env.is_source(v)) continue;
            const Selection sel = select_message(states[v], cfg_.p_sp, rng);
            if (sel.kind == Selection::Kind::Personal) {
                Message msg{next_id++, MessageClass::personal(), v, std::nullopt};
                outbox.push_back({random_recommend(g, v, rng), msg, false});
            } else if (sel.kind == Selection::Kind::Content && sel.forward) {
                Message msg = states[v].feed[sel.slot];
                msg.recommendation.reset();
                omega[v] = msg.cls;
                if (msg.cls == smart) {
                    senders.push_back(v);
                    sender_slots.push_back(outbox.size());
                    outbox.push_back({v, msg, true});
                } else {
                    outbox.push_back({random_recommend(g, v, rng), msg, false});
                }
            }
        }

        const auto targets = spreader->route(senders, omega, rng);
        for (std::size_t i = 0; i < senders.size(); ++i) {
            Outgoing& out = outbox[sender_slots[i]];
            out.target = targets[i];
            out.msg.recommendation = targets[i];
        }

        std::fill(counts.begin(), counts.end(), 0);
        for (const Outgoing& out : outbox) {
            std::span<int> row(counts.data() + out.target * k, k);
            if (deliver(states[out.target], out.msg, row)) ++trace.counted_deliveries;
        }
        for (NodeId v = 0; v < n; ++v) {
            belief_update(states[v], std::span<const int>(counts.data() + v * k, k));
        }

        trace.totals.push_back(class_totals(states, k));
        if (wants_snapshot(t + 1)) trace.snapshots[t + 1] = snapshot(states, k);
    }

    trace.final_alpha = snapshot(states, k);
    trace.mean_alpha.assign(k, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        for (std::size_t c = 0; c < k; ++c) trace.mean_alpha[c] += trace.final_alpha(v, c);
    }
    for (double& a : trace.mean_alpha) a /= static_cast<double>(n);
    for (const auto& s : states) trace.seen_entries += s.seen.size();
    return trace;
}

std::vector<Trace> Simulation::run_all(std::size_t threads) const {
    const std::size_t count = cfg_.replications;
    std::vector<Trace> traces(count);
    threads = std::clamp<std::size_t>(threads, 1, count);
    if (threads == 1) {
        for (std::size_t r = 0; r < count; ++r) traces[r] = run(r);
        return traces;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t r = next++; r < count; r = next++) traces[r] = run(r);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return traces;
}

Trace run(const SimConfig& cfg, std::size_t replication) { return Simulation(cfg).run(replication); }

SimplifiedRun run_simplified(const Graph& g, const BeliefMatrix& alpha0, std::span<const double> beta,
                             std::span<const double> zeta, MessageClass smart, NodeId source,
                             std::span<const NodeId> path) {
    const std::size_t n = g.node_count();
    if (alpha0.nodes() != n || beta.size() != n || zeta.size() != n) {
        throw InvalidArgument("run_simplified: parameter sizes do not match the graph");
    }
    SimplifiedRun out;
    out.path.assign(path.begin(), path.end());
    BeliefMatrix alpha = alpha0;

    auto smart_total = [&] {
        double total = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            auto a = alpha.row(v);
            total += a[smart.index()] / std::accumulate(a.begin(), a.end(), 0.0);
        }
        return total;
    };

    out.smart_totals.push_back(smart_total());
    NodeId holder = source;
    for (NodeId next : path) {
        if (next == holder || !g.has_edge(holder, next)) {
            throw InvalidArgument("walk step " + std::to_string(holder) + " -> " + std::to_string(next) +
                                  " is not an edge");
        }
        out.rewards.push_back(myopic_reward(alpha.row(next), beta[next], zeta[next], smart));
        for (NodeId v = 0; v < n; ++v) {
            for (double& a : alpha.row(v)) a *= beta[v];
        }
        alpha(next, smart.index()) += zeta[next];
        out.smart_totals.push_back(smart_total());
        holder = next;
    }
    out.final_alpha = std::move(alpha);
    return out;
}

std::vector<NodeId> random_walk(const Graph& g, NodeId source, int steps, Rng& rng) {
    std::vector<NodeId> path;
    path.reserve(static_cast<std::size_t>(std::max(steps, 0)));
    NodeId at = source;
    for (int i = 0; i < steps; ++i) {
        at = random_recommend(g, at, rng);
        path.push_back(at);
    }
    return path;
}

Summary aggregate(std::span<const Trace> traces) {
    if (traces.empty()) throw InvalidArgument("aggregate: no traces");
    std::vector<const Trace*> sorted;
    for (const auto& t : traces) sorted.push_back(&t);
    std::sort(sorted.begin(), sorted.end(), [](const Trace* a, const Trace* b) {
        return std::tie(a->replication, a->seed) < std::tie(b->replication, b->seed);
    });

    const Trace& first = *sorted.front();
    const std::size_t steps = first.totals.size();
    const std::size_t k = first.totals.front().size();
    for (const Trace* t : sorted) {
        if (t->config_hash != first.config_hash) throw InvalidArgument("aggregate: traces from different configs");
        if (t->totals.size() != steps || t->totals.front().size() != k) {
            throw InvalidArgument("aggregate: trace shapes differ");
        }
    }

    Summary s;
    s.config_hash = first.config_hash;
    s.count = sorted.size();
    s.mean.assign(steps, std::vector<double>(k, 0.0));
    s.stddev.assign(steps, std::vector<double>(k, 0.0));
    const double count = static_cast<double>(s.count);
    for (std::size_t i = 0; i < steps; ++i) {
        for (std::size_t c = 0; c < k; ++c) {
            double sum = 0.0;
            for (const Trace* t : sorted) sum += t->totals[i][c];
            const double mean = sum / count;
            double ss = 0.0;
            for (const Trace* t : sorted) {
                const double d = t->totals[i][c] - mean;
                ss += d * d;
            }
            s.mean[i][c] = mean;
            s.stddev[i][c] = s.count > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
        }
    }
    s.final_mean = s.mean.back();
    s.final_std = s.stddev.back();
    return s;
}

std::vector<NodeId> spread_placements(const Graph& g, CentralityKind kind, std::size_t count,
                                      std::span<const NodeId> exclude) {
    const auto score = centrality(g, kind);
    std::vector<NodeId> order;
    for (NodeId v : rank_descending(score)) {
        if (!contains(exclude, v)) order.push_back(v);
    }
    if (count > order.size()) throw InvalidArgument("more placements requested than eligible nodes");
    std::vector<NodeId> picks;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t rank = count == 1 ? 0 : i * (order.size() - 1) / (count - 1);
        picks.push_back(order[rank]);
    }
    return picks;
}

SweepResult centrality_sweep(const SimConfig& cfg, std::span<const NodeId> placements, std::size_t threads) {
    return centrality_sweep(cfg, build_graph(cfg.graph), placements, threads);
}

SweepResult centrality_sweep(const SimConfig& cfg, const Graph& g, std::span<const NodeId> placements,
                             std::size_t threads) {
    if (!g.is_connected()) throw DisconnectedGraph("sweep graph is disconnected");
    SweepResult result;
    result.base_roles = resolve_roles(g, cfg);
    for (NodeId p : placements) {
        if (p >= g.node_count()) throw InvalidArgument("placement out of range");
        if (contains(result.base_roles.random_sources, p)) {
            throw InvalidArgument("placement " + std::to_string(p) + " is a random source");
        }
    }

    std::map<CentralityKind, std::vector<double>> scores;
    for (auto kind : kSweepKinds) scores[kind] = centrality(g, kind);

    for (NodeId p : placements) {
        SimConfig run_cfg = cfg;
        run_cfg.roles = RoleAssignment{p, result.base_roles.random_sources};
        Simulation sim(run_cfg, g);
        SweepPoint point;
        point.node = p;
        for (auto kind : kSweepKinds) point.centrality[kind] = scores[kind][p];
        for (const Trace& t : sim.run_all(threads)) {
            point.final_smart_totals.push_back(t.final_total(static_cast<std::size_t>(cfg.smart_class)));
        }
        point.mean_final_smart_total =
            std::accumulate(point.final_smart_totals.begin(), point.final_smart_totals.end(), 0.0) /
            static_cast<double>(point.final_smart_totals.size());
        result.points.push_back(std::move(point));
    }

    std::vector<double> outcome;
    for (const auto& pt : result.points) outcome.push_back(pt.mean_final_smart_total);
    for (auto kind : kSweepKinds) {
        std::vector<double> xs;
        for (const auto& pt : result.points) xs.push_back(pt.centrality.at(kind));
        result.pcc[kind] = pearson(xs, outcome);
    }
    return result;
}

}  // namespace opmax
