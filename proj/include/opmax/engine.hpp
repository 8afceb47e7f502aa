#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opmax/beliefs.hpp"
#include "opmax/centrality.hpp"
#include "opmax/dynamics.hpp"
#include "opmax/graph.hpp"
#include "opmax/strategies.hpp"

namespace opmax {

struct GraphSpec {
    enum class Kind { PreferentialAttachment, File };
    Kind kind = Kind::PreferentialAttachment;
    std::size_t n = 1000;
    std::size_t m = 3;
    std::uint64_t seed = 1;
    std::string path;
};

struct RoleAssignment {
    NodeId smart_source = 0;
    std::vector<NodeId> random_sources;

    void validate(std::size_t node_count) const;
};

// Automatic source placement when roles are not given explicitly. Nodes are
// ranked by `centrality`; random sources take the top-ranked node (hub) and
// evenly spaced ranks down to the median; the smart source sits at the given
// quantile counted from the least central node.
struct PlacementRule {
    CentralityKind centrality = CentralityKind::CurrentFlowCloseness;
    double smart_quantile = 0.25;
    std::size_t random_count = 2;
};

struct SimConfig {
    GraphSpec graph;
    std::optional<RoleAssignment> roles;
    PlacementRule placement;
    int horizon = 100;
    double p_sp = 0.1;
    std::size_t feed_capacity = 20;
    int source_rate = 2;
    std::size_t classes = 3;
    int smart_class = 0;
    double prior_alpha = 1.0;
    std::pair<double, double> beta_range{0.9, 1.0};
    std::pair<double, double> zeta_range{0.0, 2.0};
    Algorithm algorithm = Algorithm::Admo;
    StrategyConfig strategy;
    std::uint64_t seed = 1;
    std::size_t replications = 1;
    std::vector<int> snapshot_at;

    void validate() const;
};

struct Trace {
    // totals[t][c] = sum over nodes of the opinion of class c, t = 0..T.
    std::vector<std::vector<double>> totals;
    BeliefMatrix final_alpha;
    std::vector<double> mean_alpha;  // per class, averaged over nodes at T
    std::map<int, BeliefMatrix> snapshots;
    RoleAssignment roles;
    std::uint64_t seed = 0;
    std::size_t replication = 0;
    std::string config_hash;
    // Content deliveries that moved a belief, and the total size of all seen
    // sets at the end. Equal when no id was counted twice.
    std::uint64_t counted_deliveries = 0;
    std::uint64_t seen_entries = 0;

    double final_total(std::size_t cls) const { return totals.back()[cls]; }
};

Graph build_graph(const GraphSpec& spec);
RoleAssignment resolve_roles(const Graph& g, const SimConfig& cfg);

// A configured experiment: graph built and roles resolved once, replications
// run on demand.
class Simulation {
public:
    explicit Simulation(SimConfig cfg);
    Simulation(SimConfig cfg, Graph graph);

    const SimConfig& config() const noexcept { return cfg_; }
    const Graph& graph() const noexcept { return graph_; }
    const RoleAssignment& roles() const noexcept { return roles_; }
    const std::string& config_hash() const noexcept { return hash_; }

    // Pure function of (config, replication index).
    Trace run(std::size_t replication) const;

    // Replications 0..count-1 on up to `threads` workers; output is in index
    // order and independent of the thread count.
    std::vector<Trace> run_all(std::size_t threads = 1) const;

private:
    SimConfig cfg_;
    Graph graph_;
    RoleAssignment roles_;
    std::string hash_;
};

Trace run(const SimConfig& cfg, std::size_t replication);

// Single-message forward-and-forget walk. The message starts at `source` and
// visits path[0], path[1], ... one hop per step. Every node decays its beliefs
// each step; the visited node also receives one smart-class observation.
struct SimplifiedRun {
    std::vector<NodeId> path;
    std::vector<double> smart_totals;  // sum_v mu_v[smart], t = 0..T
    std::vector<double> rewards;       // reward of the node visited at step t
    BeliefMatrix final_alpha;
};

SimplifiedRun run_simplified(const Graph& g, const BeliefMatrix& alpha0, std::span<const double> beta,
                             std::span<const double> zeta, MessageClass smart, NodeId source,
                             std::span<const NodeId> path);

// Uniform random walk of `steps` hops from `source`.
std::vector<NodeId> random_walk(const Graph& g, NodeId source, int steps, Rng& rng);

struct Summary {
    std::string config_hash;
    std::size_t count = 0;
    std::vector<std::vector<double>> mean;    // [t][class]
    std::vector<std::vector<double>> stddev;  // [t][class], sample deviation
    std::vector<double> final_mean;
    std::vector<double> final_std;
};

// Traces must share a config hash. Summation runs in replication order, so any
// permutation of the input yields the same bits.
Summary aggregate(std::span<const Trace> traces);

struct SweepPoint {
    NodeId node = 0;
    std::map<CentralityKind, double> centrality;
    std::vector<double> final_smart_totals;  // one per replication
    double mean_final_smart_total = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::map<CentralityKind, double> pcc;
    RoleAssignment base_roles;
};

inline constexpr CentralityKind kSweepKinds[] = {CentralityKind::CurrentFlowCloseness,
                                                 CentralityKind::Betweenness, CentralityKind::Closeness,
                                                 CentralityKind::Degree};

// Moves the smart source over `placements`, keeping the random sources fixed,
// and correlates each centrality with the mean final smart-class total.
SweepResult centrality_sweep(const SimConfig& cfg, std::span<const NodeId> placements, std::size_t threads = 1);
SweepResult centrality_sweep(const SimConfig& cfg, const Graph& g, std::span<const NodeId> placements,
                             std::size_t threads = 1);

// `count` nodes (excluding `exclude`) spread evenly over the ranking by `kind`.
std::vector<NodeId> spread_placements(const Graph& g, CentralityKind kind, std::size_t count,
                                      std::span<const NodeId> exclude);

}  // namespace opmax
