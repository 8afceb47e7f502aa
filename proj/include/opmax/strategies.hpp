#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "opmax/beliefs.hpp"
#include "opmax/dynamics.hpp"
#include "opmax/graph.hpp"
#include "opmax/rng.hpp"

namespace opmax {

enum class Algorithm { Random, Damo, Admo, Camo, Acmo };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);

// How many Q sweeps ACMO runs at offline step tau.
enum class SweepRule { Max, Min, Fixed };

struct StrategyConfig {
    double temperature = 0.015;
    double gamma_prime = 0.95;
    double gamma_double_prime = 0.97;
    int n_q = 4;        // Q sweeps per online step
    int window = 4;     // look-ahead N
    int n_samples = 20; // sampled joint actions N_S
    SweepRule sweep_rule = SweepRule::Max;
    int fixed_sweeps = 1;

    void validate() const;
};

// Everything a strategy may know besides the current beliefs. Fixed for one
// replication.
struct Environment {
    const Graph* graph = nullptr;
    std::vector<double> beta;
    std::vector<double> zeta;
    double p_sp = 0.1;
    MessageClass smart_class{0};
    std::size_t classes = 3;
    std::vector<SourceSpec> sources;

    const Graph& g() const noexcept { return *graph; }
    bool is_random_source(NodeId v) const noexcept;
    bool is_source(NodeId v) const noexcept;
    const SourceSpec* source_at(NodeId v) const noexcept;
};

using QTable = ArcTable;
using StrategyRows = ArcTable;

// exp(h_i/T) / sum_j exp(h_j/T), shifted by max(h).
std::vector<double> boltzmann(std::span<const double> h, double temperature);

// gamma' * gamma''^t
double discount(int t, const StrategyConfig& cfg);

NodeId random_recommend(const Graph& g, NodeId v, Rng& rng);

// reward[w]: myopic gain from one smart-class delivery to w.
std::vector<double> node_rewards(const Environment& env, const BeliefMatrix& beliefs);

std::vector<double> damo_row(const Graph& g, NodeId v, std::span<const double> rewards, double temperature);
NodeId damo_recommend(const Graph& g, NodeId v, std::span<const double> rewards,
                      const StrategyConfig& cfg, Rng& rng);

// One Jacobi sweep:
//   Q'(u, x) = reward[x] + gamma * max_{w in N(x), w != u} Q(x, w)
// for every node u that is not a random source; random-source rows are kept.
QTable admo_q_sweep(const QTable& q, std::span<const double> rewards, const Environment& env, double gamma);

// `sweeps` sweeps starting from the zero table.
QTable build_q_table(const Environment& env, std::span<const double> rewards, int sweeps, double gamma);

NodeId admo_recommend(const QTable& q, NodeId v, const StrategyConfig& cfg, Rng& rng);

// Most-believed class per node; ties go to the lowest class index.
std::vector<MessageClass> map_omega(const BeliefMatrix& alpha_hat);

// Mixed strategies over neighbors. Nodes pushing the smart class (and the
// smart source) use a Boltzmann row over myopic rewards; everyone else is
// uniform.
StrategyRows camo_mixed_strategy(const Environment& env, const BeliefMatrix& alpha_hat,
                                 std::span<const MessageClass> omega, const StrategyConfig& cfg);

// Same shape, Boltzmann rows taken over Q-values built with `sweeps` sweeps.
StrategyRows acmo_mixed_strategy(const Environment& env, const BeliefMatrix& alpha_hat,
                                 std::span<const MessageClass> omega, const StrategyConfig& cfg,
                                 int sweeps, double gamma);

int acmo_sweeps(const StrategyConfig& cfg, int tau);

// Expected increment of every belief parameter in one step:
//   zeta_v * sum_{u in N(v)} mu_u[omega_u] * pi(u -> v) * (1 - p_sp)
// credited to class omega_u. Nodes whose omega is personal send nothing;
// sources push `rate` messages of their own class along their row.
BeliefMatrix expected_delta(const Environment& env, const BeliefMatrix& alpha_hat,
                            std::span<const MessageClass> omega, const StrategyRows& pi);

// Rows for offline step tau >= 1, given the current expectation.
using RowBuilder =
    std::function<StrategyRows(const BeliefMatrix&, std::span<const MessageClass>, int)>;

// Probabilistic diffusion over `window` offline steps. omega0 holds the
// classes actually pushed at tau = 0 (personal when nothing was pushed);
// actions[v] must name a neighbor for every non-source node with
// omega0[v] == smart class. At tau = 0 those nodes push deterministically to
// their action and everyone else uses `rows0`; later steps use `build`.
BeliefMatrix diffuse(const Environment& env, const BeliefMatrix& alpha0,
                     std::span<const MessageClass> omega0,
                     std::span<const std::optional<NodeId>> actions, int window,
                     const StrategyRows& rows0, const RowBuilder& build);

// Convenience form with CAMO rows throughout.
BeliefMatrix diffuse(const Environment& env, const BeliefMatrix& alpha0,
                     std::span<const MessageClass> omega0,
                     std::span<const std::optional<NodeId>> actions, int window,
                     const StrategyConfig& cfg);

// sum_v alpha_hat[v][smart] / sum_c alpha_hat[v][c]
double diffusion_score(const Environment& env, const BeliefMatrix& alpha_hat);

struct JointAction {
    std::vector<NodeId> senders;
    std::vector<NodeId> targets;  // aligned with senders
    double score = 0.0;
    // Score of every sampled action in draw order.
    std::vector<double> sample_scores;
};

JointAction camo_select(const Environment& env, const BeliefMatrix& alpha_t,
                        std::span<const MessageClass> omega0, std::span<const NodeId> senders,
                        const StrategyConfig& cfg, Rng& rng);

// t is the online step, used for the discount factor.
JointAction acmo_select(const Environment& env, const BeliefMatrix& alpha_t,
                        std::span<const MessageClass> omega0, std::span<const NodeId> senders,
                        const StrategyConfig& cfg, int t, Rng& rng);

// Online routing policy plugged into the simulation loop.
class Spreader {
public:
    virtual ~Spreader() = default;

    // Sees the reported state at the start of online step t.
    virtual void observe(const Environment& env, const BeliefMatrix& beliefs, int t) = 0;

    // Target for one message injected by the smart source.
    virtual NodeId route_source(NodeId source, Rng& rng) = 0;

    // Targets for the nodes forwarding a smart-class message this step.
    // omega is the class each node pushes (personal if none).
    virtual std::vector<NodeId> route(std::span<const NodeId> senders,
                                      std::span<const MessageClass> omega, Rng& rng) = 0;
};

std::unique_ptr<Spreader> make_spreader(Algorithm algorithm, const StrategyConfig& cfg);

}  // namespace opmax
