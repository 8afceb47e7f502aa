#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "opmax/error.hpp"
#include "opmax/strategies.hpp"

using namespace opmax;

namespace {

const MessageClass kSmart{0};

struct Fixture {
    Graph g;
    Environment env;
    BeliefMatrix alpha;

    Fixture(std::size_t n, std::vector<Edge> edges, std::size_t classes = 2)
        : g(Graph::from_edges(n, edges)), alpha(n, classes, 1.0) {
        env.graph = &g;
        env.beta.assign(n, 1.0);
        env.zeta.assign(n, 1.0);
        env.p_sp = 0.1;
        env.smart_class = kSmart;
        env.classes = classes;
    }
    Fixture(const Fixture&) = delete;
};

bool within_3se(int hits, int trials, double p) {
    const double se = std::sqrt(p * (1.0 - p) / trials);
    return std::abs(hits / static_cast<double>(trials) - p) <= 3.0 * se + 1e-12;
}

void check_rows(const Graph& g, const StrategyRows& rows) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.degree(v) == 0) continue;
        auto r = rows.row(v);
        CHECK(std::abs(std::accumulate(r.begin(), r.end(), 0.0) - 1.0) < 1e-12);
        for (double p : r) CHECK(p >= 0.0);
    }
}

// a=0 -- b=1 -- c=2, and a -- d=3. Only c and d are persuadable; d less so.
// Myopically a prefers d; looking two hops ahead it prefers b.
void make_route_instance(Fixture& f) {
    f.env.zeta = {0.0, 0.0, 1.0, 1.0};
    f.alpha(2, 0) = 1.0;
    f.alpha(2, 1) = 1.0;  // mu = 1/2, reward 1/6
    f.alpha(3, 0) = 1.0;
    f.alpha(3, 1) = 9.0;  // mu = 1/10, reward small but positive
}

}  // namespace

TEST_CASE("boltzmann examples") {
    const std::vector<double> flat{2.5, 2.5, 2.5};
    for (double p : boltzmann(flat, 0.3)) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const std::vector<double> h{1.0, 0.0};
    const auto cold = boltzmann(h, 1e-6);
    CHECK(cold[0] == doctest::Approx(1.0));
    CHECK(cold[1] < 1e-300);

    const auto warm = boltzmann(h, 1.0);
    CHECK(warm[0] == doctest::Approx(std::exp(1.0) / (1.0 + std::exp(1.0))).epsilon(1e-15));
    CHECK(warm[1] == doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-15));
}

TEST_CASE("boltzmann is shift invariant and argmax preserving") {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> h(1 + rng.index(8));
        for (double& x : h) x = rng.uniform(-3, 3);
        const double temp = rng.uniform(0.001, 5.0);
        const auto p = boltzmann(h, temp);
        std::vector<double> shifted = h;
        for (double& x : shifted) x += 17.0;
        const auto q = boltzmann(shifted, temp);
        for (std::size_t k = 0; k < h.size(); ++k) CHECK(p[k] == doctest::Approx(q[k]).epsilon(1e-12));
        CHECK(std::max_element(p.begin(), p.end()) - p.begin() == std::max_element(h.begin(), h.end()) - h.begin());
        CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-12);
    }
}

TEST_CASE("discount examples") {
    StrategyConfig cfg;
    CHECK(discount(0, cfg) == doctest::Approx(0.95));
    CHECK(discount(2, cfg) == doctest::Approx(0.95 * 0.97 * 0.97));
    cfg.gamma_double_prime = 1.0;
    for (int t : {0, 5, 99}) CHECK(discount(t, cfg) == 0.95);
    cfg.gamma_prime = 0.0;
    for (int t : {0, 5, 99}) CHECK(discount(t, cfg) == 0.0);
}

TEST_CASE("strategy config validation") {
    StrategyConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.temperature = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.n_samples = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.gamma_prime = 1.5;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    CHECK(algorithm_from_string("acmo") == Algorithm::Acmo);
    CHECK_THROWS_AS(algorithm_from_string("greedy"), InvalidArgument);
}

TEST_CASE("random_recommend") {
    const std::vector<Edge> edges{{0, 1}, {0, 2}, {0, 3}};
    const Graph g = Graph::from_edges(5, edges);
    Rng rng(2);
    CHECK(random_recommend(g, 1, rng) == 0);
    CHECK_THROWS_AS(random_recommend(g, 4, rng), InvalidArgument);

    const int trials = 30000;
    std::vector<int> hits(4, 0);
    for (int i = 0; i < trials; ++i) ++hits[random_recommend(g, 0, rng)];
    for (NodeId w = 1; w <= 3; ++w) CHECK(within_3se(hits[w], trials, 1.0 / 3.0));

    Rng a(9), b(9);
    for (int i = 0; i < 100; ++i) CHECK(random_recommend(g, 0, a) == random_recommend(g, 0, b));
}

TEST_CASE("damo rows") {
    Fixture f(4, {{0, 1}, {0, 2}, {0, 3}});
    const auto same = damo_row(f.g, 0, node_rewards(f.env, f.alpha), 0.015);
    for (double p : same) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    // Neighbor 2 neutral, the others nearly saturated.
    for (NodeId w : {1u, 3u}) {
        f.alpha(w, 0) = 99.0;
        f.alpha(w, 1) = 1.0;
    }
    StrategyConfig cfg;
    cfg.temperature = 1e-4;
    Rng rng(3);
    const auto rewards = node_rewards(f.env, f.alpha);
    for (int i = 0; i < 1000; ++i) CHECK(damo_recommend(f.g, 0, rewards, cfg, rng) == 2);
}

TEST_CASE("first Q sweep from zero equals myopic rewards") {
    Fixture f(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    Rng rng(4);
    for (NodeId v = 0; v < 4; ++v) f.alpha(v, 0) = rng.uniform(0.5, 3.0);
    const auto rewards = node_rewards(f.env, f.alpha);
    const QTable q = admo_q_sweep(QTable(f.g, 0.0), rewards, f.env, 0.9);
    for (NodeId u = 0; u < 4; ++u) {
        for (NodeId x : f.g.neighbors(u)) CHECK(q.at(u, x) == rewards[x]);
    }
    const QTable fixed = admo_q_sweep(q, rewards, f.env, 0.0);
    CHECK(fixed.values() == q.values());
}

TEST_CASE("two-step path example") {
    Fixture f(4, {{0, 1}, {1, 2}, {0, 3}});
    make_route_instance(f);
    const auto r = node_rewards(f.env, f.alpha);
    REQUIRE(r[0] == 0.0);
    REQUIRE(r[1] == 0.0);
    REQUIRE(r[2] == doctest::Approx(1.0 / 6.0));
    REQUIRE(r[3] > 0.0);
    const double gamma = 0.95;
    REQUIRE(r[3] < gamma * r[2]);

    const QTable q = build_q_table(f.env, r, 2, gamma);
    CHECK(q.at(0, 1) == doctest::Approx(r[1] + gamma * r[2]).epsilon(1e-15));
    CHECK(q.at(0, 3) == doctest::Approx(r[3]).epsilon(1e-15));
    // b's only other neighbor is a, excluded when a is the sender.
    CHECK(q.at(1, 0) == doctest::Approx(gamma * r[3]).epsilon(1e-15));

    StrategyConfig cfg;
    cfg.temperature = 1e-4;
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        CHECK(admo_recommend(q, 0, cfg, rng) == 1);
        CHECK(damo_recommend(f.g, 0, r, cfg, rng) == 3);
    }
}

TEST_CASE("random-source rows stay untouched by Q sweeps") {
    Fixture f(4, {{0, 1}, {1, 2}, {2, 3}});
    f.env.sources.push_back({1, MessageClass{1}, 2, SourceKind::Random});
    const std::vector<double> r{0.1, 0.2, 0.3, 0.4};
    const QTable q = build_q_table(f.env, r, 3, 0.9);
    for (double x : q.row(1)) CHECK(x == 0.0);
    CHECK(q.at(0, 1) > 0.0);
}

TEST_CASE("Q sweeps are monotone and converge geometrically") {
    const Graph g = generate_pa(60, 2, 3);
    Environment env;
    env.graph = &g;
    env.beta.assign(60, 1.0);
    env.zeta.assign(60, 1.0);
    Rng rng(6);
    std::vector<double> r(60);
    for (double& x : r) x = rng.uniform(0.0, 0.3);
    const double gamma = 0.8;
    const double rmax = *std::max_element(r.begin(), r.end());

    std::vector<QTable> seq{QTable(g, 0.0)};
    for (int k = 0; k < 60; ++k) seq.push_back(admo_q_sweep(seq.back(), r, env, gamma));
    const QTable& limit = seq.back();
    for (std::size_t k = 1; k + 1 < seq.size(); ++k) {
        double residual = 0.0;
        for (std::size_t i = 0; i < g.arc_count(); ++i) {
            CHECK(seq[k + 1].values()[i] >= seq[k].values()[i]);
            residual = std::max(residual, limit.values()[i] - seq[k].values()[i]);
        }
        CHECK(residual <= std::pow(gamma, static_cast<double>(k)) * rmax / (1.0 - gamma) + 1e-12);
    }
}

TEST_CASE("admo_recommend special cases") {
    Fixture f(4, {{0, 1}, {0, 2}, {0, 3}});
    StrategyConfig cfg;
    Rng rng(7);
    const QTable zero(f.g, 0.0);
    const int trials = 30000;
    std::vector<int> hits(4, 0);
    for (int i = 0; i < trials; ++i) ++hits[admo_recommend(zero, 0, cfg, rng)];
    for (NodeId w = 1; w <= 3; ++w) CHECK(within_3se(hits[w], trials, 1.0 / 3.0));

    // One sweep gives exactly the DAMO row, so draws agree under a shared seed.
    f.alpha(1, 0) = 3.0;
    f.alpha(2, 1) = 2.0;
    const auto r = node_rewards(f.env, f.alpha);
    const QTable one = build_q_table(f.env, r, 1, 0.95);
    Rng a(8), b(8);
    for (int i = 0; i < 500; ++i) CHECK(admo_recommend(one, 0, cfg, a) == damo_recommend(f.g, 0, r, cfg, b));
}

TEST_CASE("map_omega examples") {
    BeliefMatrix a(3, 3);
    const double rows[3][3] = {{2, 1, 1}, {1, 1, 1}, {1, 3, 2}};
    for (NodeId v = 0; v < 3; ++v) {
        for (std::size_t c = 0; c < 3; ++c) a(v, c) = rows[v][c];
    }
    const auto omega = map_omega(a);
    CHECK(omega[0] == MessageClass{0});
    CHECK(omega[1] == MessageClass{0});
    CHECK(omega[2] == MessageClass{1});
}

TEST_CASE("camo mixed strategy rows") {
    Fixture f(5, {{0, 1}, {0, 2}, {0, 3}, {3, 4}});
    StrategyConfig cfg;
    f.alpha(1, 0) = 4.0;
    std::vector<MessageClass> omega(5, MessageClass{1});
    auto rows = camo_mixed_strategy(f.env, f.alpha, omega, cfg);
    check_rows(f.g, rows);
    for (double p : rows.row(0)) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(rows.row(4)[0] == 1.0);

    omega[0] = kSmart;
    rows = camo_mixed_strategy(f.env, f.alpha, omega, cfg);
    check_rows(f.g, rows);
    CHECK(rows.at(0, 2) == doctest::Approx(rows.at(0, 3)).epsilon(1e-15));
    CHECK(rows.at(0, 1) < rows.at(0, 2));

    // Equal rewards: uniform even when pushing the smart class.
    f.alpha(1, 0) = 1.0;
    rows = camo_mixed_strategy(f.env, f.alpha, omega, cfg);
    for (double p : rows.row(0)) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("acmo sweep count rule") {
    StrategyConfig cfg;
    cfg.window = 4;
    cfg.n_q = 2;
    CHECK(acmo_sweeps(cfg, 0) == 4);
    CHECK(acmo_sweeps(cfg, 3) == 2);
    cfg.sweep_rule = SweepRule::Min;
    CHECK(acmo_sweeps(cfg, 0) == 2);
    CHECK(acmo_sweeps(cfg, 3) == 1);
    cfg.sweep_rule = SweepRule::Fixed;
    cfg.fixed_sweeps = 7;
    CHECK(acmo_sweeps(cfg, 2) == 7);
}

TEST_CASE("expected_delta degenerate cases") {
    Fixture f(4, {{0, 1}, {1, 2}, {2, 3}}, 3);
    StrategyConfig cfg;
    const std::vector<MessageClass> omega{MessageClass{0}, MessageClass{2}, MessageClass::personal(),
                                          MessageClass{0}};
    const auto pi = camo_mixed_strategy(f.env, f.alpha, omega, cfg);

    f.env.p_sp = 1.0;
    const auto none = expected_delta(f.env, f.alpha, omega, pi);
    for (double x : none.values()) CHECK(x == 0.0);

    f.env.p_sp = 0.1;
    const auto d = expected_delta(f.env, f.alpha, omega, pi);
    for (NodeId v = 0; v < 4; ++v) CHECK(d(v, 1) == 0.0);
    // Node 1 pushes class 2 uniformly to 0 and 2: mu = 1/3, (1 - p_sp) = 0.9.
    CHECK(d(0, 2) == doctest::Approx(0.5 * 0.3).epsilon(1e-15));
    CHECK(d(2, 2) == doctest::Approx(0.5 * 0.3).epsilon(1e-15));
    CHECK(d(3, 2) == 0.0);
}

TEST_CASE("expected_delta credits sources with their rate") {
    Fixture f(3, {{0, 1}, {0, 2}}, 2);
    f.env.sources.push_back({0, MessageClass{1}, 2, SourceKind::Random});
    f.env.zeta = {1.0, 0.5, 2.0};
    std::vector<MessageClass> omega(3, MessageClass::personal());
    const auto pi = camo_mixed_strategy(f.env, f.alpha, omega, StrategyConfig{});
    const auto d = expected_delta(f.env, f.alpha, omega, pi);
    CHECK(d(1, 1) == doctest::Approx(0.5 * 2 * 0.5));
    CHECK(d(2, 1) == doctest::Approx(2.0 * 2 * 0.5));
    CHECK(d(1, 0) == 0.0);
}

TEST_CASE("diffuse degenerate cases") {
    Fixture f(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}, 3);
    StrategyConfig cfg;
    Rng rng(10);
    for (double& b : f.env.beta) b = rng.uniform(0.5, 1.0);
    for (NodeId v = 0; v < 5; ++v) {
        for (std::size_t c = 0; c < 3; ++c) f.alpha(v, c) = rng.uniform(0.5, 2.0);
    }
    std::vector<MessageClass> omega0 = map_omega(f.alpha);
    std::vector<std::optional<NodeId>> actions(5);
    for (NodeId v = 0; v < 5; ++v) {
        if (omega0[v] == kSmart) actions[v] = f.g.neighbors(v)[0];
    }

    f.env.zeta.assign(5, 0.0);
    const auto decayed = diffuse(f.env, f.alpha, omega0, actions, 1, cfg);
    for (NodeId v = 0; v < 5; ++v) {
        for (std::size_t c = 0; c < 3; ++c) CHECK(decayed(v, c) == f.env.beta[v] * f.alpha(v, c));
    }

    f.env.zeta.assign(5, 1.0);
    f.env.beta.assign(5, 1.0);
    f.env.p_sp = 1.0;
    const auto same = diffuse(f.env, f.alpha, omega0, actions, 4, cfg);
    CHECK(same == f.alpha);
}

TEST_CASE("diffuse with beta = 1 never shrinks belief mass") {
    Fixture f(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}}, 3);
    f.env.sources.push_back({4, MessageClass{1}, 2, SourceKind::Random});
    Rng rng(11);
    for (NodeId v = 0; v < 5; ++v) {
        f.env.zeta[v] = rng.uniform(0.1, 2.0);
        for (std::size_t c = 0; c < 3; ++c) f.alpha(v, c) = rng.uniform(0.5, 2.0);
    }
    StrategyConfig cfg;
    const auto omega0 = map_omega(f.alpha);
    std::vector<std::optional<NodeId>> actions(5);
    for (NodeId v = 0; v < 5; ++v) {
        if (omega0[v] == kSmart && !f.env.is_source(v)) actions[v] = f.g.neighbors(v).back();
    }
    BeliefMatrix prev = f.alpha;
    for (int n = 1; n <= 6; ++n) {
        const auto cur = diffuse(f.env, f.alpha, omega0, actions, n, cfg);
        for (NodeId v = 0; v < 5; ++v) {
            const double a = std::accumulate(prev.row(v).begin(), prev.row(v).end(), 0.0);
            const double b = std::accumulate(cur.row(v).begin(), cur.row(v).end(), 0.0);
            CHECK(b >= a - 1e-12);
        }
        prev = cur;
    }
}

TEST_CASE("diffuse rejects bad actions") {
    Fixture f(3, {{0, 1}, {1, 2}});
    StrategyConfig cfg;
    std::vector<MessageClass> omega0{kSmart, MessageClass{1}, MessageClass{1}};
    std::vector<std::optional<NodeId>> actions(3);
    CHECK_THROWS_AS(diffuse(f.env, f.alpha, omega0, actions, 2, cfg), InvalidArgument);
    actions[0] = 2;
    CHECK_THROWS_AS(diffuse(f.env, f.alpha, omega0, actions, 2, cfg), InvalidArgument);
    actions[0] = 1;
    CHECK_THROWS_AS(diffuse(f.env, f.alpha, omega0, actions, 0, cfg), InvalidArgument);
    CHECK_NOTHROW(diffuse(f.env, f.alpha, omega0, actions, 2, cfg));
}

TEST_CASE("diffuse keeps symmetry on a cycle") {
    std::vector<Edge> edges;
    for (NodeId v = 0; v < 6; ++v) edges.emplace_back(v, (v + 1) % 6);
    Fixture f(6, edges, 3);
    for (NodeId v = 0; v < 6; ++v) {
        f.alpha(v, 0) = 1.0;
        f.alpha(v, 1) = 2.0;
        f.alpha(v, 2) = 1.5;
    }
    f.env.beta.assign(6, 0.9);
    f.env.zeta.assign(6, 1.3);
    const std::vector<MessageClass> omega0(6, MessageClass{1});
    const std::vector<std::optional<NodeId>> actions(6);
    const auto out = diffuse(f.env, f.alpha, omega0, actions, 5, StrategyConfig{});
    for (NodeId v = 1; v < 6; ++v) {
        for (std::size_t c = 0; c < 3; ++c) CHECK(out(v, c) == out(0, c));
    }
}

TEST_CASE("camo_select with no senders") {
    Fixture f(3, {{0, 1}, {1, 2}});
    Rng rng(12);
    const std::vector<MessageClass> omega(3, MessageClass::personal());
    const auto a = camo_select(f.env, f.alpha, omega, {}, StrategyConfig{}, rng);
    CHECK(a.senders.empty());
    CHECK(a.targets.empty());
    CHECK(a.sample_scores.empty());
}

TEST_CASE("camo with one sample and window one follows the DAMO distribution") {
    Fixture f(4, {{0, 1}, {0, 2}, {0, 3}});
    f.alpha(1, 0) = 2.0;
    f.alpha(2, 1) = 3.0;
    f.alpha(3, 0) = 0.5;
    StrategyConfig cfg;
    cfg.n_samples = 1;
    cfg.window = 1;
    cfg.temperature = 0.05;
    const auto row = damo_row(f.g, 0, node_rewards(f.env, f.alpha), cfg.temperature);
    const std::vector<MessageClass> omega(4, MessageClass::personal());
    const std::vector<NodeId> senders{0};
    Rng rng(13);
    const int trials = 20000;
    std::vector<int> hits(4, 0);
    for (int i = 0; i < trials; ++i) ++hits[camo_select(f.env, f.alpha, omega, senders, cfg, rng).targets[0]];
    for (std::size_t k = 0; k < 3; ++k) CHECK(within_3se(hits[k + 1], trials, row[k]));
}

TEST_CASE("camo_select approaches the brute-force best joint action") {
    // Senders 0 and 1 share receivers 2 and 3 with different persuadability.
    Fixture f(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
    f.env.zeta = {1.0, 1.0, 1.5, 0.7};
    f.alpha(2, 1) = 1.5;
    f.alpha(3, 1) = 2.5;
    f.alpha(0, 0) = 3.0;
    f.alpha(1, 0) = 3.0;
    StrategyConfig cfg;
    cfg.window = 1;
    cfg.temperature = 0.2;
    const std::vector<MessageClass> omega{kSmart, kSmart, MessageClass{1}, MessageClass{1}};
    const std::vector<NodeId> senders{0, 1};

    double brute = -1.0;
    for (NodeId x : {2u, 3u}) {
        for (NodeId y : {2u, 3u}) {
            std::vector<std::optional<NodeId>> act{x, y, std::nullopt, std::nullopt};
            brute = std::max(brute, diffusion_score(f.env, diffuse(f.env, f.alpha, omega, act, 1, cfg)));
        }
    }

    cfg.n_samples = 60;
    Rng rng(14);
    const auto a = camo_select(f.env, f.alpha, omega, senders, cfg, rng);
    REQUIRE(a.sample_scores.size() == 60);
    double running = -1.0;
    std::vector<double> prefix_best;
    for (double s : a.sample_scores) {
        running = std::max(running, s);
        prefix_best.push_back(running);
    }
    CHECK(std::is_sorted(prefix_best.begin(), prefix_best.end()));
    CHECK(a.score == prefix_best.back());
    CHECK(a.score == doctest::Approx(brute).epsilon(1e-14));
    // The selected targets reproduce the reported score.
    std::vector<std::optional<NodeId>> act{a.targets[0], a.targets[1], std::nullopt, std::nullopt};
    CHECK(diffusion_score(f.env, diffuse(f.env, f.alpha, omega, act, 1, cfg)) == a.score);
}

TEST_CASE("acmo reduces to camo") {
    const Graph g = generate_pa(40, 2, 5);
    Environment env;
    env.graph = &g;
    Rng setup(15);
    for (NodeId v = 0; v < 40; ++v) {
        env.beta.push_back(setup.uniform(0.9, 1.0));
        env.zeta.push_back(setup.uniform(0.0, 2.0));
    }
    env.classes = 3;
    env.sources.push_back({0, MessageClass{1}, 2, SourceKind::Random});
    BeliefMatrix alpha(40, 3);
    for (NodeId v = 0; v < 40; ++v) {
        for (std::size_t c = 0; c < 3; ++c) alpha(v, c) = setup.uniform(0.5, 3.0);
    }
    const auto omega = map_omega(alpha);
    std::vector<NodeId> senders;
    for (NodeId v = 1; v < 40; ++v) {
        if (omega[v] == kSmart) senders.push_back(v);
    }
    REQUIRE_FALSE(senders.empty());

    StrategyConfig cfg;
    cfg.n_samples = 5;
    cfg.sweep_rule = SweepRule::Fixed;
    cfg.fixed_sweeps = 1;
    Rng a(16), b(16);
    const auto camo = camo_select(env, alpha, omega, senders, cfg, a);
    const auto acmo = acmo_select(env, alpha, omega, senders, cfg, 3, b);
    CHECK(camo.targets == acmo.targets);
    CHECK(camo.sample_scores == acmo.sample_scores);

    cfg.sweep_rule = SweepRule::Max;
    cfg.gamma_prime = 0.0;
    Rng c(17), d(17);
    const auto camo2 = camo_select(env, alpha, omega, senders, cfg, c);
    const auto acmo2 = acmo_select(env, alpha, omega, senders, cfg, 0, d);
    CHECK(camo2.targets == acmo2.targets);
    CHECK(camo2.sample_scores == acmo2.sample_scores);
}

TEST_CASE("acmo rows favor the influential route") {
    Fixture f(4, {{0, 1}, {1, 2}, {0, 3}});
    make_route_instance(f);
    StrategyConfig cfg;
    const std::vector<MessageClass> omega{kSmart, MessageClass{1}, MessageClass{1}, MessageClass{1}};
    const auto camo = camo_mixed_strategy(f.env, f.alpha, omega, cfg);
    const auto acmo = acmo_mixed_strategy(f.env, f.alpha, omega, cfg, acmo_sweeps(cfg, 0), discount(0, cfg));
    check_rows(f.g, acmo);
    CHECK(acmo.at(0, 1) > camo.at(0, 1));
    CHECK(acmo.at(0, 1) > 0.5);
}

TEST_CASE("spreaders return neighbors") {
    const Graph g = generate_pa(30, 2, 8);
    Environment env;
    env.graph = &g;
    env.beta.assign(30, 0.95);
    env.zeta.assign(30, 1.0);
    env.classes = 3;
    env.sources = {{0, kSmart, 2, SourceKind::Smart}, {1, MessageClass{1}, 2, SourceKind::Random}};
    BeliefMatrix beliefs(30, 3, 1.0);
    std::vector<MessageClass> omega(30, MessageClass::personal());
    const std::vector<NodeId> senders{3, 7, 12};
    for (NodeId s : senders) omega[s] = kSmart;
    StrategyConfig cfg;
    cfg.n_samples = 3;
    cfg.window = 2;
    cfg.n_q = 2;
    for (auto alg : {Algorithm::Random, Algorithm::Damo, Algorithm::Admo, Algorithm::Camo, Algorithm::Acmo}) {
        auto sp = make_spreader(alg, cfg);
        Rng rng(18);
        sp->observe(env, beliefs, 0);
        CHECK(g.has_edge(0, sp->route_source(0, rng)));
        const auto targets = sp->route(senders, omega, rng);
        REQUIRE(targets.size() == senders.size());
        for (std::size_t i = 0; i < senders.size(); ++i) CHECK(g.has_edge(senders[i], targets[i]));
    }
}
