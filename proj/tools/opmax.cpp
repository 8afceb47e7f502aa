#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opmax/centrality.hpp"
#include "opmax/config.hpp"
#include "opmax/engine.hpp"
#include "opmax/error.hpp"
#include "opmax/graph.hpp"
#include "opmax/io.hpp"
#include "opmax/toy.hpp"

namespace fs = std::filesystem;
using namespace opmax;

namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

// Flags shared by `run` and `sweep`; unset optionals leave the config alone.
struct CommonFlags {
    std::string config_path;
    std::string preset_name;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> algorithm;
    std::optional<std::size_t> replications;
    std::optional<int> horizon;
    std::vector<int> snapshot_at;
    std::string out = "out";
    std::string data_dir;
    std::size_t threads = 1;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
        app->add_option("--preset", preset_name, "Built-in defaults: pa1k, pa10k, fb-ego")
            ->check(CLI::IsMember({"pa1k", "pa10k", "fb-ego"}));
        app->add_option("--seed", seed, "Master seed");
        app->add_option("--algorithm", algorithm, "random, damo, admo, camo or acmo")
            ->check(CLI::IsMember({"random", "damo", "admo", "camo", "acmo"}));
        app->add_option("--replications", replications, "Replication count")->check(CLI::PositiveNumber);
        app->add_option("--horizon", horizon, "Online steps T")->check(CLI::NonNegativeNumber);
        app->add_option("--snapshot-at", snapshot_at, "Extra belief snapshots, e.g. 10,50")->delimiter(',');
        app->add_option("--out", out, "Output directory");
        app->add_option("--data-dir", data_dir, "Directory for relative graph file paths");
        app->add_option("--threads", threads, "Worker threads for replications")->check(CLI::PositiveNumber);
    }

    SimConfig resolve() const {
        SimConfig base = preset_name.empty() ? SimConfig{} : preset(preset_name);
        SimConfig cfg = config_path.empty() ? base : load_config_file(config_path, base);
        if (seed) cfg.seed = *seed;
        if (algorithm) cfg.algorithm = algorithm_from_string(*algorithm);
        if (replications) cfg.replications = *replications;
        if (horizon) cfg.horizon = *horizon;
        if (!snapshot_at.empty()) cfg.snapshot_at = snapshot_at;
        if (cfg.graph.kind == GraphSpec::Kind::File && !data_dir.empty() && fs::path(cfg.graph.path).is_relative()) {
            cfg.graph.path = (fs::path(data_dir) / cfg.graph.path).string();
        }
        cfg.validate();
        return cfg;
    }
};

std::mutex console;

void progress(const std::string& line) {
    std::lock_guard lock(console);
    std::cerr << line << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_run(const CommonFlags& flags) {
    const SimConfig cfg = flags.resolve();
    const auto start = std::chrono::steady_clock::now();
    Simulation sim(cfg);
    progress("run: " + std::string(to_string(cfg.algorithm)) + ", " + std::to_string(sim.graph().node_count()) +
             " nodes, " + std::to_string(cfg.replications) + " replications, config " + sim.config_hash());
    const auto traces = sim.run_all(flags.threads);
    write_run_outputs(flags.out, cfg, traces, seconds_since(start));
    const Summary s = aggregate(traces);
    std::ostringstream line;
    line << "final mean total opinion per class:";
    for (double x : s.final_mean) line << ' ' << format_double(x);
    progress(line.str());
    return 0;
}

int cmd_sweep(const CommonFlags& flags, std::size_t count, const std::string& rank_by, const std::vector<NodeId>& nodes) {
    const SimConfig cfg = flags.resolve();
    const auto start = std::chrono::steady_clock::now();
    const Graph g = build_graph(cfg.graph);
    std::vector<NodeId> placements = nodes;
    if (placements.empty()) {
        const RoleAssignment roles = resolve_roles(g, cfg);
        placements = spread_placements(g, centrality_from_string(rank_by), count, roles.random_sources);
    }
    progress("sweep: " + std::to_string(placements.size()) + " placements");
    const SweepResult result = centrality_sweep(cfg, g, placements, flags.threads);

    std::string csv = "node";
    for (auto kind : kSweepKinds) csv += "," + std::string(to_string(kind));
    csv += ",mean_final_smart_total\n";
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : result.points) {
        csv += std::to_string(p.node);
        nlohmann::json pj;
        pj["node"] = p.node;
        for (auto kind : kSweepKinds) {
            csv += "," + format_double(p.centrality.at(kind));
            pj[std::string(to_string(kind))] = p.centrality.at(kind);
        }
        csv += "," + format_double(p.mean_final_smart_total) + "\n";
        pj["final_smart_totals"] = p.final_smart_totals;
        pj["mean_final_smart_total"] = p.mean_final_smart_total;
        points.push_back(pj);
    }
    nlohmann::json j;
    j["config"] = config_to_json(cfg);
    j["random_sources"] = result.base_roles.random_sources;
    j["points"] = points;
    for (auto kind : kSweepKinds) j["pcc"][std::string(to_string(kind))] = result.pcc.at(kind);
    j["runtime_seconds"] = seconds_since(start);

    const std::string body = j.dump(2) + "\n";
    fs::create_directories(flags.out);
    write_atomic(fs::path(flags.out) / "sweep.csv", csv);
    write_atomic(fs::path(flags.out) / "sweep.json", body);
    for (auto kind : kSweepKinds) {
        progress("pcc " + std::string(to_string(kind)) + " = " + format_double(result.pcc.at(kind)));
    }
    return 0;
}

double grid_argmax(const toy::JointRewards& r, int steps) {
    double best_p = 0.0;
    double best = toy::expected_reward(0.0, r);
    for (int i = 1; i <= steps; ++i) {
        const double p = static_cast<double>(i) / steps;
        const double e = toy::expected_reward(p, r);
        if (e > best) {
            best = e;
            best_p = p;
        }
    }
    return best_p;
}

int cmd_toy(std::uint64_t samples, std::size_t instances, std::uint64_t seed, int max_draws, const std::string& out) {
    Rng rng(seed);
    std::string csv =
        "instance,alpha1_c,alpha2_c,beta_c,zeta_c,alpha1_d,alpha2_d,beta_d,zeta_d,r_c,r_d,R_cc,R_cd,R_dd,"
        "condition,p_star,p_grid,delta_p,E_star,E_brute_at_p_star,delta_E\n";
    for (std::size_t i = 0; i < instances; ++i) {
        const toy::Instance inst = toy::ordered(toy::random_instance(rng));
        const auto ind = toy::individual_rewards(inst);
        const auto jr = toy::joint_rewards(inst);
        const double p_star = toy::optimal_p(jr);
        const double p_clamped = std::clamp(p_star, 0.0, 1.0);
        const double p_grid = grid_argmax(jr, 100000);
        const double e_star = toy::optimal_expected_reward(jr);
        const double e_brute = toy::brute_force_expected_reward(p_star, jr);
        const double vals[] = {inst.c.alpha1, inst.c.alpha2, inst.c.beta, inst.c.zeta, inst.d.alpha1, inst.d.alpha2,
                               inst.d.beta,   inst.d.zeta,   ind.r_c,     ind.r_d,     jr.cc,         jr.cd,
                               jr.dd};
        csv += std::to_string(i);
        for (double v : vals) csv += "," + format_double(v);
        csv += toy::proposition1_condition(inst) ? ",1" : ",0";
        for (double v : {p_star, p_grid, p_clamped - p_grid, e_star, e_brute, e_brute - e_star}) {
            csv += "," + format_double(v);
        }
        csv += "\n";
    }

    toy::Receiver unit;
    const toy::JointRewards sym = toy::joint_rewards({unit, unit});
    const auto mc = toy::sampled_reward_monte_carlo(0.5, sym, max_draws, samples, seed);
    std::string sampling = "n_samples,closed_form,monte_carlo,delta,R_cd\n";
    for (int n = 1; n <= max_draws; ++n) {
        const double cf = toy::expected_sampled_reward(0.5, sym, n);
        const double m = mc[static_cast<std::size_t>(n - 1)];
        sampling += std::to_string(n) + "," + format_double(cf) + "," + format_double(m) + "," +
                    format_double(cf - m) + "," + format_double(sym.cd) + "\n";
    }
    fs::create_directories(out);
    write_atomic(fs::path(out) / "toy_results.csv", csv);
    write_atomic(fs::path(out) / "toy_sampling.csv", sampling);
    progress("toy: " + std::to_string(instances) + " instances, " + std::to_string(samples) + " Monte Carlo trials");
    return 0;
}

int cmd_gen_graph(std::size_t n, std::size_t m, std::uint64_t seed, const std::string& output) {
    const Graph g = generate_pa(n, m, seed);
    std::ostringstream body;
    write_edge_list(body, g);
    const fs::path path(output);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_atomic(path, body.str());
    return 0;
}

int cmd_centrality(const std::string& graph_path, const std::vector<std::string>& kinds, const std::string& output) {
    const EdgeListLoad load = load_edge_list_file(graph_path);
    std::vector<CentralityKind> parsed;
    for (const auto& k : kinds) parsed.push_back(centrality_from_string(k));
    if (parsed.empty()) parsed.assign(std::begin(kSweepKinds), std::end(kSweepKinds));
    std::vector<std::vector<double>> scores;
    for (auto kind : parsed) scores.push_back(centrality(load.graph, kind));

    std::string csv = "node";
    for (auto kind : parsed) csv += "," + std::string(to_string(kind));
    csv += "\n";
    for (NodeId v = 0; v < load.graph.node_count(); ++v) {
        csv += std::to_string(load.original_ids[v]);
        for (const auto& s : scores) csv += "," + format_double(s[v]);
        csv += "\n";
    }
    if (output.empty() || output == "-") {
        std::cout << csv;
    } else {
        const fs::path path(output);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        write_atomic(path, csv);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Opinion maximization simulator"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    auto* run = app.add_subcommand("run", "Simulate one configuration and write traces plus summary.json");
    run_flags.attach(run);

    CommonFlags sweep_flags;
    std::size_t sweep_count = 20;
    std::string rank_by = "degree";
    std::vector<NodeId> sweep_nodes;
    auto* sweep = app.add_subcommand("sweep", "Move the smart source and correlate centrality with outcome");
    sweep_flags.attach(sweep);
    sweep->add_option("--placements", sweep_count, "Number of placements spread over the ranking");
    sweep->add_option("--rank-by", rank_by, "Centrality used to spread placements");
    sweep->add_option("--nodes", sweep_nodes, "Explicit placements")->delimiter(',');

    std::uint64_t toy_samples = 100000;
    std::size_t toy_instances = 1000;
    std::uint64_t toy_seed = 1;
    int toy_draws = 50;
    std::string toy_out = "out";
    auto* toy_cmd = app.add_subcommand("toy", "Two-sender game tables with oracle deltas");
    toy_cmd->add_option("--samples", toy_samples, "Monte Carlo trials")->check(CLI::PositiveNumber);
    toy_cmd->add_option("--instances", toy_instances, "Random instances");
    toy_cmd->add_option("--seed", toy_seed, "Seed");
    toy_cmd->add_option("--max-draws", toy_draws, "Largest N_s in the sampling table")->check(CLI::PositiveNumber);
    toy_cmd->add_option("--out", toy_out, "Output directory");

    std::size_t gen_n = 1000, gen_m = 3;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen-graph", "Write a preferential-attachment edge list");
    gen->add_option("--n", gen_n, "Nodes")->check(CLI::PositiveNumber);
    gen->add_option("--m", gen_m, "Edges per new node")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "Seed");
    gen->add_option("--output,-o", gen_out, "Edge list path")->required();

    std::string cent_graph, cent_out;
    std::vector<std::string> cent_kinds;
    auto* cent = app.add_subcommand("centrality", "Centrality scores for an edge-list file");
    cent->add_option("--graph", cent_graph, "Edge list")->required()->check(CLI::ExistingFile);
    cent->add_option("--kind", cent_kinds, "Kinds to compute (default: all)")->delimiter(',');
    cent->add_option("--output,-o", cent_out, "CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (*run) return cmd_run(run_flags);
        if (*sweep) return cmd_sweep(sweep_flags, sweep_count, rank_by, sweep_nodes);
        if (*toy_cmd) return cmd_toy(toy_samples, toy_instances, toy_seed, toy_draws, toy_out);
        if (*gen) return cmd_gen_graph(gen_n, gen_m, gen_seed, gen_out);
        if (*cent) return cmd_centrality(cent_graph, cent_kinds, cent_out);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kUsageError;
}
