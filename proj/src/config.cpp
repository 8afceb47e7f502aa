#include "opmax/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "opmax/error.hpp"

namespace opmax {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> keys, std::string_view where) {
    std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& [k, _] : j.items()) {
        if (!known.count(k)) throw InvalidArgument("unknown key '" + k + "' in " + std::string(where));
    }
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

std::string_view sweep_rule_name(SweepRule r) {
    switch (r) {
        case SweepRule::Max: return "max";
        case SweepRule::Min: return "min";
        case SweepRule::Fixed: return "fixed";
    }
    return "max";
}

SweepRule sweep_rule_from(std::string_view s) {
    if (s == "max") return SweepRule::Max;
    if (s == "min") return SweepRule::Min;
    if (s == "fixed") return SweepRule::Fixed;
    throw InvalidArgument("unknown sweep rule: " + std::string(s));
}

}  // namespace

SimConfig config_from_json(const json& j, const SimConfig& base) {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    reject_unknown(j,
                   {"graph", "roles", "placement", "horizon", "p_sp", "feed_capacity", "source_rate", "classes",
                    "smart_class", "prior_alpha", "beta_range", "zeta_range", "algorithm", "strategy", "seed",
                    "replications", "snapshot_at"},
                   "config");
    SimConfig cfg = base;
    try {
        if (auto it = j.find("graph"); it != j.end()) {
            const json& gj = *it;
            reject_unknown(gj, {"type", "n", "m", "seed", "path"}, "graph");
            std::string type = gj.value(
                "type", std::string(cfg.graph.kind == GraphSpec::Kind::File ? "file" : "pa"));
            if (type == "pa") {
                cfg.graph.kind = GraphSpec::Kind::PreferentialAttachment;
            } else if (type == "file") {
                cfg.graph.kind = GraphSpec::Kind::File;
            } else {
                throw InvalidArgument("graph.type must be 'pa' or 'file'");
            }
            read(gj, "n", cfg.graph.n);
            read(gj, "m", cfg.graph.m);
            read(gj, "seed", cfg.graph.seed);
            read(gj, "path", cfg.graph.path);
        }
        if (auto it = j.find("roles"); it != j.end() && it->is_null()) {
            cfg.roles.reset();
        } else if (it != j.end()) {
            reject_unknown(*it, {"smart_source", "random_sources"}, "roles");
            RoleAssignment roles;
            roles.smart_source = it->at("smart_source").get<NodeId>();
            roles.random_sources = it->at("random_sources").get<std::vector<NodeId>>();
            cfg.roles = roles;
        }
        if (auto it = j.find("placement"); it != j.end()) {
            reject_unknown(*it, {"centrality", "smart_quantile", "random_count"}, "placement");
            if (auto c = it->find("centrality"); c != it->end()) {
                cfg.placement.centrality = centrality_from_string(c->get<std::string>());
            }
            read(*it, "smart_quantile", cfg.placement.smart_quantile);
            read(*it, "random_count", cfg.placement.random_count);
        }
        read(j, "horizon", cfg.horizon);
        read(j, "p_sp", cfg.p_sp);
        read(j, "feed_capacity", cfg.feed_capacity);
        read(j, "source_rate", cfg.source_rate);
        read(j, "classes", cfg.classes);
        read(j, "smart_class", cfg.smart_class);
        read(j, "prior_alpha", cfg.prior_alpha);
        read(j, "beta_range", cfg.beta_range);
        read(j, "zeta_range", cfg.zeta_range);
        if (auto it = j.find("algorithm"); it != j.end()) {
            cfg.algorithm = algorithm_from_string(it->get<std::string>());
        }
        if (auto it = j.find("strategy"); it != j.end()) {
            const json& sj = *it;
            reject_unknown(sj,
                           {"temperature", "gamma_prime", "gamma_double_prime", "n_q", "window", "n_samples",
                            "sweep_rule", "fixed_sweeps"},
                           "strategy");
            read(sj, "temperature", cfg.strategy.temperature);
            read(sj, "gamma_prime", cfg.strategy.gamma_prime);
            read(sj, "gamma_double_prime", cfg.strategy.gamma_double_prime);
            read(sj, "n_q", cfg.strategy.n_q);
            read(sj, "window", cfg.strategy.window);
            read(sj, "n_samples", cfg.strategy.n_samples);
            if (auto r = sj.find("sweep_rule"); r != sj.end()) {
                cfg.strategy.sweep_rule = sweep_rule_from(r->get<std::string>());
            }
            read(sj, "fixed_sweeps", cfg.strategy.fixed_sweeps);
        }
        read(j, "seed", cfg.seed);
        read(j, "replications", cfg.replications);
        read(j, "snapshot_at", cfg.snapshot_at);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

json config_to_json(const SimConfig& cfg) {
    json j;
    if (cfg.graph.kind == GraphSpec::Kind::PreferentialAttachment) {
        j["graph"] = {{"type", "pa"}, {"n", cfg.graph.n}, {"m", cfg.graph.m}, {"seed", cfg.graph.seed}};
    } else {
        j["graph"] = {{"type", "file"}, {"path", cfg.graph.path}};
    }
    if (cfg.roles) {
        j["roles"] = {{"smart_source", cfg.roles->smart_source}, {"random_sources", cfg.roles->random_sources}};
    } else {
        j["roles"] = nullptr;
    }
    j["placement"] = {{"centrality", std::string(to_string(cfg.placement.centrality))},
                      {"smart_quantile", cfg.placement.smart_quantile},
                      {"random_count", cfg.placement.random_count}};
    j["horizon"] = cfg.horizon;
    j["p_sp"] = cfg.p_sp;
    j["feed_capacity"] = cfg.feed_capacity;
    j["source_rate"] = cfg.source_rate;
    j["classes"] = cfg.classes;
    j["smart_class"] = cfg.smart_class;
    j["prior_alpha"] = cfg.prior_alpha;
    j["beta_range"] = cfg.beta_range;
    j["zeta_range"] = cfg.zeta_range;
    j["algorithm"] = std::string(to_string(cfg.algorithm));
    j["strategy"] = {{"temperature", cfg.strategy.temperature},
                     {"gamma_prime", cfg.strategy.gamma_prime},
                     {"gamma_double_prime", cfg.strategy.gamma_double_prime},
                     {"n_q", cfg.strategy.n_q},
                     {"window", cfg.strategy.window},
                     {"n_samples", cfg.strategy.n_samples},
                     {"sweep_rule", std::string(sweep_rule_name(cfg.strategy.sweep_rule))},
                     {"fixed_sweeps", cfg.strategy.fixed_sweeps}};
    j["seed"] = cfg.seed;
    j["replications"] = cfg.replications;
    j["snapshot_at"] = cfg.snapshot_at;
    return j;
}

SimConfig load_config_file(const std::string& path, const SimConfig& base) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidArgument("config " + path + ": " + e.what());
    }
    return config_from_json(j, base);
}

SimConfig preset(std::string_view name) {
    SimConfig cfg;
    if (name == "pa1k") {
        cfg.graph = {GraphSpec::Kind::PreferentialAttachment, 1000, 3, 1, {}};
        cfg.strategy.temperature = 0.015;
        cfg.strategy.n_q = 4;
        cfg.strategy.window = 4;
    } else if (name == "pa10k") {
        cfg.graph = {GraphSpec::Kind::PreferentialAttachment, 10000, 3, 1, {}};
        cfg.placement.centrality = CentralityKind::Degree;
        cfg.strategy.temperature = 0.03;
        cfg.strategy.n_q = 5;
        cfg.strategy.window = 5;
    } else if (name == "fb-ego") {
        cfg.graph.kind = GraphSpec::Kind::File;
        cfg.graph.path = "facebook_combined.txt";
        cfg.strategy.temperature = 0.015;
        cfg.strategy.n_q = 5;
        cfg.strategy.window = 5;
    } else {
        throw InvalidArgument("unknown preset: " + std::string(name));
    }
    return cfg;
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const SimConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(config_to_json(cfg).dump())));
    return buf;
}

}  // namespace opmax
