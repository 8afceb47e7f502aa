#include "opmax/io.hpp"

#include <charconv>
#include <fstream>
#include <system_error>
#include <utility>
#include <vector>

#include "opmax/config.hpp"
#include "opmax/error.hpp"

namespace opmax {

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, end);
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            std::error_code ignore;
            std::filesystem::remove(tmp, ignore);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string trace_csv(const Trace& trace) {
    std::string out = "t,class,total_opinion\n";
    for (std::size_t t = 0; t < trace.totals.size(); ++t) {
        for (std::size_t c = 0; c < trace.totals[t].size(); ++c) {
            out += std::to_string(t);
            out += ',';
            out += std::to_string(c);
            out += ',';
            out += format_double(trace.totals[t][c]);
            out += '\n';
        }
    }
    return out;
}

namespace {

nlohmann::json matrix_json(const BeliefMatrix& m) {
    auto rows = nlohmann::json::array();
    for (NodeId v = 0; v < m.nodes(); ++v) {
        auto r = m.row(v);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

}  // namespace

nlohmann::json trace_json(const Trace& trace) {
    nlohmann::json j;
    j["config_hash"] = trace.config_hash;
    j["seed"] = trace.seed;
    j["replication"] = trace.replication;
    j["horizon"] = trace.totals.empty() ? 0 : trace.totals.size() - 1;
    j["classes"] = trace.mean_alpha.size();
    j["roles"] = {{"smart_source", trace.roles.smart_source}, {"random_sources", trace.roles.random_sources}};
    j["final_alpha"] = matrix_json(trace.final_alpha);
    j["mean_alpha"] = trace.mean_alpha;
    j["final_totals"] = trace.totals.empty() ? std::vector<double>{} : trace.totals.back();
    auto snaps = nlohmann::json::object();
    for (const auto& [t, m] : trace.snapshots) snaps[std::to_string(t)] = matrix_json(m);
    j["snapshots"] = snaps;
    j["counted_deliveries"] = trace.counted_deliveries;
    j["seen_entries"] = trace.seen_entries;
    return j;
}

nlohmann::json summary_json(const SimConfig& cfg, const Summary& summary, double runtime_seconds) {
    nlohmann::json j;
    j["config"] = config_to_json(cfg);
    j["config_hash"] = summary.config_hash;
    j["replications"] = summary.count;
    j["per_class_final_mean"] = summary.final_mean;
    j["per_class_final_std"] = summary.final_std;
    j["runtime_seconds"] = runtime_seconds;
    return j;
}

std::string trace_stem(const Trace& trace) {
    return "trace_" + trace.config_hash + "_r" + std::to_string(trace.replication);
}

void write_run_outputs(const std::filesystem::path& dir, const SimConfig& cfg, std::span<const Trace> traces,
                       double runtime_seconds) {
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    for (const Trace& t : traces) {
        const std::string stem = trace_stem(t);
        files.emplace_back(dir / (stem + ".csv"), trace_csv(t));
        files.emplace_back(dir / (stem + ".json"), trace_json(t).dump(1) + "\n");
    }
    files.emplace_back(dir / "summary.json", summary_json(cfg, aggregate(traces), runtime_seconds).dump(2) + "\n");
    std::filesystem::create_directories(dir);
    for (const auto& [path, body] : files) write_atomic(path, body);
}

}  // namespace opmax
