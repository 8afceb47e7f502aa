#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "opmax/engine.hpp"

namespace opmax {

// Shortest round-trip decimal form.
std::string format_double(double x);

// Writes to a sibling temp file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

std::string trace_csv(const Trace& trace);
nlohmann::json trace_json(const Trace& trace);
nlohmann::json summary_json(const SimConfig& cfg, const Summary& summary, double runtime_seconds);

std::string trace_stem(const Trace& trace);  // trace_<hash>_r<index>

// Renders every output in memory first; files are only created once all of
// them rendered without error.
void write_run_outputs(const std::filesystem::path& dir, const SimConfig& cfg, std::span<const Trace> traces,
                       double runtime_seconds);

}  // namespace opmax
