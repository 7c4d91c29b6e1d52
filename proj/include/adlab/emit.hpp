#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace adlab {

struct RunConfig;

/// Full double precision (17 significant digits), deterministic.
std::string format_double(double v);

/// Whole-file atomic write: temp file in the same directory, then rename.
void write_atomic(const std::string& path, const std::string& content);

/// CSV with a header row always present; cells pre-formatted.
void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows);

void emit_json(const std::string& path, const nlohmann::ordered_json& j);

/// Run metadata goes to <out>.meta.json, never into the data file.
void write_meta_sidecar(const std::string& out_path, const RunConfig& cfg, double wall_seconds,
                        const std::string& command);

}  // namespace adlab
