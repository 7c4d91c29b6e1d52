#include "adlab/emit.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "adlab/config.hpp"
#include "adlab/version.hpp"

namespace adlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("emit: cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out) throw std::runtime_error("emit: write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    write_atomic(path, out.str());
}

void emit_json(const std::string& path, const nlohmann::ordered_json& j) {
    write_atomic(path, j.dump(2) + "\n");
}

void write_meta_sidecar(const std::string& out_path, const RunConfig& cfg, double wall_seconds,
                        const std::string& command) {
    nlohmann::ordered_json meta;
    meta["version"] = ADLAB_VERSION;
    meta["command"] = command;
    const std::string canon = cfg.to_json().dump();
    std::ostringstream hash;
    hash << std::hex << std::hash<std::string>{}(canon);
    meta["config_hash"] = hash.str();
    meta["wall_time_s"] = wall_seconds;
    emit_json(out_path + ".meta.json", meta);
}

}  // namespace adlab
