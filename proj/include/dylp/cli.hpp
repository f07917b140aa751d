#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dylp/dyngraph.hpp"

namespace dylp::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int { ok = 0, failure = 1, usage_error = 2, undefined_metrics = 3 };

struct RunManifest {
    std::string tool_version{kVersion};
    std::string config_hash;
    nlohmann::json dataset;
    std::string created_at;

    nlohmann::json to_json() const;
};

/// 16-hex FNV-1a of the compact JSON dump.
std::string config_hash(const nlohmann::json& config);
/// ISO 8601 UTC; honors SOURCE_DATE_EPOCH so reruns can be byte-identical.
std::string timestamp_now();
RunManifest make_manifest(const nlohmann::json& config, const DynamicNetwork* network);

/// Expands dotted top-level keys ("predictor.kind") into nested objects.
nlohmann::json unflatten_keys(const nlohmann::json& j);
/// Reads a JSON config file. Throws IoError / ConfigError.
nlohmann::json load_config(const std::string& path);

/// `--threads` value after the DYLP_THREADS override; 0 means all cores.
unsigned effective_threads(unsigned requested);

/// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace dylp::cli
