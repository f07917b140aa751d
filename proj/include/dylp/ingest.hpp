#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dylp/dyngraph.hpp"

namespace dylp::ingest {

/// One timestamped interaction, or a pre-binned edge when the timestamp
/// column already holds the step.
struct RawEvent {
    std::string src;
    std::string dst;
    std::int64_t timestamp = 0;

    bool operator==(const RawEvent&) const = default;
};

struct ParseResult {
    std::vector<RawEvent> events;
    std::size_t malformed_lines = 0;
};

/// Reads `src dst timestamp` lines separated by commas, tabs or spaces.
/// Blank lines and lines starting with '#' are skipped; lines with the wrong
/// field count or a non-integer / negative timestamp are counted as
/// malformed.
ParseResult parse_events(std::istream& in);
/// Throws IoError if the file cannot be opened.
ParseResult parse_events_file(const std::filesystem::path& path);

struct IngestConfig {
    /// Ignored when `prebinned`.
    std::int64_t bin_width_seconds = 90 * 86400;
    std::int64_t origin_epoch_seconds = 0;
    /// End of the trace. When set, bins that extend past it are incomplete
    /// and dropped; otherwise every bin up to the last event is kept.
    std::optional<std::int64_t> end_epoch_seconds;
    bool prebinned = false;
    bool directed = false;
    std::uint64_t min_total_degree = 0;
    bool drop_isolated = false;
    /// Apply the degree filter once instead of repeating it to a fixpoint.
    bool filter_single_pass = false;

    /// Throws ConfigError.
    void validate() const;
    nlohmann::json to_json() const;
    /// Missing keys keep their defaults. Throws ConfigError.
    static IngestConfig from_json(const nlohmann::json& j);
};

struct BinResult {
    DynamicNetwork network;
    std::size_t events_dropped = 0;
    std::size_t self_loops_dropped = 0;
};

/// Maps each event into step floor((ts - origin) / width) + 1 (or the
/// step column verbatim when pre-binned), densifying node ids in order of
/// first appearance. Throws EmptyNetworkError when no event survives.
BinResult bin_events(std::span<const RawEvent> events, const IngestConfig& config);

/// Removes low-degree nodes from the aggregated network and, with
/// `drop_isolated`, nodes without any edge. Ids are re-densified in their
/// original order; labels follow their nodes.
DynamicNetwork filter_nodes(const DynamicNetwork& network, const IngestConfig& config);

struct StepSummary {
    int step = 0;
    std::size_t edges = 0;
    double edge_prob = 0.0;
    std::size_t new_edges = 0;
    std::size_t prev_edges = 0;
    std::optional<double> new_edge_prob;
    std::optional<double> prev_edge_prob;
    /// Fraction of the previous step's edges absent at this step.
    std::optional<double> deletion_rate;
};

struct NetworkSummary {
    std::vector<StepSummary> steps;
    // Means over steps 2..T.
    double mean_edges = 0.0;
    double mean_edge_prob = 0.0;
    std::optional<double> mean_new_edge_prob;
    std::optional<double> mean_prev_edge_prob;
    std::optional<double> mean_deletion_rate;
};

/// Per-step edge statistics. Throws InsufficientHistoryError when T < 2.
NetworkSummary summarize(const DynamicNetwork& network);

/// Columns: step, edges, edge_prob, new_edge_prob, prev_edge_prob,
/// deletion_rate; undefined cells are empty and a final `mean` row follows.
void write_summary_csv(std::ostream& out, const NetworkSummary& summary);

nlohmann::json to_json(const NetworkSummary& summary);

}  // namespace dylp::ingest
