#include "dylp/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <unordered_map>

#include <fmt/format.h>

#include "dylp/error.hpp"

namespace dylp::ingest {

namespace {

bool is_separator(char c) { return c == ',' || c == '\t' || c == ' ' || c == '\r'; }

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_separator(line[i])) ++i;
        if (i == line.size()) break;
        std::size_t j = i;
        while (j < line.size() && !is_separator(line[j])) ++j;
        fields.push_back(line.substr(i, j - i));
        i = j;
    }
    return fields;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

std::string_view trim_leading(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

}  // namespace

ParseResult parse_events(std::istream& in) {
    ParseResult result;
    std::string line;
    while (std::getline(in, line)) {
        const auto view = trim_leading(line);
        if (view.empty() || view.front() == '#' || view == "\r") continue;
        const auto fields = split_fields(view);
        if (fields.empty()) continue;
        if (fields.size() != 3) {
            ++result.malformed_lines;
            continue;
        }
        const auto ts = parse_int(fields[2]);
        if (!ts || *ts < 0) {
            ++result.malformed_lines;
            continue;
        }
        result.events.push_back({std::string(fields[0]), std::string(fields[1]), *ts});
    }
    if (in.bad()) throw IoError("error while reading event stream");
    return result;
}

ParseResult parse_events_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open event file '{}'", path.string()));
    return parse_events(in);
}

void IngestConfig::validate() const {
    if (!prebinned && bin_width_seconds <= 0) {
        throw ConfigError(fmt::format("bin_width_seconds must be > 0, got {}", bin_width_seconds));
    }
    if (end_epoch_seconds && *end_epoch_seconds < origin_epoch_seconds) {
        throw ConfigError("end_epoch_seconds precedes origin_epoch_seconds");
    }
}

nlohmann::json IngestConfig::to_json() const {
    nlohmann::json j{{"bin_width_seconds", bin_width_seconds},
                     {"origin_epoch_seconds", origin_epoch_seconds},
                     {"prebinned", prebinned},
                     {"directed", directed},
                     {"min_total_degree", min_total_degree},
                     {"drop_isolated", drop_isolated},
                     {"filter_single_pass", filter_single_pass}};
    j["end_epoch_seconds"] = end_epoch_seconds ? nlohmann::json(*end_epoch_seconds) : nlohmann::json(nullptr);
    return j;
}

IngestConfig IngestConfig::from_json(const nlohmann::json& j) {
    IngestConfig c;
    try {
        if (j.contains("bin_width_seconds") && j.at("bin_width_seconds").is_string()) {
            const auto w = j.at("bin_width_seconds").get<std::string>();
            if (w != "prebinned" && w != "pre-binned") throw ConfigError(fmt::format("bad bin_width_seconds '{}'", w));
            c.prebinned = true;
        } else {
            read_key(j, "bin_width_seconds", c.bin_width_seconds);
        }
        read_key(j, "origin_epoch_seconds", c.origin_epoch_seconds);
        if (j.contains("end_epoch_seconds") && !j.at("end_epoch_seconds").is_null()) {
            c.end_epoch_seconds = j.at("end_epoch_seconds").get<std::int64_t>();
        }
        read_key(j, "prebinned", c.prebinned);
        read_key(j, "directed", c.directed);
        read_key(j, "min_total_degree", c.min_total_degree);
        read_key(j, "drop_isolated", c.drop_isolated);
        read_key(j, "filter_single_pass", c.filter_single_pass);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("bad ingest config: {}", e.what()));
    }
    c.validate();
    return c;
}

BinResult bin_events(std::span<const RawEvent> events, const IngestConfig& config) {
    config.validate();
    if (events.empty()) throw EmptyNetworkError("no events to bin");

    std::int64_t last_step = 0;
    if (!config.prebinned && config.end_epoch_seconds) {
        // Complete bins end at or before the trace end.
        last_step = (*config.end_epoch_seconds - config.origin_epoch_seconds + 1) / config.bin_width_seconds;
    }

    auto step_of = [&](const RawEvent& e) -> std::int64_t {
        if (config.prebinned) return e.timestamp >= 1 ? e.timestamp : 0;
        if (e.timestamp < config.origin_epoch_seconds) return 0;
        const std::int64_t step = (e.timestamp - config.origin_epoch_seconds) / config.bin_width_seconds + 1;
        if (config.end_epoch_seconds && step > last_step) return 0;
        return step;
    };

    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::string> labels;
    auto intern = [&](const std::string& name) {
        auto [it, inserted] = ids.try_emplace(name, static_cast<NodeId>(labels.size()));
        if (inserted) labels.push_back(name);
        return it->second;
    };

    std::map<std::int64_t, std::vector<NodePair>> by_step;
    std::size_t dropped = 0;
    for (const auto& e : events) {
        const std::int64_t step = step_of(e);
        if (step == 0) {
            ++dropped;
            continue;
        }
        const NodeId u = intern(e.src);
        const NodeId v = intern(e.dst);
        by_step[step].push_back({u, v});
    }
    if (by_step.empty()) throw EmptyNetworkError("every event falls outside the binning window");

    const std::int64_t num_steps = by_step.rbegin()->first;
    std::vector<SnapshotSpec> specs(static_cast<std::size_t>(num_steps));
    for (std::int64_t t = 1; t <= num_steps; ++t) specs[static_cast<std::size_t>(t - 1)].time_step = static_cast<int>(t);
    for (auto& [t, edges] : by_step) specs[static_cast<std::size_t>(t - 1)].edges = std::move(edges);

    const auto n = static_cast<NodeId>(labels.size());
    auto built = build_network(std::move(specs), config.directed, n, std::move(labels));
    return {std::move(built.network), dropped, built.stats.self_loops_dropped};
}

DynamicNetwork filter_nodes(const DynamicNetwork& network, const IngestConfig& config) {
    const NodeId n = network.num_nodes();
    std::vector<std::uint8_t> keep(n, 1);

    // Aggregated edge set over all steps.
    std::vector<NodePair> aggregate;
    for (const auto& s : network.snapshots()) aggregate.insert(aggregate.end(), s.edges().begin(), s.edges().end());
    std::sort(aggregate.begin(), aggregate.end());
    aggregate.erase(std::unique(aggregate.begin(), aggregate.end()), aggregate.end());

    const std::uint64_t threshold = config.min_total_degree;
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<std::uint64_t> out_deg(n, 0), in_deg(n, 0);
        for (const auto& e : aggregate) {
            if (!keep[e.u] || !keep[e.v]) continue;
            ++out_deg[e.u];
            ++in_deg[e.v];
        }
        for (NodeId u = 0; u < n; ++u) {
            if (!keep[u]) continue;
            bool remove = false;
            if (network.directed()) {
                remove = out_deg[u] < threshold && in_deg[u] < threshold;
            } else {
                remove = out_deg[u] + in_deg[u] < threshold;
            }
            if (config.drop_isolated && out_deg[u] + in_deg[u] == 0) remove = true;
            if (remove) {
                keep[u] = 0;
                changed = true;
            }
        }
        if (config.filter_single_pass) break;
    }

    std::vector<NodeId> remap(n, 0);
    std::vector<std::string> labels;
    NodeId next = 0;
    for (NodeId u = 0; u < n; ++u) {
        if (!keep[u]) continue;
        remap[u] = next++;
        if (network.has_labels()) labels.push_back(network.labels()[u]);
    }

    std::vector<Snapshot> snapshots;
    snapshots.reserve(static_cast<std::size_t>(network.num_steps()));
    for (const auto& s : network.snapshots()) {
        std::vector<NodePair> edges;
        for (const auto& e : s.edges()) {
            if (keep[e.u] && keep[e.v]) edges.push_back({remap[e.u], remap[e.v]});
        }
        snapshots.emplace_back(s.time_step(), network.directed(), std::move(edges));
    }
    return DynamicNetwork(next, network.directed(), std::move(snapshots), std::move(labels));
}

NetworkSummary summarize(const DynamicNetwork& network) {
    const int T = network.num_steps();
    if (T < 2) throw InsufficientHistoryError(fmt::format("summary needs at least 2 steps, network has {}", T));
    const auto universe = static_cast<double>(network.pair_universe_size());

    NetworkSummary summary;
    std::vector<NodePair> seen;  // union through t - 1, sorted
    double sum_new = 0.0, sum_prev = 0.0, sum_del = 0.0;
    int count_new = 0, count_prev = 0, count_del = 0;
    double sum_edges = 0.0, sum_prob = 0.0;

    for (int t = 1; t <= T; ++t) {
        const auto edges = network.snapshot(t).edges();
        StepSummary row;
        row.step = t;
        row.edges = edges.size();
        row.edge_prob = universe > 0 ? static_cast<double>(row.edges) / universe : 0.0;
        if (t >= 2) {
            for (const auto& e : edges) {
                if (std::binary_search(seen.begin(), seen.end(), e)) ++row.prev_edges;
                else ++row.new_edges;
            }
            const double never_seen = universe - static_cast<double>(seen.size());
            if (never_seen > 0) row.new_edge_prob = static_cast<double>(row.new_edges) / never_seen;
            if (!seen.empty()) row.prev_edge_prob = static_cast<double>(row.prev_edges) / static_cast<double>(seen.size());
            const auto before = network.snapshot(t - 1).edges();
            if (!before.empty()) {
                std::size_t deleted = 0;
                for (const auto& e : before) {
                    if (!std::binary_search(edges.begin(), edges.end(), e)) ++deleted;
                }
                row.deletion_rate = static_cast<double>(deleted) / static_cast<double>(before.size());
            }

            sum_edges += static_cast<double>(row.edges);
            sum_prob += row.edge_prob;
            if (row.new_edge_prob) sum_new += *row.new_edge_prob, ++count_new;
            if (row.prev_edge_prob) sum_prev += *row.prev_edge_prob, ++count_prev;
            if (row.deletion_rate) sum_del += *row.deletion_rate, ++count_del;
        }
        std::vector<NodePair> merged;
        merged.reserve(seen.size() + edges.size());
        std::set_union(seen.begin(), seen.end(), edges.begin(), edges.end(), std::back_inserter(merged));
        seen = std::move(merged);
        summary.steps.push_back(row);
    }

    const double steps = T - 1;
    summary.mean_edges = sum_edges / steps;
    summary.mean_edge_prob = sum_prob / steps;
    if (count_new) summary.mean_new_edge_prob = sum_new / count_new;
    if (count_prev) summary.mean_prev_edge_prob = sum_prev / count_prev;
    if (count_del) summary.mean_deletion_rate = sum_del / count_del;
    return summary;
}

void write_summary_csv(std::ostream& out, const NetworkSummary& summary) {
    auto cell = [](const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); };
    out << "step,edges,edge_prob,new_edge_prob,prev_edge_prob,deletion_rate\n";
    for (const auto& r : summary.steps) {
        out << fmt::format("{},{},{},{},{},{}\n", r.step, r.edges, r.edge_prob, cell(r.new_edge_prob),
                           cell(r.prev_edge_prob), cell(r.deletion_rate));
    }
    out << fmt::format("mean,{},{},{},{},{}\n", summary.mean_edges, summary.mean_edge_prob,
                       cell(summary.mean_new_edge_prob), cell(summary.mean_prev_edge_prob),
                       cell(summary.mean_deletion_rate));
}

nlohmann::json to_json(const NetworkSummary& summary) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& r : summary.steps) {
        steps.push_back({{"step", r.step},
                         {"edges", r.edges},
                         {"edge_prob", r.edge_prob},
                         {"new_edges", r.new_edges},
                         {"prev_edges", r.prev_edges},
                         {"new_edge_prob", opt(r.new_edge_prob)},
                         {"prev_edge_prob", opt(r.prev_edge_prob)},
                         {"deletion_rate", opt(r.deletion_rate)}});
    }
    return {{"steps", steps},
            {"mean_edges", summary.mean_edges},
            {"mean_edge_prob", summary.mean_edge_prob},
            {"mean_new_edge_prob", opt(summary.mean_new_edge_prob)},
            {"mean_prev_edge_prob", opt(summary.mean_prev_edge_prob)},
            {"mean_deletion_rate", opt(summary.mean_deletion_rate)}};
}

}  // namespace dylp::ingest
