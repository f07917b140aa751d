#include "dylp/synth.hpp"

#include <algorithm>
#include <random>

#include <fmt/format.h>

#include "dylp/error.hpp"

namespace dylp::synth {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void SynthConfig::validate() const {
    if (num_steps < 1) throw ConfigError("num_steps must be >= 1");
    if (num_classes < 1) throw ConfigError("num_classes must be >= 1");
    if (!valid_probability(persist_prob)) throw ConfigError(fmt::format("persist_prob {} outside [0,1]", persist_prob));
    if (!class_assignment.empty()) {
        if (class_assignment.size() != num_nodes) {
            throw ConfigError(fmt::format("class_assignment has {} entries for {} nodes", class_assignment.size(),
                                          num_nodes));
        }
        for (int c : class_assignment) {
            if (c < 0 || c >= num_classes) throw ConfigError(fmt::format("class {} outside 0..{}", c, num_classes - 1));
        }
    }
    if (block_prob.size() != 1 && block_prob.size() != static_cast<std::size_t>(num_steps)) {
        throw ConfigError(fmt::format("block_prob needs 1 or {} matrices, got {}", num_steps, block_prob.size()));
    }
    for (const auto& m : block_prob) {
        if (m.size() != static_cast<std::size_t>(num_classes)) throw ConfigError("block_prob matrix must be square in num_classes");
        for (const auto& row : m) {
            if (row.size() != static_cast<std::size_t>(num_classes)) {
                throw ConfigError("block_prob matrix must be square in num_classes");
            }
            for (double p : row) {
                if (!valid_probability(p)) throw ConfigError(fmt::format("block probability {} outside [0,1]", p));
            }
        }
    }
}

int SynthConfig::class_of(NodeId u) const {
    if (!class_assignment.empty()) return class_assignment[u];
    return static_cast<int>(std::uint64_t{u} * static_cast<std::uint64_t>(num_classes) / std::max<NodeId>(num_nodes, 1));
}

double SynthConfig::probability(int step, int class_u, int class_v) const {
    const auto& m = block_prob.size() == 1 ? block_prob[0] : block_prob[static_cast<std::size_t>(step - 1)];
    return m[static_cast<std::size_t>(class_u)][static_cast<std::size_t>(class_v)];
}

nlohmann::json SynthConfig::to_json() const {
    return {{"num_nodes", num_nodes},           {"num_steps", num_steps}, {"num_classes", num_classes},
            {"class_assignment", class_assignment}, {"block_prob", block_prob}, {"persist_prob", persist_prob},
            {"seed", seed},                     {"directed", directed}};
}

SynthConfig SynthConfig::from_json(const nlohmann::json& j) {
    SynthConfig c;
    try {
        if (j.contains("num_nodes")) c.num_nodes = j.at("num_nodes").get<NodeId>();
        if (j.contains("num_steps")) c.num_steps = j.at("num_steps").get<int>();
        if (j.contains("num_classes")) c.num_classes = j.at("num_classes").get<int>();
        if (j.contains("class_assignment")) c.class_assignment = j.at("class_assignment").get<std::vector<int>>();
        if (j.contains("persist_prob")) c.persist_prob = j.at("persist_prob").get<double>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("directed")) c.directed = j.at("directed").get<bool>();
        if (j.contains("block_prob")) {
            const auto& b = j.at("block_prob");
            if (b.is_number()) {
                c.block_prob = {{{b.get<double>()}}};
            } else if (b.is_array() && !b.empty() && b[0].is_array() && !b[0].empty() && b[0][0].is_number()) {
                c.block_prob = {b.get<std::vector<std::vector<double>>>()};
            } else {
                c.block_prob = b.get<std::vector<std::vector<std::vector<double>>>>();
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("bad synth config: {}", e.what()));
    }
    c.validate();
    return c;
}

DynamicNetwork generate(const SynthConfig& config) {
    config.validate();
    const NodeId n = config.num_nodes;
    std::vector<int> cls(n);
    for (NodeId u = 0; u < n; ++u) cls[u] = config.class_of(u);

    std::mt19937_64 rng(config.seed);
    std::vector<SnapshotSpec> specs;
    std::vector<NodePair> previous;  // sorted
    for (int t = 1; t <= config.num_steps; ++t) {
        std::vector<NodePair> edges;
        std::size_t cursor = 0;
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v = config.directed ? 0 : u + 1; v < n; ++v) {
                if (u == v) continue;
                const NodePair p{u, v};
                while (cursor < previous.size() && previous[cursor] < p) ++cursor;
                const bool existed = cursor < previous.size() && previous[cursor] == p;
                // A surviving edge persists; every other pair is re-sampled.
                const double block = config.probability(t, cls[u], cls[v]);
                const double threshold = existed ? config.persist_prob + (1.0 - config.persist_prob) * block : block;
                if (uniform01(rng) < threshold) edges.push_back(p);
            }
        }
        previous = edges;
        specs.push_back({t, std::move(edges), config.directed});
    }
    auto built = build_network(std::move(specs), config.directed, n);
    return std::move(built.network);
}

}  // namespace dylp::synth
