#include "dylp/dyngraph.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "dylp/error.hpp"

namespace dylp {

Adjacency Adjacency::from_pairs(NodeId num_nodes, std::span<const NodePair> pairs, bool symmetric) {
    Adjacency adj;
    adj.offsets_.assign(std::size_t{num_nodes} + 1, 0);
    for (const auto& p : pairs) {
        ++adj.offsets_[p.u + 1];
        if (symmetric) ++adj.offsets_[p.v + 1];
    }
    std::partial_sum(adj.offsets_.begin(), adj.offsets_.end(), adj.offsets_.begin());
    adj.targets_.resize(adj.offsets_.back());
    std::vector<std::size_t> cursor(adj.offsets_.begin(), adj.offsets_.end() - 1);
    for (const auto& p : pairs) {
        adj.targets_[cursor[p.u]++] = p.v;
        if (symmetric) adj.targets_[cursor[p.v]++] = p.u;
    }

    // sort rows and squeeze out duplicates
    std::size_t write = 0;
    std::size_t row_begin = 0;
    for (NodeId u = 0; u < num_nodes; ++u) {
        const std::size_t row_end = adj.offsets_[u + 1];
        auto first = adj.targets_.begin() + static_cast<std::ptrdiff_t>(row_begin);
        auto last = adj.targets_.begin() + static_cast<std::ptrdiff_t>(row_end);
        std::sort(first, last);
        last = std::unique(first, last);
        adj.offsets_[u] = write;
        for (auto it = first; it != last; ++it) adj.targets_[write++] = *it;
        row_begin = row_end;
    }
    adj.offsets_[num_nodes] = write;
    adj.targets_.resize(write);
    return adj;
}

std::size_t Adjacency::max_degree() const {
    std::size_t best = 0;
    for (NodeId u = 0; u < num_nodes(); ++u) best = std::max(best, degree(u));
    return best;
}

bool Adjacency::contains(NodeId u, NodeId v) const {
    const auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
}

Snapshot::Snapshot(int time_step, bool directed, std::vector<NodePair> edges)
    : time_step_(time_step), directed_(directed), edges_(std::move(edges)) {
    for (auto& e : edges_) e = canonical(e, directed_);
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool Snapshot::contains(NodePair p) const {
    return std::binary_search(edges_.begin(), edges_.end(), canonical(p, directed_));
}

DynamicNetwork::DynamicNetwork(NodeId num_nodes, bool directed, std::vector<Snapshot> snapshots,
                               std::vector<std::string> labels)
    : num_nodes_(num_nodes), directed_(directed), snapshots_(std::move(snapshots)), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != num_nodes_) {
        throw StructuralError(fmt::format("label table has {} entries for {} nodes", labels_.size(), num_nodes_));
    }
    adjacency_.reserve(snapshots_.size());
    for (std::size_t i = 0; i < snapshots_.size(); ++i) {
        const auto& s = snapshots_[i];
        if (s.time_step() != static_cast<int>(i) + 1) {
            throw StructuralError(fmt::format("snapshot {} has time step {}, expected {}", i, s.time_step(), i + 1));
        }
        if (s.directed() != directed_) throw StructuralError("snapshot directedness differs from network");
        for (const auto& e : s.edges()) {
            if (e.u >= num_nodes_ || e.v >= num_nodes_) {
                throw StructuralError(fmt::format("edge ({},{}) at step {} references an unregistered node", e.u,
                                                  e.v, s.time_step()));
            }
            if (e.u == e.v) throw StructuralError("self-loop in snapshot");
        }
        adjacency_.push_back(Adjacency::from_pairs(num_nodes_, s.edges(), !directed_));
    }
}

const Snapshot& DynamicNetwork::snapshot(int t) const {
    if (t < 1 || t > num_steps()) throw RangeError(fmt::format("time step {} outside 1..{}", t, num_steps()));
    return snapshots_[static_cast<std::size_t>(t - 1)];
}

const Adjacency& DynamicNetwork::adjacency(int t) const {
    if (t < 1 || t > num_steps()) throw RangeError(fmt::format("time step {} outside 1..{}", t, num_steps()));
    return adjacency_[static_cast<std::size_t>(t - 1)];
}

std::string DynamicNetwork::label(NodeId id) const {
    if (labels_.empty()) return std::to_string(id);
    return labels_.at(id);
}

std::size_t DynamicNetwork::total_edges() const {
    std::size_t total = 0;
    for (const auto& s : snapshots_) total += s.num_edges();
    return total;
}

std::uint64_t DynamicNetwork::pair_universe_size() const {
    const std::uint64_t n = num_nodes_;
    if (n < 2) return 0;
    return directed_ ? n * (n - 1) : n * (n - 1) / 2;
}

BuildResult build_network(std::vector<SnapshotSpec> snapshots, bool directed, std::optional<NodeId> num_nodes,
                          std::vector<std::string> labels) {
    std::sort(snapshots.begin(), snapshots.end(),
              [](const SnapshotSpec& a, const SnapshotSpec& b) { return a.time_step < b.time_step; });
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        const int expected = static_cast<int>(i) + 1;
        if (snapshots[i].time_step != expected) {
            throw StructuralError(
                fmt::format("time steps must form the contiguous range 1..{}; found step {} where {} was expected",
                            snapshots.size(), snapshots[i].time_step, expected));
        }
        if (snapshots[i].directed && *snapshots[i].directed != directed) {
            throw StructuralError(fmt::format("snapshot at step {} declares {} edges in a {} network", expected,
                                              *snapshots[i].directed ? "directed" : "undirected",
                                              directed ? "directed" : "undirected"));
        }
    }

    NodeId n = 0;
    if (num_nodes) {
        n = *num_nodes;
    } else {
        for (const auto& s : snapshots) {
            for (const auto& e : s.edges) n = std::max({n, e.u + 1, e.v + 1});
        }
        if (!labels.empty()) n = std::max(n, static_cast<NodeId>(labels.size()));
    }

    BuildStats stats;
    std::vector<Snapshot> built;
    built.reserve(snapshots.size());
    for (auto& s : snapshots) {
        std::vector<NodePair> kept;
        kept.reserve(s.edges.size());
        for (const auto& e : s.edges) {
            if (e.u >= n || e.v >= n) {
                throw StructuralError(fmt::format("edge ({},{}) at step {} references an unregistered node", e.u, e.v,
                                                  s.time_step));
            }
            if (e.u == e.v) {
                ++stats.self_loops_dropped;
                continue;
            }
            kept.push_back(e);
        }
        const std::size_t before = kept.size();
        Snapshot snap(s.time_step, directed, std::move(kept));
        stats.duplicates_collapsed += before - snap.num_edges();
        built.push_back(std::move(snap));
    }
    return {DynamicNetwork(n, directed, std::move(built), std::move(labels)), stats};
}

PairHistory::PairHistory(const DynamicNetwork& network, int cutoff)
    : network_(&network), cutoff_(cutoff), directed_(network.directed()) {
    if (cutoff < 1 || cutoff > network.num_steps()) {
        throw RangeError(fmt::format("cutoff {} outside 1..{}", cutoff, network.num_steps()));
    }
    std::vector<NodePair> all;
    for (int t = 1; t <= cutoff; ++t) {
        const auto edges = network.snapshot(t).edges();
        all.insert(all.end(), edges.begin(), edges.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    num_union_edges_ = all.size();

    const NodeId n = network.num_nodes();
    union_ = Adjacency::from_pairs(n, all, !directed_);
    if (directed_) undirected_union_ = Adjacency::from_pairs(n, all, true);

    seen_mask_.assign(n, 0);
    for (const auto& e : all) {
        seen_mask_[e.u] = 1;
        seen_mask_[e.v] = 1;
    }
    for (NodeId u = 0; u < n; ++u) {
        if (seen_mask_[u]) seen_nodes_.push_back(u);
    }
}

bool PairHistory::was_previously_observed(NodePair p) const {
    if (p.u >= union_.num_nodes() || p.v >= union_.num_nodes()) return false;
    return union_.contains(p.u, p.v);
}

PairHistory pair_history(const DynamicNetwork& network, int cutoff) { return PairHistory(network, cutoff); }

}  // namespace dylp
