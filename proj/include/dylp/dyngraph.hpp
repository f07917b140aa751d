#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dylp {

/// Dense index into a network's node registry, 0..num_nodes-1.
using NodeId = std::uint32_t;

/// A node pair. For undirected networks the canonical form has u < v.
struct NodePair {
    NodeId u = 0;
    NodeId v = 0;

    constexpr std::uint64_t key() const { return (std::uint64_t{u} << 32) | v; }
    static constexpr NodePair from_key(std::uint64_t key) {
        return {static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu)};
    }
    constexpr NodePair reversed() const { return {v, u}; }

    auto operator<=>(const NodePair&) const = default;
};

constexpr NodePair canonical(NodePair p, bool directed) {
    if (!directed && p.v < p.u) return p.reversed();
    return p;
}

/// Compressed sparse row adjacency. Rows are sorted and free of duplicates.
class Adjacency {
public:
    Adjacency() = default;

    /// Builds rows from a pair list. With `symmetric`, each pair (u,v) also
    /// inserts (v,u).
    static Adjacency from_pairs(NodeId num_nodes, std::span<const NodePair> pairs, bool symmetric);

    NodeId num_nodes() const { return static_cast<NodeId>(offsets_.empty() ? 0 : offsets_.size() - 1); }
    std::span<const NodeId> neighbors(NodeId u) const {
        return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }
    std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
    std::size_t num_entries() const { return targets_.size(); }
    std::size_t max_degree() const;
    bool contains(NodeId u, NodeId v) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
};

/// Edge set of one time step. Edges are canonical, sorted and unique.
class Snapshot {
public:
    Snapshot(int time_step, bool directed, std::vector<NodePair> edges);

    int time_step() const { return time_step_; }
    bool directed() const { return directed_; }
    std::span<const NodePair> edges() const { return edges_; }
    std::size_t num_edges() const { return edges_.size(); }
    bool contains(NodePair p) const;

private:
    int time_step_;
    bool directed_;
    std::vector<NodePair> edges_;
};

/// Snapshot sequence for t = 1..T over a fixed node registry.
///
/// Immutable after construction. Per-step adjacency is precomputed so that
/// concurrent readers never mutate shared state.
class DynamicNetwork {
public:
    DynamicNetwork(NodeId num_nodes, bool directed, std::vector<Snapshot> snapshots,
                   std::vector<std::string> labels = {});

    NodeId num_nodes() const { return num_nodes_; }
    bool directed() const { return directed_; }
    int num_steps() const { return static_cast<int>(snapshots_.size()); }

    /// 1-based time step.
    const Snapshot& snapshot(int t) const;
    std::span<const Snapshot> snapshots() const { return snapshots_; }

    /// Out-adjacency of step t; symmetric for undirected networks.
    const Adjacency& adjacency(int t) const;

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<std::string>& labels() const { return labels_; }
    /// External identifier of a node, or its decimal id when unlabeled.
    std::string label(NodeId id) const;

    std::size_t total_edges() const;
    /// Number of ordered (directed) or unordered (undirected) pairs of
    /// distinct registered nodes.
    std::uint64_t pair_universe_size() const;

private:
    NodeId num_nodes_;
    bool directed_;
    std::vector<Snapshot> snapshots_;
    std::vector<Adjacency> adjacency_;
    std::vector<std::string> labels_;
};

/// One entry of the input to build_network.
struct SnapshotSpec {
    int time_step = 1;
    std::vector<NodePair> edges;
    /// Declared directedness; must agree with the network's when present.
    std::optional<bool> directed;
};

struct BuildStats {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_collapsed = 0;
};

struct BuildResult {
    DynamicNetwork network;
    BuildStats stats;
};

/// Validates and assembles a network. `num_nodes` defaults to one past the
/// largest endpoint. Throws StructuralError on non-contiguous steps,
/// directedness mismatch, or endpoints outside the registry.
BuildResult build_network(std::vector<SnapshotSpec> snapshots, bool directed,
                          std::optional<NodeId> num_nodes = std::nullopt,
                          std::vector<std::string> labels = {});

/// Aggregate view of a network through a cutoff step: the union of all
/// edges at steps <= cutoff and the nodes incident to any of them.
///
/// Holds a reference to the network, which must outlive it.
class PairHistory {
public:
    PairHistory(const DynamicNetwork& network, int cutoff);

    const DynamicNetwork& network() const { return *network_; }
    int cutoff() const { return cutoff_; }

    bool was_previously_observed(NodePair p) const;
    bool is_seen(NodeId id) const { return seen_mask_[id] != 0; }
    /// Sorted ascending.
    std::span<const NodeId> seen_nodes() const { return seen_nodes_; }
    std::size_t num_union_edges() const { return num_union_edges_; }

    /// Out-adjacency of the union graph (symmetric when undirected).
    const Adjacency& union_graph() const { return union_; }
    /// Symmetrized union graph, used for geodesic distances.
    const Adjacency& undirected_union() const { return directed_ ? undirected_union_ : union_; }

private:
    const DynamicNetwork* network_;
    int cutoff_;
    bool directed_;
    std::size_t num_union_edges_ = 0;
    Adjacency union_;
    Adjacency undirected_union_;
    std::vector<std::uint8_t> seen_mask_;
    std::vector<NodeId> seen_nodes_;
};

/// Throws RangeError unless 1 <= cutoff <= T.
PairHistory pair_history(const DynamicNetwork& network, int cutoff);

}  // namespace dylp
