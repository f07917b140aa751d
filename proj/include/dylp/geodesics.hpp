#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dylp/dyngraph.hpp"

namespace dylp::geodesics {

/// Hop distances from `source`. Nodes beyond `max_depth` (when positive) or
/// unreachable are absent.
std::map<NodeId, int> bfs_distances(const Adjacency& graph, NodeId source, int max_depth = 0);

/// Distance of a candidate pair at a cutoff: hop count on the undirected
/// union graph, nullopt when unreachable. On directed networks distance 1
/// is reserved for previously observed ordered pairs; a pair seen only in
/// the reverse direction is placed at distance 2.
std::optional<int> pair_distance(const PairHistory& history, NodePair pair);

/// Calls fn(pair, distance) for every candidate pair at the history's
/// cutoff, distance as in pair_distance. Pairs arrive grouped by source in
/// ascending order.
void for_each_pair_distance(const PairHistory& history,
                            const std::function<void(NodePair, std::optional<int>)>& fn);

struct DistanceBucket {
    std::string label;
    int min_distance = 0;   // 0 for the unreachable bucket
    bool unreachable = false;
    std::uint64_t pairs = 0;
    std::uint64_t edges_formed = 0;
};

/// Buckets 1 .. d_max-1, ">=d_max" and "inf".
struct DistanceHistogram {
    int d_max = 6;
    std::vector<DistanceBucket> buckets;

    std::uint64_t total_pairs() const;
    std::uint64_t total_edges_formed() const;
    /// Share of formed edges in bucket i; 0 when no edge formed at all.
    double fraction_of_edges(std::size_t i) const;
    /// edges_formed / pairs, nullopt for an empty bucket.
    std::optional<double> edge_probability(std::size_t i) const;

    void merge(const DistanceHistogram& other);
};

DistanceHistogram empty_histogram(int d_max);

/// Histogram for one target step: candidate pairs at the history's cutoff,
/// labeled by the edges of `target`.
DistanceHistogram step_distance_stats(const PairHistory& history, const Snapshot& target, int d_max,
                                      unsigned threads = 1);

/// Aggregate over target steps 2..T. Throws InsufficientHistoryError when
/// T < 2 and RangeError when d_max < 2.
DistanceHistogram distance_stratified_stats(const DynamicNetwork& network, int d_max = 6, unsigned threads = 1);

/// Columns: distance, pairs, edges_formed, fraction_of_edges, edge_probability.
void write_histogram_csv(std::ostream& out, const DistanceHistogram& histogram);
nlohmann::json to_json(const DistanceHistogram& histogram);

}  // namespace dylp::geodesics
