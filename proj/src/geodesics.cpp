#include "dylp/geodesics.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "dylp/error.hpp"
#include "dylp/parallel.hpp"

namespace dylp::geodesics {

namespace {

constexpr int kUnreached = -1;

// Dense BFS with scratch reuse across sources.
class Bfs {
public:
    explicit Bfs(const Adjacency& graph) : graph_(graph), dist_(graph.num_nodes(), kUnreached) {}

    void run(NodeId source, int max_depth = 0) {
        for (NodeId v : visited_) dist_[v] = kUnreached;
        visited_.clear();
        dist_[source] = 0;
        visited_.push_back(source);
        for (std::size_t head = 0; head < visited_.size(); ++head) {
            const NodeId x = visited_[head];
            const int d = dist_[x];
            if (max_depth > 0 && d >= max_depth) continue;
            for (NodeId y : graph_.neighbors(x)) {
                if (dist_[y] != kUnreached) continue;
                dist_[y] = d + 1;
                visited_.push_back(y);
            }
        }
    }

    int distance(NodeId v) const { return dist_[v]; }
    const std::vector<NodeId>& visited() const { return visited_; }

private:
    const Adjacency& graph_;
    std::vector<int> dist_;
    std::vector<NodeId> visited_;
};

std::optional<int> classify(const PairHistory& history, NodePair p, int hops) {
    if (hops == kUnreached) return std::nullopt;
    if (!history.network().directed()) return hops;
    if (history.was_previously_observed(p)) return 1;
    return std::max(hops, 2);
}

std::size_t bucket_index(const std::optional<int>& distance, int d_max) {
    if (!distance) return static_cast<std::size_t>(d_max);  // "inf"
    return static_cast<std::size_t>(std::min(*distance, d_max) - 1);
}

template <class Fn>
void visit_source_pairs(const PairHistory& history, Bfs& bfs, std::size_t source_index, Fn&& fn) {
    const auto seen = history.seen_nodes();
    const bool directed = history.network().directed();
    const NodeId u = seen[source_index];
    bfs.run(u);
    for (std::size_t j = directed ? 0 : source_index + 1; j < seen.size(); ++j) {
        if (j == source_index) continue;
        const NodePair p{u, seen[j]};
        fn(p, classify(history, p, bfs.distance(p.v)));
    }
}

}  // namespace

std::map<NodeId, int> bfs_distances(const Adjacency& graph, NodeId source, int max_depth) {
    if (source >= graph.num_nodes()) throw RangeError(fmt::format("source {} is not a registered node", source));
    Bfs bfs(graph);
    bfs.run(source, max_depth);
    std::map<NodeId, int> out;
    for (NodeId v : bfs.visited()) out.emplace(v, bfs.distance(v));
    return out;
}

std::optional<int> pair_distance(const PairHistory& history, NodePair pair) {
    const auto& graph = history.undirected_union();
    Bfs bfs(graph);
    bfs.run(pair.u);
    return classify(history, pair, bfs.distance(pair.v));
}

void for_each_pair_distance(const PairHistory& history,
                            const std::function<void(NodePair, std::optional<int>)>& fn) {
    Bfs bfs(history.undirected_union());
    for (std::size_t i = 0; i < history.seen_nodes().size(); ++i) visit_source_pairs(history, bfs, i, fn);
}

std::uint64_t DistanceHistogram::total_pairs() const {
    std::uint64_t total = 0;
    for (const auto& b : buckets) total += b.pairs;
    return total;
}

std::uint64_t DistanceHistogram::total_edges_formed() const {
    std::uint64_t total = 0;
    for (const auto& b : buckets) total += b.edges_formed;
    return total;
}

double DistanceHistogram::fraction_of_edges(std::size_t i) const {
    const std::uint64_t total = total_edges_formed();
    return total == 0 ? 0.0 : static_cast<double>(buckets.at(i).edges_formed) / static_cast<double>(total);
}

std::optional<double> DistanceHistogram::edge_probability(std::size_t i) const {
    const auto& b = buckets.at(i);
    if (b.pairs == 0) return std::nullopt;
    return static_cast<double>(b.edges_formed) / static_cast<double>(b.pairs);
}

void DistanceHistogram::merge(const DistanceHistogram& other) {
    if (other.d_max != d_max || other.buckets.size() != buckets.size()) {
        throw std::invalid_argument("cannot merge histograms with different bucketing");
    }
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        buckets[i].pairs += other.buckets[i].pairs;
        buckets[i].edges_formed += other.buckets[i].edges_formed;
    }
}

DistanceHistogram empty_histogram(int d_max) {
    if (d_max < 2) throw RangeError(fmt::format("d_max must be >= 2, got {}", d_max));
    DistanceHistogram h;
    h.d_max = d_max;
    for (int d = 1; d < d_max; ++d) h.buckets.push_back({std::to_string(d), d, false, 0, 0});
    h.buckets.push_back({fmt::format(">={}", d_max), d_max, false, 0, 0});
    h.buckets.push_back({"inf", 0, true, 0, 0});
    return h;
}

DistanceHistogram step_distance_stats(const PairHistory& history, const Snapshot& target, int d_max,
                                      unsigned threads) {
    const std::size_t sources = history.seen_nodes().size();
    const std::size_t chunks = chunk_count(sources, threads);
    std::vector<DistanceHistogram> parts(chunks, empty_histogram(d_max));
    const auto& union_graph = history.undirected_union();
    const NodeId n = history.network().num_nodes();
    const Adjacency target_adj = Adjacency::from_pairs(n, target.edges(), !target.directed());

    parallel_chunks(sources, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
        Bfs bfs(union_graph);
        std::vector<std::uint8_t> formed(n, 0);
        auto& hist = parts[c];
        for (std::size_t i = begin; i < end; ++i) {
            const NodeId u = history.seen_nodes()[i];
            for (NodeId v : target_adj.neighbors(u)) formed[v] = 1;
            visit_source_pairs(history, bfs, i, [&](NodePair p, std::optional<int> d) {
                auto& bucket = hist.buckets[bucket_index(d, d_max)];
                ++bucket.pairs;
                if (formed[p.v]) ++bucket.edges_formed;
            });
            for (NodeId v : target_adj.neighbors(u)) formed[v] = 0;
        }
    });

    DistanceHistogram out = empty_histogram(d_max);
    for (const auto& p : parts) out.merge(p);
    return out;
}

DistanceHistogram distance_stratified_stats(const DynamicNetwork& network, int d_max, unsigned threads) {
    if (network.num_steps() < 2) {
        throw InsufficientHistoryError(
            fmt::format("distance statistics need at least 2 steps, network has {}", network.num_steps()));
    }
    DistanceHistogram total = empty_histogram(d_max);
    for (int t = 1; t < network.num_steps(); ++t) {
        const PairHistory history(network, t);
        total.merge(step_distance_stats(history, network.snapshot(t + 1), d_max, threads));
    }
    return total;
}

void write_histogram_csv(std::ostream& out, const DistanceHistogram& h) {
    out << "distance,pairs,edges_formed,fraction_of_edges,edge_probability\n";
    for (std::size_t i = 0; i < h.buckets.size(); ++i) {
        const auto& b = h.buckets[i];
        const auto prob = h.edge_probability(i);
        out << fmt::format("{},{},{},{},{}\n", b.label, b.pairs, b.edges_formed, h.fraction_of_edges(i),
                           prob ? fmt::format("{}", *prob) : std::string());
    }
}

nlohmann::json to_json(const DistanceHistogram& h) {
    nlohmann::json buckets = nlohmann::json::array();
    for (std::size_t i = 0; i < h.buckets.size(); ++i) {
        const auto& b = h.buckets[i];
        const auto prob = h.edge_probability(i);
        buckets.push_back({{"distance", b.label},
                           {"pairs", b.pairs},
                           {"edges_formed", b.edges_formed},
                           {"fraction_of_edges", h.fraction_of_edges(i)},
                           {"edge_probability", prob ? nlohmann::json(*prob) : nlohmann::json(nullptr)}});
    }
    return {{"d_max", h.d_max}, {"buckets", buckets}};
}

}  // namespace dylp::geodesics
