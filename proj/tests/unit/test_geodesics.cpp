#include <doctest.h>

#include <random>
#include <sstream>

#include "dylp/error.hpp"
#include "dylp/geodesics.hpp"
#include "dylp/harness.hpp"
#include "support.hpp"

using namespace dylp;
using namespace dylp::geodesics;
using dylp::testing::make_network;

namespace {

// Smallest l with A^l[u][v] > 0 by boolean matrix powers.
std::vector<std::vector<int>> matrix_power_distances(const Adjacency& g) {
    const std::size_t n = g.num_nodes();
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0)), next;
    for (std::size_t i = 0; i < n; ++i) {
        dist[i][i] = 0;
        reach[i][i] = 1;
    }
    for (std::size_t l = 1; l < n; ++l) {
        next.assign(n, std::vector<char>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (reach[i][k])
                    for (NodeId j : g.neighbors(static_cast<NodeId>(k))) next[i][j] = 1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (next[i][j] && dist[i][j] < 0) dist[i][j] = static_cast<int>(l);
        reach.swap(next);
    }
    return dist;
}

}  // namespace

TEST_CASE("bfs on a path") {
    const std::vector<NodePair> path{{0, 1}, {1, 2}};
    const auto g = Adjacency::from_pairs(4, path, true);
    const auto d = bfs_distances(g, 0);
    CHECK(d.at(0) == 0);
    CHECK(d.at(2) == 2);
    CHECK(d.find(3) == d.end());
    CHECK(bfs_distances(g, 0, 1).count(2) == 0);
    CHECK_THROWS_AS(bfs_distances(g, 9), RangeError);
}

TEST_CASE("bfs agrees with matrix powers") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 8; ++rep) {
        const NodeId n = 10 + static_cast<NodeId>(rep * 5);
        std::uniform_int_distribution<NodeId> node(0, n - 1);
        std::vector<NodePair> pairs;
        for (NodeId i = 0; i < n; ++i) {
            const NodeId a = node(rng), b = node(rng);
            if (a != b) pairs.push_back({a, b});
        }
        const auto g = Adjacency::from_pairs(n, pairs, true);
        const auto oracle = matrix_power_distances(g);
        for (NodeId s = 0; s < n; ++s) {
            const auto d = bfs_distances(g, s);
            for (NodeId v = 0; v < n; ++v) {
                const auto it = d.find(v);
                CHECK((it == d.end() ? -1 : it->second) == oracle[s][v]);
            }
        }
    }
}

TEST_CASE("toy histogram") {
    // a=0 b=1 c=2: step 1 path a-b-c, step 2 edge (a,c) at distance 2
    const auto net = make_network(false, 3, {{{0, 1}, {1, 2}}, {{0, 2}}});
    const auto h = distance_stratified_stats(net, 4);
    REQUIRE(h.buckets.size() == 5);
    CHECK(h.buckets[0].label == "1");
    CHECK(h.buckets[3].label == ">=4");
    CHECK(h.buckets[4].label == "inf");
    CHECK(h.fraction_of_edges(1) == 1.0);
    CHECK(h.buckets[0].pairs == 2);
    CHECK(h.buckets[1].pairs == 1);
    CHECK(h.edge_probability(1) == 1.0);
    CHECK(!h.edge_probability(2).has_value());

    CHECK_THROWS_AS(distance_stratified_stats(make_network(false, 3, {{{0, 1}}})), InsufficientHistoryError);
    CHECK_THROWS_AS(empty_histogram(1), RangeError);
}

TEST_CASE("histogram invariants on random networks") {
    std::mt19937_64 rng(8);
    for (bool directed : {false, true}) {
        std::uniform_int_distribution<NodeId> node(0, 39);
        std::vector<testing::EdgeList> steps(5);
        for (auto& s : steps)
            for (int i = 0; i < 35; ++i) s.push_back({node(rng), node(rng)});
        const auto net = make_network(directed, 40, steps);
        const auto h = distance_stratified_stats(net, 5, 2);

        std::uint64_t candidates = 0;
        for (int t = 1; t < net.num_steps(); ++t) candidates += harness::CandidateSet(net, t).size();
        CHECK(h.total_pairs() == candidates);

        double fraction = 0.0;
        for (std::size_t i = 0; i < h.buckets.size(); ++i) {
            fraction += h.fraction_of_edges(i);
            if (h.buckets[i].pairs > 0) {
                CHECK(*h.edge_probability(i) ==
                      static_cast<double>(h.buckets[i].edges_formed) / static_cast<double>(h.buckets[i].pairs));
            }
        }
        if (h.total_edges_formed() > 0) CHECK(fraction == doctest::Approx(1.0));

        CHECK(distance_stratified_stats(net, 5, 1).buckets[2].pairs == h.buckets[2].pairs);

        for (int t = 1; t < net.num_steps(); ++t) {
            const PairHistory hist(net, t);
            for_each_pair_distance(hist, [&](NodePair p, std::optional<int> d) {
                CHECK((d == 1) == hist.was_previously_observed(p));
            });
        }
    }
}

TEST_CASE("histogram csv") {
    const auto net = make_network(false, 3, {{{0, 1}, {1, 2}}, {{0, 2}}});
    std::ostringstream out;
    write_histogram_csv(out, distance_stratified_stats(net, 3));
    CHECK(out.str().rfind("distance,pairs,edges_formed,fraction_of_edges,edge_probability\n", 0) == 0);
    CHECK(to_json(distance_stratified_stats(net, 3)).is_object());
}
