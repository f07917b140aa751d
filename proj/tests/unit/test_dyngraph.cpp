#include <doctest.h>

#include <random>

#include "dylp/dyngraph.hpp"
#include "dylp/error.hpp"
#include "support.hpp"

using namespace dylp;
using dylp::testing::make_network;

TEST_CASE("build_network basics") {
    // a=0, b=1, c=2
    const auto net = make_network(false, 3, {{{0, 1}}, {{1, 2}}});
    CHECK(net.num_steps() == 2);
    CHECK(net.num_nodes() == 3);
    CHECK(PairHistory(net, 2).seen_nodes().size() == 3);
    CHECK(net.pair_universe_size() == 3);
}

TEST_CASE("self loops are dropped and counted") {
    std::vector<SnapshotSpec> specs{{1, {{0, 0}, {0, 1}}, std::nullopt}};
    const auto built = build_network(specs, false);
    CHECK(built.stats.self_loops_dropped == 1);
    CHECK(built.network.snapshot(1).num_edges() == 1);
}

TEST_CASE("structural errors") {
    std::vector<SnapshotSpec> gap{{1, {{0, 1}}, std::nullopt}, {3, {{1, 2}}, std::nullopt}};
    CHECK_THROWS_AS(build_network(gap, false), StructuralError);
    std::vector<SnapshotSpec> mismatch{{1, {{0, 1}}, true}};
    CHECK_THROWS_AS(build_network(mismatch, false), StructuralError);
    std::vector<SnapshotSpec> outside{{1, {{0, 5}}, std::nullopt}};
    CHECK_THROWS_AS(build_network(outside, false, NodeId{3}), StructuralError);
}

TEST_CASE("undirected snapshots are canonical and deduplicated") {
    const auto net = make_network(false, 3, {{{1, 0}, {0, 1}, {2, 1}}});
    const auto edges = net.snapshot(1).edges();
    REQUIRE(edges.size() == 2);
    CHECK(edges[0] == NodePair{0, 1});
    CHECK(edges[1] == NodePair{1, 2});
    CHECK(net.snapshot(1).contains({1, 0}));
}

TEST_CASE("pair history") {
    const auto net = make_network(false, 3, {{{0, 1}}, {}, {}});
    const PairHistory h(net, 3);
    CHECK(h.was_previously_observed({0, 1}));
    CHECK(h.was_previously_observed({1, 0}));
    CHECK(!h.was_previously_observed({0, 2}));
    CHECK(h.seen_nodes().size() == 2);
    CHECK_THROWS_AS(pair_history(net, 0), RangeError);
    CHECK_THROWS_AS(pair_history(net, 4), RangeError);

    const auto empty = make_network(false, 4, {{}, {}});
    const PairHistory e(empty, 2);
    CHECK(e.num_union_edges() == 0);
    CHECK(e.seen_nodes().empty());
}

TEST_CASE("directed pairs are ordered") {
    const auto net = make_network(true, 2, {{{0, 1}}, {}});
    const PairHistory h(net, 2);
    CHECK(h.was_previously_observed({0, 1}));
    CHECK(!h.was_previously_observed({1, 0}));
    CHECK(net.pair_universe_size() == 2);
}

TEST_CASE("history is monotone in the cutoff") {
    std::mt19937_64 rng(9);
    for (bool directed : {false, true}) {
        std::vector<testing::EdgeList> steps(6);
        std::uniform_int_distribution<NodeId> node(0, 19);
        for (auto& s : steps) {
            for (int i = 0; i < 15; ++i) s.push_back({node(rng), node(rng)});
        }
        const auto net = make_network(directed, 20, steps);
        for (int t = 2; t <= net.num_steps(); ++t) {
            const PairHistory before(net, t - 1), after(net, t);
            CHECK(after.num_union_edges() >= before.num_union_edges());
            CHECK(after.seen_nodes().size() >= before.seen_nodes().size());
            for (NodeId u = 0; u < 20; ++u) {
                if (before.is_seen(u)) CHECK(after.is_seen(u));
                for (NodeId v = 0; v < 20; ++v) {
                    if (u == v) continue;
                    if (before.was_previously_observed({u, v})) CHECK(after.was_previously_observed({u, v}));
                    if (!directed) {
                        CHECK(after.was_previously_observed({u, v}) == after.was_previously_observed({v, u}));
                    }
                }
            }
        }
    }
}

TEST_CASE("adjacency") {
    const std::vector<NodePair> pairs{{0, 1}, {0, 2}, {0, 1}, {2, 1}};
    const auto directed = Adjacency::from_pairs(3, pairs, false);
    CHECK(directed.degree(0) == 2);
    CHECK(directed.contains(2, 1));
    CHECK(!directed.contains(1, 2));
    const auto sym = Adjacency::from_pairs(3, pairs, true);
    CHECK(sym.degree(1) == 2);
    CHECK(sym.max_degree() == 2);
    CHECK(sym.num_entries() == 6);
}

TEST_CASE("labels") {
    std::vector<SnapshotSpec> specs{{1, {{0, 1}}, std::nullopt}};
    const auto net = build_network(specs, false, std::nullopt, {"alice", "bob"}).network;
    CHECK(net.label(1) == "bob");
    const auto unlabeled = make_network(false, 2, {{{0, 1}}});
    CHECK(unlabeled.label(1) == "1");
    CHECK_THROWS_AS(build_network(specs, false, std::nullopt, {"only-one"}), StructuralError);
}
