#include <doctest.h>

#include <sstream>

#include "dylp/error.hpp"
#include "dylp/ingest.hpp"
#include "support.hpp"

using namespace dylp;
using namespace dylp::ingest;
using dylp::testing::make_network;

namespace {

constexpr std::int64_t kDay = 86400;

ParseResult parse(const std::string& text) {
    std::istringstream in(text);
    return parse_events(in);
}

}  // namespace

TEST_CASE("parse_events") {
    const auto r = parse("u1 u2 100\n# comment\n\nu1 u2 abc\na,b,5\nc\td\t7\nx y\nx y -3\n");
    REQUIRE(r.events.size() == 3);
    CHECK(r.events[0] == RawEvent{"u1", "u2", 100});
    CHECK(r.events[1] == RawEvent{"a", "b", 5});
    CHECK(r.events[2] == RawEvent{"c", "d", 7});
    CHECK(r.malformed_lines == 3);
    CHECK_THROWS_AS(parse_events_file("/nonexistent/events.txt"), IoError);
}

TEST_CASE("bin_events floor rule") {
    IngestConfig cfg;
    const std::vector<RawEvent> ev{{"a", "b", 0}, {"b", "c", 89 * kDay}, {"a", "c", 90 * kDay}};
    const auto r = bin_events(ev, cfg);
    CHECK(r.network.num_steps() == 2);
    CHECK(r.network.snapshot(1).num_edges() == 2);
    CHECK(r.network.snapshot(2).num_edges() == 1);
    CHECK(r.network.label(0) == "a");
}

TEST_CASE("bin_events drops events outside the window and collapses duplicates") {
    IngestConfig cfg;
    cfg.bin_width_seconds = 10;
    cfg.origin_epoch_seconds = 100;
    cfg.end_epoch_seconds = 129;  // bins [100,110) [110,120) [120,130) complete
    const std::vector<RawEvent> ev{{"a", "b", 50},  {"a", "b", 100}, {"b", "a", 105}, {"b", "c", 125},
                                   {"c", "d", 135}, {"e", "e", 101}};
    const auto r = bin_events(ev, cfg);
    CHECK(r.network.num_steps() == 3);
    CHECK(r.events_dropped == 2);
    CHECK(r.self_loops_dropped == 1);
    CHECK(r.network.snapshot(1).num_edges() == 1);
    CHECK(r.network.snapshot(2).num_edges() == 0);
    CHECK(r.network.snapshot(3).num_edges() == 1);

    const std::vector<RawEvent> early{{"a", "b", 5}};
    CHECK_THROWS_AS(bin_events(early, cfg), EmptyNetworkError);
}

TEST_CASE("binning is exhaustive and exclusive") {
    IngestConfig cfg;
    cfg.bin_width_seconds = 7;
    std::vector<RawEvent> ev;
    for (int i = 0; i < 200; ++i) ev.push_back({std::to_string(i), std::to_string(i + 1), i * 3});
    const auto r = bin_events(ev, cfg);
    std::size_t total = 0;
    for (const auto& s : r.network.snapshots()) total += s.num_edges();
    CHECK(total + r.events_dropped == ev.size());
    CHECK(r.events_dropped == 0);
}

TEST_CASE("prebinned input") {
    IngestConfig cfg;
    cfg.prebinned = true;
    const std::vector<RawEvent> ev{{"a", "b", 1}, {"b", "c", 2}};
    const auto r = bin_events(ev, cfg);
    CHECK(r.network.num_steps() == 2);
    const std::vector<RawEvent> zero{{"a", "b", 0}};
    CHECK_THROWS(bin_events(zero, cfg));
}

TEST_CASE("filter_nodes") {
    // undirected degrees in the union: 0:3 1:2 2:2 3:1, node 4 isolated
    const auto net = make_network(false, 5, {{{0, 1}, {0, 2}}, {{1, 2}, {0, 3}}});
    IngestConfig identity;
    const auto same = filter_nodes(net, identity);
    CHECK(same.num_nodes() == 5);
    CHECK(same.total_edges() == net.total_edges());

    IngestConfig iso;
    iso.drop_isolated = true;
    CHECK(filter_nodes(net, iso).num_nodes() == 4);

    IngestConfig thr;
    thr.min_total_degree = 2;
    const auto f = filter_nodes(net, thr);
    CHECK(f.num_nodes() == 3);
    CHECK(f.total_edges() == 3);
    CHECK(filter_nodes(f, thr).num_nodes() == f.num_nodes());

    SUBCASE("directed rule needs both in and out below the threshold") {
        // 0 -> 1, 0 -> 2, 1 -> 2: out(0)=2, in(2)=2, node 1 has in=1 out=1
        const auto d = make_network(true, 3, {{{0, 1}, {0, 2}, {1, 2}}});
        IngestConfig c;
        c.min_total_degree = 2;
        c.filter_single_pass = true;
        const auto kept = filter_nodes(d, c);
        CHECK(kept.num_nodes() == 2);
    }
}

TEST_CASE("summarize two-step example") {
    const auto net = make_network(false, 3, {{{0, 1}}, {{0, 1}}});
    const auto s = summarize(net);
    REQUIRE(s.steps.size() == 2);
    CHECK(s.steps[1].prev_edge_prob == 1.0);
    CHECK(s.steps[1].new_edge_prob == 0.0);
    CHECK(s.steps[1].deletion_rate == 0.0);
    CHECK(!s.steps[0].new_edge_prob.has_value());
    CHECK(s.steps[1].edge_prob == doctest::Approx(1.0 / 3.0));

    CHECK_THROWS_AS(summarize(make_network(false, 3, {{{0, 1}}})), InsufficientHistoryError);
}

TEST_CASE("summary mean edge probability identity") {
    const auto net = make_network(false, 6, {{{0, 1}}, {{1, 2}, {2, 3}}, {{0, 5}}, {{3, 4}, {4, 5}, {0, 1}}});
    const auto s = summarize(net);
    double edges = 0;
    for (int t = 2; t <= net.num_steps(); ++t) edges += static_cast<double>(net.snapshot(t).num_edges());
    CHECK(s.mean_edge_prob ==
          doctest::Approx(edges / ((net.num_steps() - 1) * static_cast<double>(net.pair_universe_size()))));

    std::ostringstream csv;
    write_summary_csv(csv, s);
    CHECK(csv.str().rfind("step,edges,edge_prob,new_edge_prob,prev_edge_prob,deletion_rate\n", 0) == 0);
    CHECK(csv.str().find("\nmean,") != std::string::npos);
}

TEST_CASE("config json") {
    auto c = IngestConfig::from_json({{"bin_width_seconds", 60}, {"directed", true}, {"min_total_degree", 30}});
    CHECK(c.bin_width_seconds == 60);
    CHECK(c.directed);
    CHECK(IngestConfig::from_json(c.to_json()).min_total_degree == 30);
    CHECK_THROWS_AS(IngestConfig::from_json({{"bin_width_seconds", 0}}), ConfigError);
    CHECK_THROWS_AS(IngestConfig::from_json({{"directed", "yes"}}), ConfigError);
    CHECK(IngestConfig::from_json({{"bin_width_seconds", "prebinned"}}).prebinned);
    CHECK_THROWS_AS(IngestConfig::from_json({{"bin_width_seconds", "weekly"}}), ConfigError);
}
