#include <doctest.h>

#include <cmath>

#include "dylp/error.hpp"
#include "dylp/ingest.hpp"
#include "dylp/network_io.hpp"
#include "dylp/synth.hpp"

using namespace dylp;
using namespace dylp::synth;

TEST_CASE("complete and empty extremes") {
    SynthConfig full;
    full.num_nodes = 12;
    full.num_steps = 3;
    full.block_prob = {{{1.0}}};
    const auto net = generate(full);
    for (const auto& s : net.snapshots()) CHECK(s.num_edges() == 66);

    SynthConfig none = full;
    none.block_prob = {{{0.0}}};
    none.persist_prob = 0.9;
    CHECK(generate(none).total_edges() == 0);
}

TEST_CASE("step-one density is within three binomial deviations") {
    SynthConfig c;
    c.num_nodes = 200;
    c.num_steps = 1;
    c.block_prob = {{{0.1}}};
    const double pairs = 200.0 * 199.0 / 2.0;
    const double sd = std::sqrt(pairs * 0.1 * 0.9);
    for (std::uint64_t seed : {1, 2, 3}) {
        c.seed = seed;
        const double edges = static_cast<double>(generate(c).total_edges());
        CHECK(std::abs(edges - 0.1 * pairs) <= 3.0 * sd);
    }
}

TEST_CASE("block structure and persistence") {
    SynthConfig c;
    c.num_nodes = 40;
    c.num_steps = 2;
    c.num_classes = 2;
    c.block_prob = {{{1.0, 0.0}, {0.0, 1.0}}};
    const auto net = generate(c);
    for (const auto& e : net.snapshot(1).edges()) CHECK(c.class_of(e.u) == c.class_of(e.v));
    CHECK(net.snapshot(1).num_edges() == 2 * 190);

    SynthConfig sticky;
    sticky.num_nodes = 30;
    sticky.num_steps = 4;
    sticky.block_prob = {{{0.2}}, {{0.0}}, {{0.0}}, {{0.0}}};
    sticky.persist_prob = 1.0;
    const auto s = generate(sticky);
    CHECK(s.snapshot(4).num_edges() == s.snapshot(1).num_edges());
}

TEST_CASE("deterministic under a fixed seed") {
    SynthConfig c;
    c.seed = 77;
    CHECK(io::network_fingerprint(generate(c)) == io::network_fingerprint(generate(c)));
    SynthConfig d = c;
    d.seed = 78;
    CHECK(io::network_fingerprint(generate(c)) != io::network_fingerprint(generate(d)));
}

TEST_CASE("config validation and json forms") {
    CHECK_THROWS_AS(SynthConfig::from_json({{"persist_prob", 1.5}}), ConfigError);
    CHECK_THROWS_AS(SynthConfig::from_json({{"num_classes", 2}, {"block_prob", 0.1}}), ConfigError);
    CHECK_THROWS_AS(SynthConfig::from_json({{"num_steps", 3}, {"block_prob", {{{0.1}}, {{0.1}}}}}), ConfigError);
    CHECK_THROWS_AS(SynthConfig::from_json({{"num_nodes", 3}, {"class_assignment", {0, 0}}}), ConfigError);
    const auto c = SynthConfig::from_json({{"num_classes", 2}, {"block_prob", {{0.1, 0.0}, {0.0, 0.2}}}});
    CHECK(c.probability(1, 1, 1) == 0.2);
    CHECK(SynthConfig::from_json(c.to_json()).probability(3, 0, 0) == 0.1);
}

TEST_CASE("prebinned output round-trips through ingest") {
    SynthConfig c;
    c.num_nodes = 50;
    c.num_steps = 4;
    c.seed = 3;
    const auto net = generate(c);
    std::stringstream buf;
    io::write_prebinned_edges(buf, net);
    const auto parsed = ingest::parse_events(buf);
    CHECK(parsed.malformed_lines == 0);
    ingest::IngestConfig ic;
    ic.prebinned = true;
    const auto back = ingest::bin_events(parsed.events, ic).network;
    REQUIRE(back.num_steps() == net.num_steps());
    for (int t = 1; t <= net.num_steps(); ++t) {
        REQUIRE(back.snapshot(t).num_edges() == net.snapshot(t).num_edges());
        for (const auto& e : back.snapshot(t).edges()) {
            const NodePair orig{static_cast<NodeId>(std::stoul(back.label(e.u))),
                                static_cast<NodeId>(std::stoul(back.label(e.v)))};
            CHECK(net.snapshot(t).contains(orig));
        }
    }
}
