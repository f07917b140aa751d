#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "dylp/error.hpp"
#include "dylp/network_io.hpp"
#include "support.hpp"

using namespace dylp;
using dylp::testing::make_network;

TEST_CASE("network text round trip") {
    for (bool directed : {false, true}) {
        const auto net = make_network(directed, 5, {{{0, 1}, {3, 2}}, {}, {{4, 0}}});
        std::stringstream buf;
        io::write_network(buf, net);
        const auto back = io::read_network(buf);
        CHECK(back.directed() == directed);
        CHECK(back.num_nodes() == 5);
        CHECK(back.num_steps() == 3);
        CHECK(io::network_fingerprint(back) == io::network_fingerprint(net));
    }
}

TEST_CASE("header is versioned") {
    const auto net = make_network(false, 2, {{{0, 1}}});
    std::ostringstream out;
    io::write_network(out, net);
    CHECK(out.str() == "dyln v1 undirected 2 1\n1 0 1\n");

    std::istringstream bad("dyln v2 undirected 2 1\n");
    CHECK_THROWS_AS(io::read_network(bad), StructuralError);
    std::istringstream bad_edge("dyln v1 undirected 2 1\n1 0 7\n");
    CHECK_THROWS_AS(io::read_network(bad_edge), StructuralError);
    std::istringstream bad_step("dyln v1 undirected 2 1\n2 0 1\n");
    CHECK_THROWS_AS(io::read_network(bad_step), StructuralError);
}

TEST_CASE("labels survive save and load") {
    std::vector<SnapshotSpec> specs{{1, {{0, 1}}, std::nullopt}, {2, {{1, 2}}, std::nullopt}};
    const auto net = build_network(specs, false, std::nullopt, {"x", "y,z", "w"}).network;
    const auto path = std::filesystem::temp_directory_path() / "dylp_io_test.net";
    io::save_network(path, net);
    const auto back = io::load_network(path);
    CHECK(back.label(1) == "y,z");
    CHECK(back.label(2) == "w");
    std::filesystem::remove(path);
    std::filesystem::remove(io::labels_path(path));
    CHECK_THROWS_AS(io::load_network(path), IoError);
}

TEST_CASE("fnv1a") {
    CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}
