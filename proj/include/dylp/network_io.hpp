#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "dylp/dyngraph.hpp"

namespace dylp::io {

/// Line-oriented network format:
///
///     dyln v1 <directed|undirected> <num_nodes> <num_steps>
///     t u v
///     ...
void write_network(std::ostream& out, const DynamicNetwork& network);
/// Throws StructuralError on a malformed header or edge line.
DynamicNetwork read_network(std::istream& in, std::vector<std::string> labels = {});

/// Sidecar next to a network file holding `id,label` rows.
std::filesystem::path labels_path(const std::filesystem::path& network_path);

/// Writes the network and, if it has labels, the sidecar. Throws IoError.
void save_network(const std::filesystem::path& path, const DynamicNetwork& network);
/// Reads the network and its sidecar when present. Throws IoError.
DynamicNetwork load_network(const std::filesystem::path& path);

/// Pre-binned edge list `src dst step` using node labels, as accepted by
/// ingest with `prebinned` set.
void write_prebinned_edges(std::ostream& out, const DynamicNetwork& network);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
/// Hex digest of the canonical serialization.
std::string network_fingerprint(const DynamicNetwork& network);

}  // namespace dylp::io
