#include "dylp/network_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "dylp/error.hpp"

namespace dylp::io {

void write_network(std::ostream& out, const DynamicNetwork& network) {
    out << fmt::format("dyln v1 {} {} {}\n", network.directed() ? "directed" : "undirected", network.num_nodes(),
                       network.num_steps());
    for (const auto& s : network.snapshots()) {
        for (const auto& e : s.edges()) out << s.time_step() << ' ' << e.u << ' ' << e.v << '\n';
    }
}

DynamicNetwork read_network(std::istream& in, std::vector<std::string> labels) {
    std::string line;
    if (!std::getline(in, line)) throw StructuralError("empty network file");
    std::istringstream header(line);
    std::string magic, version, kind;
    long long num_nodes = -1, num_steps = -1;
    header >> magic >> version >> kind >> num_nodes >> num_steps;
    if (magic != "dyln" || version != "v1" || (kind != "directed" && kind != "undirected") || num_nodes < 0 ||
        num_steps < 0 || num_nodes > 0xffffffffLL) {
        throw StructuralError(fmt::format("bad network header '{}'", line));
    }
    const bool directed = kind == "directed";

    std::vector<SnapshotSpec> specs(static_cast<std::size_t>(num_steps));
    for (int t = 1; t <= num_steps; ++t) specs[static_cast<std::size_t>(t - 1)].time_step = t;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        long long t = 0, u = -1, v = -1;
        if (!(fields >> t >> u >> v) || t < 1 || t > num_steps || u < 0 || v < 0 || u >= num_nodes ||
            v >= num_nodes) {
            throw StructuralError(fmt::format("bad edge line {}: '{}'", line_no, line));
        }
        specs[static_cast<std::size_t>(t - 1)].edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    }
    auto built = build_network(std::move(specs), directed, static_cast<NodeId>(num_nodes), std::move(labels));
    return std::move(built.network);
}

std::filesystem::path labels_path(const std::filesystem::path& network_path) {
    auto p = network_path;
    p += ".labels.csv";
    return p;
}

void save_network(const std::filesystem::path& path, const DynamicNetwork& network) {
    std::ofstream out(path);
    if (!out) throw IoError(fmt::format("cannot write network file '{}'", path.string()));
    write_network(out, network);
    if (!out) throw IoError(fmt::format("error writing '{}'", path.string()));
    if (network.has_labels()) {
        std::ofstream lab(labels_path(path));
        if (!lab) throw IoError(fmt::format("cannot write label file '{}'", labels_path(path).string()));
        lab << "id,label\n";
        for (NodeId u = 0; u < network.num_nodes(); ++u) lab << u << ',' << network.labels()[u] << '\n';
    }
}

DynamicNetwork load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open network file '{}'", path.string()));
    std::vector<std::string> labels;
    if (std::ifstream lab(labels_path(path)); lab) {
        std::string line;
        std::getline(lab, line);  // header
        while (std::getline(lab, line)) {
            if (line.empty()) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos) throw StructuralError(fmt::format("bad label line '{}'", line));
            const auto id = std::stoull(line.substr(0, comma));
            if (id != labels.size()) throw StructuralError("label file ids must be dense and in order");
            labels.push_back(line.substr(comma + 1));
        }
    }
    return read_network(in, std::move(labels));
}

void write_prebinned_edges(std::ostream& out, const DynamicNetwork& network) {
    for (const auto& s : network.snapshots()) {
        for (const auto& e : s.edges()) {
            out << network.label(e.u) << ' ' << network.label(e.v) << ' ' << s.time_step() << '\n';
        }
    }
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string network_fingerprint(const DynamicNetwork& network) {
    std::ostringstream canonical_form;
    write_network(canonical_form, network);
    return fmt::format("{:016x}", fnv1a64(canonical_form.str()));
}

}  // namespace dylp::io
