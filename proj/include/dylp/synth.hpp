#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "dylp/dyngraph.hpp"

namespace dylp::synth {

/// Dynamic block model with edge churn: step 1 draws every pair from its
/// class-pair probability; afterwards an existing edge survives with
/// `persist_prob`, and any pair that is not carried over (absent, or an
/// edge that failed to persist) is re-sampled from its block probability.
struct SynthConfig {
    NodeId num_nodes = 100;
    int num_steps = 5;
    int num_classes = 1;
    /// Class of each node; empty means contiguous, nearly equal blocks.
    std::vector<int> class_assignment;
    /// One num_classes x num_classes matrix per step, or a single matrix
    /// used at every step.
    std::vector<std::vector<std::vector<double>>> block_prob{{{0.05}}};
    double persist_prob = 0.5;
    std::uint64_t seed = 1;
    bool directed = false;

    /// Throws ConfigError.
    void validate() const;
    int class_of(NodeId u) const;
    double probability(int step, int class_u, int class_v) const;

    nlohmann::json to_json() const;
    /// `block_prob` may be a number (single class), a matrix, or a list of
    /// per-step matrices. Throws ConfigError.
    static SynthConfig from_json(const nlohmann::json& j);
};

/// Deterministic for a fixed seed.
DynamicNetwork generate(const SynthConfig& config);

}  // namespace dylp::synth
