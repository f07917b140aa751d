#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dylp/dyngraph.hpp"

namespace dylp::predictors {

enum class Kind { ts_adj, cumulative, ts_aa, ts_katz, random };

std::string_view to_string(Kind kind);
/// Throws ConfigError on an unknown name.
Kind parse_kind(std::string_view name);

struct PredictorConfig {
    Kind kind = Kind::ts_adj;
    double decay = 0.5;
    double katz_beta = 0.05;
    int katz_max_length = 4;
    std::uint64_t seed = 0;
    /// Display name; defaults to the kind's name.
    std::string label;

    std::string name() const { return label.empty() ? std::string(to_string(kind)) : label; }
    /// Throws ConfigError on out-of-range hyperparameters.
    void validate() const;
    nlohmann::json to_json() const;
    /// Reads `kind`, `decay`, `katz_beta`, `katz_max_length`, `seed`,
    /// `label`; missing keys keep their defaults.
    static PredictorConfig from_json(const nlohmann::json& j);
};

struct ScoreEntry {
    std::uint64_t key = 0;  // NodePair::key() of the canonical pair
    double score = 0.0;
};

/// Predictor output for one target step. Stored sparsely: candidate pairs
/// without an entry score exactly 0.
class ScoreSet {
public:
    ScoreSet() = default;
    /// `entries` must be sorted by key without duplicates.
    ScoreSet(int time_step, bool directed, std::vector<ScoreEntry> entries);

    int time_step() const { return time_step_; }
    bool directed() const { return directed_; }
    double score(NodePair p) const;
    std::span<const ScoreEntry> entries() const { return entries_; }
    /// Entries whose canonical pair starts at u.
    std::span<const ScoreEntry> row(NodeId u) const;

private:
    int time_step_ = 0;
    bool directed_ = false;
    std::vector<ScoreEntry> entries_;
};

/// decay * observation + (1 - decay) * prev_score.
double ewma_update(double prev_score, double observation, double decay);

/// EWMA over a whole series, initialized at the first observation.
std::vector<double> ewma_series(std::span<const double> observations, double decay);

/// Adamic-Adar index on an undirected (symmetric) adjacency.
double adamic_adar(const Adjacency& graph, NodeId u, NodeId v);

/// Sum over l = 1..max_length of beta^l times the number of length-l walks
/// from u to v. Directed adjacency gives directed walks. Throws RangeError
/// on invalid parameters and std::overflow_error on a non-finite result.
double truncated_katz(const Adjacency& graph, NodeId u, NodeId v, double beta, int max_length);

/// A predictor fed one snapshot at a time, t = 1, 2, ...; after observing
/// step t it scores the candidate pairs for step t + 1.
class Predictor {
public:
    virtual ~Predictor() = default;

    virtual void observe(const DynamicNetwork& network, int t) = 0;
    /// `history` must be at the last observed step.
    virtual ScoreSet scores(const PairHistory& history) const = 0;

    int observed_steps() const { return observed_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

protected:
    int observed_ = 0;
    std::vector<std::string> warnings_;
};

std::unique_ptr<Predictor> make_predictor(const PredictorConfig& config, unsigned threads = 1);

/// Scores for step cutoff + 1 from steps 1..cutoff.
ScoreSet predict(const DynamicNetwork& network, int cutoff, const PredictorConfig& config, unsigned threads = 1);

ScoreSet predict_ts_adj(const DynamicNetwork& network, int cutoff, const PredictorConfig& config);
ScoreSet predict_cumulative(const DynamicNetwork& network, int cutoff, const PredictorConfig& config);
ScoreSet predict_ts_aa(const DynamicNetwork& network, int cutoff, const PredictorConfig& config);
ScoreSet predict_ts_katz(const DynamicNetwork& network, int cutoff, const PredictorConfig& config);
ScoreSet predict_random(const DynamicNetwork& network, int cutoff, const PredictorConfig& config);

}  // namespace dylp::predictors
