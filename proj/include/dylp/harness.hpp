#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dylp/dyngraph.hpp"
#include "dylp/metrics.hpp"
#include "dylp/predictors.hpp"

namespace dylp::harness {

enum class Population { all = 0, new_links = 1, prev_links = 2 };
inline constexpr std::array<Population, 3> kPopulations{Population::all, Population::new_links,
                                                        Population::prev_links};
std::string_view to_string(Population p);

/// Evaluable pairs for target step cutoff + 1: all pairs of distinct nodes
/// seen by the cutoff, labeled from the target snapshot and flagged when
/// previously observed.
class CandidateSet {
public:
    /// Throws RangeError unless 1 <= cutoff <= T - 1.
    CandidateSet(const DynamicNetwork& network, int cutoff);

    int cutoff() const { return history_.cutoff(); }
    int target_step() const { return history_.cutoff() + 1; }
    const PairHistory& history() const { return history_; }
    std::span<const NodeId> nodes() const { return history_.seen_nodes(); }
    std::uint64_t size() const;

    bool contains(NodePair p) const;
    bool label(NodePair p) const;
    bool previously_observed(NodePair p) const { return history_.was_previously_observed(p); }

    /// Calls fn(pair, score, label, prev) for every candidate pair, grouped
    /// by source node in ascending order.
    template <class Fn>
    void scan(const predictors::ScoreSet& scores, Fn&& fn) const;

    void for_each(const std::function<void(NodePair, bool label, bool prev)>& fn) const;

private:
    PairHistory history_;
    Adjacency target_;
};

CandidateSet candidate_set(const DynamicNetwork& network, int cutoff);

struct EvaluationOptions {
    /// Adds precision@k and NDCG@k to every bundle.
    std::optional<std::uint64_t> k;
    unsigned threads = 1;
    bool keep_score_sets = false;
};

struct PopulationStep {
    std::uint64_t positives = 0;
    std::uint64_t negatives = 0;
    std::optional<double> auc;
    std::optional<double> prauc;
};

/// Per-step diagnostics; the headline numbers are the pooled ones.
struct StepBreakdown {
    int target_step = 0;
    std::uint64_t candidates = 0;
    std::array<PopulationStep, 3> populations;
};

struct MetricReport {
    std::array<metrics::MetricBundle, 3> populations;
    std::optional<double> gmauc;

    const metrics::MetricBundle& at(Population p) const { return populations[static_cast<std::size_t>(p)]; }
};

struct EvaluationRun {
    predictors::PredictorConfig predictor;
    std::vector<StepBreakdown> steps;
    MetricReport report;
    /// Pooled populations, indexed by Population.
    std::array<metrics::RankedScores, 3> pooled;
    std::vector<predictors::ScoreSet> score_sets;
    std::vector<std::string> warnings;
};

/// GMAUC from a report's stored new-link PRAUC, prev-link AUC and counts;
/// nullopt when any input is undefined.
std::optional<double> gmauc_from(const MetricReport& report);

/// Rolling one-step-forward evaluation over t = 1..T-1. When `score_dump`
/// is given, writes `step,u,v,score,label,prev_flag` rows for every pair.
/// Throws InsufficientHistoryError when T < 2.
EvaluationRun run_evaluation(const DynamicNetwork& network, const predictors::PredictorConfig& predictor,
                             const EvaluationOptions& options = {}, std::ostream* score_dump = nullptr);

struct ComparisonRow {
    std::string name;
    int rank = 0;
    EvaluationRun run;
};

/// One run per config, ranked by GMAUC descending (undefined last), ties
/// broken by name.
std::vector<ComparisonRow> compare_predictors(const DynamicNetwork& network,
                                              std::span<const predictors::PredictorConfig> configs,
                                              const EvaluationOptions& options = {});

nlohmann::json dataset_json(const DynamicNetwork& network);
nlohmann::json to_json(const MetricReport& report);
/// The full report: dataset metadata, predictor echo, pooled metrics,
/// per-step breakdowns and warnings. Deterministic for fixed inputs.
nlohmann::json to_json(const EvaluationRun& run, const DynamicNetwork& network);

// ---------------------------------------------------------------------------

template <class Fn>
void CandidateSet::scan(const predictors::ScoreSet& scores, Fn&& fn) const {
    const auto nodes_seen = nodes();
    const bool directed = history_.network().directed();
    const NodeId n = history_.network().num_nodes();
    std::vector<double> score_row(n, 0.0);
    std::vector<std::uint8_t> flags(n, 0);  // bit 0: label, bit 1: prev
    const auto& union_graph = history_.union_graph();

    for (std::size_t i = 0; i < nodes_seen.size(); ++i) {
        const NodeId u = nodes_seen[i];
        const auto row = scores.row(u);
        for (const auto& e : row) score_row[NodePair::from_key(e.key).v] = e.score;
        for (NodeId v : target_.neighbors(u)) flags[v] |= 1;
        for (NodeId v : union_graph.neighbors(u)) flags[v] |= 2;

        for (std::size_t j = directed ? 0 : i + 1; j < nodes_seen.size(); ++j) {
            if (j == i) continue;
            const NodeId v = nodes_seen[j];
            fn(NodePair{u, v}, score_row[v], (flags[v] & 1) != 0, (flags[v] & 2) != 0);
        }

        for (const auto& e : row) score_row[NodePair::from_key(e.key).v] = 0.0;
        for (NodeId v : target_.neighbors(u)) flags[v] = 0;
        for (NodeId v : union_graph.neighbors(u)) flags[v] = 0;
    }
}

}  // namespace dylp::harness
