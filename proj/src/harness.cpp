#include "dylp/harness.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "dylp/error.hpp"
#include "dylp/network_io.hpp"

namespace dylp::harness {

namespace {

std::size_t index(Population p) { return static_cast<std::size_t>(p); }

PopulationStep step_stats(const metrics::RankedScores& rs) {
    PopulationStep s;
    s.positives = rs.positives();
    s.negatives = rs.negatives();
    if (s.positives > 0 && s.negatives > 0) s.auc = metrics::roc_auc(rs);
    if (s.positives > 0) s.prauc = metrics::pr_auc(rs);
    return s;
}

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

std::string_view to_string(Population p) {
    switch (p) {
        case Population::all: return "all";
        case Population::new_links: return "new";
        case Population::prev_links: return "prev";
    }
    return "unknown";
}

CandidateSet::CandidateSet(const DynamicNetwork& network, int cutoff)
    : history_([&]() -> PairHistory {
          if (cutoff < 1 || cutoff > network.num_steps() - 1) {
              throw RangeError(fmt::format("cutoff {} outside 1..{}", cutoff, network.num_steps() - 1));
          }
          return PairHistory(network, cutoff);
      }()),
      target_(network.adjacency(cutoff + 1)) {}

std::uint64_t CandidateSet::size() const {
    const std::uint64_t m = nodes().size();
    if (m < 2) return 0;
    return history_.network().directed() ? m * (m - 1) : m * (m - 1) / 2;
}

bool CandidateSet::contains(NodePair p) const {
    return p.u != p.v && p.u < history_.network().num_nodes() && p.v < history_.network().num_nodes() &&
           history_.is_seen(p.u) && history_.is_seen(p.v);
}

bool CandidateSet::label(NodePair p) const { return target_.contains(p.u, p.v); }

void CandidateSet::for_each(const std::function<void(NodePair, bool, bool)>& fn) const {
    const predictors::ScoreSet empty;
    scan(empty, [&](NodePair p, double, bool label, bool prev) { fn(p, label, prev); });
}

CandidateSet candidate_set(const DynamicNetwork& network, int cutoff) { return CandidateSet(network, cutoff); }

std::optional<double> gmauc_from(const MetricReport& report) {
    const auto& fresh = report.at(Population::new_links);
    const auto& prev = report.at(Population::prev_links);
    if (!fresh.prauc || !prev.auc || fresh.negatives == 0) return std::nullopt;
    return metrics::gmauc({*fresh.prauc, *prev.auc, fresh.positives, fresh.negatives});
}

EvaluationRun run_evaluation(const DynamicNetwork& network, const predictors::PredictorConfig& predictor,
                             const EvaluationOptions& options, std::ostream* score_dump) {
    const int T = network.num_steps();
    if (T < 2) throw InsufficientHistoryError(fmt::format("evaluation needs at least 2 steps, network has {}", T));

    EvaluationRun run;
    run.predictor = predictor;
    auto model = predictors::make_predictor(predictor, options.threads);
    std::array<metrics::ScorePool, 3> pooled;

    if (score_dump) *score_dump << "step,u,v,score,label,prev_flag\n";
    for (int t = 1; t < T; ++t) {
        model->observe(network, t);
        const CandidateSet candidates(network, t);
        auto scores = model->scores(candidates.history());

        std::array<metrics::ScorePool, 3> step_pool;
        candidates.scan(scores, [&](NodePair p, double score, bool label, bool prev) {
            step_pool[index(Population::all)].add(score, label);
            step_pool[index(prev ? Population::prev_links : Population::new_links)].add(score, label);
            if (score_dump) {
                *score_dump << fmt::format("{},{},{},{},{},{}\n", t + 1, p.u, p.v, score, label ? 1 : 0,
                                           prev ? 1 : 0);
            }
        });

        StepBreakdown breakdown;
        breakdown.target_step = t + 1;
        breakdown.candidates = candidates.size();
        for (Population pop : kPopulations) {
            auto& pool = step_pool[index(pop)];
            breakdown.populations[index(pop)] = step_stats(pool.rank());
            pooled[index(pop)].merge(pool);
        }
        run.steps.push_back(breakdown);
        if (options.keep_score_sets) run.score_sets.push_back(std::move(scores));
    }

    for (Population pop : kPopulations) {
        run.pooled[index(pop)] = std::move(pooled[index(pop)]).rank();
        run.report.populations[index(pop)] = metrics::compute_bundle(run.pooled[index(pop)], options.k);
    }
    run.report.gmauc = gmauc_from(run.report);
    run.warnings = model->warnings();
    return run;
}

std::vector<ComparisonRow> compare_predictors(const DynamicNetwork& network,
                                              std::span<const predictors::PredictorConfig> configs,
                                              const EvaluationOptions& options) {
    if (configs.empty()) throw ConfigError("compare_predictors needs at least one predictor");
    std::vector<ComparisonRow> rows;
    rows.reserve(configs.size());
    for (const auto& c : configs) rows.push_back({c.name(), 0, run_evaluation(network, c, options)});
    std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
        const auto& ga = a.run.report.gmauc;
        const auto& gb = b.run.report.gmauc;
        if (ga.has_value() != gb.has_value()) return ga.has_value();
        if (ga && gb && *ga != *gb) return *ga > *gb;
        return a.name < b.name;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = static_cast<int>(i) + 1;
    return rows;
}

nlohmann::json dataset_json(const DynamicNetwork& network) {
    return {{"num_nodes", network.num_nodes()},
            {"num_steps", network.num_steps()},
            {"directed", network.directed()},
            {"total_edges", network.total_edges()},
            {"fingerprint", io::network_fingerprint(network)}};
}

nlohmann::json to_json(const MetricReport& report) {
    nlohmann::json j;
    for (Population pop : kPopulations) j[std::string(to_string(pop))] = metrics::to_json(report.at(pop));
    j["gmauc"] = opt(report.gmauc);
    return j;
}

nlohmann::json to_json(const EvaluationRun& run, const DynamicNetwork& network) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : run.steps) {
        nlohmann::json row{{"target_step", s.target_step}, {"candidates", s.candidates}};
        for (Population pop : kPopulations) {
            const auto& p = s.populations[index(pop)];
            row[std::string(to_string(pop))] = {
                {"P", p.positives}, {"N", p.negatives}, {"auc", opt(p.auc)}, {"prauc", opt(p.prauc)}};
        }
        steps.push_back(std::move(row));
    }
    return {{"dataset", dataset_json(network)},
            {"predictor", run.predictor.to_json()},
            {"metrics", to_json(run.report)},
            {"steps", steps},
            {"warnings", run.warnings}};
}

}  // namespace dylp::harness
