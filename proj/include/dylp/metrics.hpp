#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace dylp::metrics {

/// Parallel score/label vectors, the concatenated evaluation input.
struct LabeledScores {
    std::vector<double> scores;
    std::vector<std::uint8_t> labels;

    void add(double score, bool label) {
        scores.push_back(score);
        labels.push_back(label ? 1 : 0);
    }
    std::size_t size() const { return scores.size(); }
    std::uint64_t positives() const;
    std::uint64_t negatives() const { return size() - positives(); }
};

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    bool operator==(const ConfusionMatrix&) const = default;
};

/// All pairs sharing one score value.
struct ScoreBlock {
    double score = 0.0;
    std::uint64_t positives = 0;
    std::uint64_t negatives = 0;
};

/// Scores collapsed into tie blocks, sorted by descending score. Every
/// threshold metric is a function of this sequence alone, which is what
/// makes the metrics invariant under strictly increasing transforms.
class RankedScores {
public:
    RankedScores() = default;
    explicit RankedScores(std::vector<ScoreBlock> blocks);
    static RankedScores from(const LabeledScores& ls);

    std::span<const ScoreBlock> blocks() const { return blocks_; }
    std::uint64_t positives() const { return positives_; }
    std::uint64_t negatives() const { return negatives_; }
    std::uint64_t size() const { return positives_ + negatives_; }

private:
    std::vector<ScoreBlock> blocks_;
    std::uint64_t positives_ = 0;
    std::uint64_t negatives_ = 0;
};

/// Order-insensitive accumulator of (score, label) observations. Pooling
/// the per-step populations through this is equivalent to concatenating
/// them, without keeping the pair order around.
class ScorePool {
public:
    /// Throws std::invalid_argument on a non-finite score.
    void add(double score, bool label);
    void add_repeated(double score, std::uint64_t positives, std::uint64_t negatives);
    void add(const LabeledScores& ls);
    void merge(const ScorePool& other);

    std::uint64_t positives() const;
    std::uint64_t negatives() const;
    std::uint64_t size() const { return positives() + negatives(); }

    RankedScores rank() const&;
    RankedScores rank() &&;

private:
    std::vector<double> pos_;
    std::vector<double> neg_;
    std::vector<ScoreBlock> bulk_;
    std::uint64_t zero_pos_ = 0;
    std::uint64_t zero_neg_ = 0;
};

enum class CurveKind { roc, pr };

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
    double threshold = 0.0;
};

/// ROC: x = FPR, y = TPR, starting at (0,0). PR: x = recall, y = precision,
/// one point per tie block, no synthetic anchor.
struct ThresholdCurve {
    CurveKind kind = CurveKind::roc;
    std::vector<CurvePoint> points;
    double area = 0.0;
};

/// Predicted positive iff score >= threshold.
ConfusionMatrix confusion_at_threshold(const LabeledScores& ls, double threshold);
ConfusionMatrix confusion_at_threshold(const RankedScores& rs, double threshold);

/// Throws UndefinedMetricError when P = 0 or N = 0.
ThresholdCurve roc_curve(const RankedScores& rs);
double roc_auc(const RankedScores& rs);
double roc_auc(const LabeledScores& ls);

/// PR curve with Davis-Goadrich interpolation for the area. Throws
/// UndefinedMetricError when P = 0.
ThresholdCurve pr_curve(const RankedScores& rs);
double pr_auc(const RankedScores& rs);
double pr_auc(const LabeledScores& ls);

/// Best F1 over the achievable points of a PR curve.
double max_f1(const ThresholdCurve& pr);

/// Ties at the cut count by their expected contribution. Throws RangeError
/// unless 1 <= k <= size.
double precision_at_k(const RankedScores& rs, std::uint64_t k);
double precision_at_k(const LabeledScores& ls, std::uint64_t k);

/// Binary-gain NDCG with 1/log2(rank+1) discount; tied blocks contribute
/// their expected gain. Throws RangeError on bad k, UndefinedMetricError
/// when P = 0.
double ndcg_at_k(const RankedScores& rs, std::uint64_t k);
double ndcg_at_k(const LabeledScores& ls, std::uint64_t k);

struct GmaucInputs {
    double prauc_new = 0.0;
    double auc_prev = 0.0;
    std::uint64_t positives_new = 0;
    std::uint64_t negatives_new = 0;
};

/// Geometric mean of the baseline-corrected new-link PRAUC and
/// previously-observed-link AUC. Negative corrected terms clamp to 0.
/// Throws UndefinedMetricError when the new-link population has no
/// non-edges (or is empty).
double gmauc(const GmaucInputs& in);

/// The serialized metric bundle. Undefined metrics are nullopt.
struct MetricBundle {
    std::optional<double> auc;
    std::optional<double> prauc;
    std::optional<double> max_f1;
    std::optional<std::uint64_t> k;
    std::optional<double> precision_at_k;
    std::optional<double> ndcg_at_k;
    std::uint64_t positives = 0;
    std::uint64_t negatives = 0;
};

/// Computes every metric that is defined for the input; k is clamped to the
/// population size.
MetricBundle compute_bundle(const RankedScores& rs, std::optional<std::uint64_t> k = std::nullopt);

nlohmann::json to_json(const MetricBundle& bundle);

/// CSV with header `x,y,threshold`. When `max_points` is nonzero and the
/// curve is longer, points are thinned evenly keeping both endpoints.
void write_curve_csv(std::ostream& out, const ThresholdCurve& curve, std::size_t max_points = 0);

std::string_view to_string(CurveKind kind);

}  // namespace dylp::metrics
