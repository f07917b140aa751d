#include "dylp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "dylp/error.hpp"

namespace dylp::metrics {

namespace {

void require_both_classes(const RankedScores& rs, std::string_view metric) {
    if (rs.positives() == 0 || rs.negatives() == 0) {
        throw UndefinedMetricError(fmt::format("{} is undefined with P={} and N={}", metric, rs.positives(),
                                               rs.negatives()));
    }
}

// Walks two descending score lists plus sorted bulk blocks, emitting one
// block per distinct score.
std::vector<ScoreBlock> collapse(std::span<const double> pos, std::span<const double> neg,
                                 std::vector<ScoreBlock> bulk) {
    std::sort(bulk.begin(), bulk.end(), [](const ScoreBlock& a, const ScoreBlock& b) { return a.score > b.score; });
    std::vector<ScoreBlock> out;
    std::size_t i = 0, j = 0, b = 0;
    while (i < pos.size() || j < neg.size() || b < bulk.size()) {
        double s = -std::numeric_limits<double>::infinity();
        if (i < pos.size()) s = std::max(s, pos[i]);
        if (j < neg.size()) s = std::max(s, neg[j]);
        if (b < bulk.size()) s = std::max(s, bulk[b].score);
        ScoreBlock block{s, 0, 0};
        while (i < pos.size() && pos[i] == s) ++block.positives, ++i;
        while (j < neg.size() && neg[j] == s) ++block.negatives, ++j;
        while (b < bulk.size() && bulk[b].score == s) {
            block.positives += bulk[b].positives;
            block.negatives += bulk[b].negatives;
            ++b;
        }
        if (block.positives + block.negatives > 0) out.push_back(block);
    }
    return out;
}

}  // namespace

std::uint64_t LabeledScores::positives() const {
    return static_cast<std::uint64_t>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
}

RankedScores::RankedScores(std::vector<ScoreBlock> blocks) : blocks_(std::move(blocks)) {
    for (const auto& b : blocks_) {
        positives_ += b.positives;
        negatives_ += b.negatives;
    }
}

RankedScores RankedScores::from(const LabeledScores& ls) {
    ScorePool pool;
    pool.add(ls);
    return std::move(pool).rank();
}

void ScorePool::add(double score, bool label) {
    if (!std::isfinite(score)) throw std::invalid_argument("scores must be finite");
    if (score == 0.0) {
        ++(label ? zero_pos_ : zero_neg_);
    } else {
        (label ? pos_ : neg_).push_back(score);
    }
}

void ScorePool::add_repeated(double score, std::uint64_t positives, std::uint64_t negatives) {
    if (!std::isfinite(score)) throw std::invalid_argument("scores must be finite");
    if (score == 0.0) {
        zero_pos_ += positives;
        zero_neg_ += negatives;
    } else if (positives + negatives > 0) {
        bulk_.push_back({score, positives, negatives});
    }
}

void ScorePool::add(const LabeledScores& ls) {
    if (ls.scores.size() != ls.labels.size()) throw std::invalid_argument("score and label vectors differ in length");
    for (std::size_t i = 0; i < ls.size(); ++i) add(ls.scores[i], ls.labels[i] != 0);
}

void ScorePool::merge(const ScorePool& other) {
    pos_.insert(pos_.end(), other.pos_.begin(), other.pos_.end());
    neg_.insert(neg_.end(), other.neg_.begin(), other.neg_.end());
    bulk_.insert(bulk_.end(), other.bulk_.begin(), other.bulk_.end());
    zero_pos_ += other.zero_pos_;
    zero_neg_ += other.zero_neg_;
}

std::uint64_t ScorePool::positives() const {
    std::uint64_t total = pos_.size() + zero_pos_;
    for (const auto& b : bulk_) total += b.positives;
    return total;
}

std::uint64_t ScorePool::negatives() const {
    std::uint64_t total = neg_.size() + zero_neg_;
    for (const auto& b : bulk_) total += b.negatives;
    return total;
}

RankedScores ScorePool::rank() const& {
    ScorePool copy = *this;
    return std::move(copy).rank();
}

RankedScores ScorePool::rank() && {
    std::sort(pos_.begin(), pos_.end(), std::greater<>());
    std::sort(neg_.begin(), neg_.end(), std::greater<>());
    auto bulk = std::move(bulk_);
    if (zero_pos_ + zero_neg_ > 0) bulk.push_back({0.0, zero_pos_, zero_neg_});
    return RankedScores(collapse(pos_, neg_, std::move(bulk)));
}

ConfusionMatrix confusion_at_threshold(const LabeledScores& ls, double threshold) {
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        const bool predicted = ls.scores[i] >= threshold;
        const bool actual = ls.labels[i] != 0;
        if (predicted && actual) ++cm.tp;
        else if (predicted) ++cm.fp;
        else if (actual) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

ConfusionMatrix confusion_at_threshold(const RankedScores& rs, double threshold) {
    ConfusionMatrix cm;
    for (const auto& b : rs.blocks()) {
        if (b.score >= threshold) {
            cm.tp += b.positives;
            cm.fp += b.negatives;
        } else {
            cm.fn += b.positives;
            cm.tn += b.negatives;
        }
    }
    return cm;
}

double roc_auc(const RankedScores& rs) {
    require_both_classes(rs, "AUC");
    // Rank statistic: each negative in a block beats nothing above it, ties
    // with the block's positives at half weight. Exact in integers.
    unsigned __int128 twice_concordant = 0;
    std::uint64_t tp_before = 0;
    for (const auto& b : rs.blocks()) {
        twice_concordant += static_cast<unsigned __int128>(b.negatives) * (2 * static_cast<unsigned __int128>(tp_before) + b.positives);
        tp_before += b.positives;
    }
    const auto denom = 2 * static_cast<unsigned __int128>(rs.positives()) * rs.negatives();
    return static_cast<double>(static_cast<long double>(twice_concordant) / static_cast<long double>(denom));
}

double roc_auc(const LabeledScores& ls) { return roc_auc(RankedScores::from(ls)); }

ThresholdCurve roc_curve(const RankedScores& rs) {
    require_both_classes(rs, "ROC curve");
    ThresholdCurve curve{CurveKind::roc, {}, roc_auc(rs)};
    curve.points.reserve(rs.blocks().size() + 1);
    curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    const auto p = static_cast<double>(rs.positives());
    const auto n = static_cast<double>(rs.negatives());
    std::uint64_t tp = 0, fp = 0;
    for (const auto& b : rs.blocks()) {
        tp += b.positives;
        fp += b.negatives;
        curve.points.push_back({static_cast<double>(fp) / n, static_cast<double>(tp) / p, b.score});
    }
    return curve;
}

double pr_auc(const RankedScores& rs) {
    if (rs.positives() == 0) throw UndefinedMetricError("PRAUC is undefined with P=0");
    const auto total_pos = static_cast<long double>(rs.positives());
    long double area = 0.0L;
    std::uint64_t tp = 0, fp = 0;
    for (const auto& b : rs.blocks()) {
        const std::uint64_t tp_next = tp + b.positives;
        const std::uint64_t fp_next = fp + b.negatives;
        if (b.positives > 0) {
            const auto d_tp = static_cast<long double>(b.positives);
            if (tp + fp == 0) {
                // From the origin the interpolated precision is constant. Kept
                // in double so a single all-covering block yields exactly
                // P/(P+N), the baseline gmauc subtracts.
                const double width = static_cast<double>(b.positives) / static_cast<double>(rs.positives());
                const double precision = static_cast<double>(tp_next) / static_cast<double>(tp_next + fp_next);
                area += static_cast<long double>(width * precision);
            } else {
                // Precision at TP_a + x is (a + x) / (c + k x) with
                // c = TP_a + FP_a and k = 1 + dFP/dTP; integrate over x in [0, dTP].
                const auto a = static_cast<long double>(tp);
                const auto f = static_cast<long double>(fp);
                const long double slope = static_cast<long double>(b.negatives) / d_tp;
                const long double k = 1.0L + slope;
                const long double c = a + f;
                const long double integral = d_tp / k + (a * slope - f) / (k * k) * std::log1p(k * d_tp / c);
                area += integral / total_pos;
            }
        }
        tp = tp_next;
        fp = fp_next;
    }
    return static_cast<double>(area);
}

double pr_auc(const LabeledScores& ls) { return pr_auc(RankedScores::from(ls)); }

ThresholdCurve pr_curve(const RankedScores& rs) {
    ThresholdCurve curve{CurveKind::pr, {}, pr_auc(rs)};
    curve.points.reserve(rs.blocks().size());
    const auto p = static_cast<double>(rs.positives());
    std::uint64_t tp = 0, fp = 0;
    for (const auto& b : rs.blocks()) {
        tp += b.positives;
        fp += b.negatives;
        curve.points.push_back(
            {static_cast<double>(tp) / p, static_cast<double>(tp) / static_cast<double>(tp + fp), b.score});
    }
    return curve;
}

double max_f1(const ThresholdCurve& pr) {
    if (pr.kind != CurveKind::pr) throw std::invalid_argument("max_f1 needs a PR curve");
    double best = 0.0;
    for (const auto& pt : pr.points) {
        const double sum = pt.x + pt.y;
        if (sum > 0.0) best = std::max(best, 2.0 * pt.x * pt.y / sum);
    }
    return best;
}

double precision_at_k(const RankedScores& rs, std::uint64_t k) {
    if (k < 1 || k > rs.size()) throw RangeError(fmt::format("k={} outside 1..{}", k, rs.size()));
    long double hits = 0.0L;
    std::uint64_t taken = 0;
    for (const auto& b : rs.blocks()) {
        const std::uint64_t block_size = b.positives + b.negatives;
        const std::uint64_t take = std::min(block_size, k - taken);
        hits += static_cast<long double>(take) * static_cast<long double>(b.positives) /
                static_cast<long double>(block_size);
        taken += take;
        if (taken == k) break;
    }
    return static_cast<double>(hits / static_cast<long double>(k));
}

double precision_at_k(const LabeledScores& ls, std::uint64_t k) { return precision_at_k(RankedScores::from(ls), k); }

double ndcg_at_k(const RankedScores& rs, std::uint64_t k) {
    if (k < 1 || k > rs.size()) throw RangeError(fmt::format("k={} outside 1..{}", k, rs.size()));
    if (rs.positives() == 0) throw UndefinedMetricError("NDCG is undefined with P=0");
    auto discount = [](std::uint64_t rank) { return 1.0L / std::log2(static_cast<long double>(rank) + 1.0L); };

    long double dcg = 0.0L;
    std::uint64_t rank = 0;
    for (const auto& b : rs.blocks()) {
        if (rank >= k) break;
        const std::uint64_t block_size = b.positives + b.negatives;
        const long double gain = static_cast<long double>(b.positives) / static_cast<long double>(block_size);
        const std::uint64_t last = std::min(rank + block_size, k);
        if (gain > 0.0L) {
            for (std::uint64_t r = rank + 1; r <= last; ++r) dcg += gain * discount(r);
        }
        rank = last;
    }
    long double ideal = 0.0L;
    const std::uint64_t ideal_hits = std::min(k, rs.positives());
    for (std::uint64_t r = 1; r <= ideal_hits; ++r) ideal += discount(r);
    return static_cast<double>(dcg / ideal);
}

double ndcg_at_k(const LabeledScores& ls, std::uint64_t k) { return ndcg_at_k(RankedScores::from(ls), k); }

double gmauc(const GmaucInputs& in) {
    const std::uint64_t total = in.positives_new + in.negatives_new;
    if (total == 0) throw UndefinedMetricError("GMAUC needs a nonempty new-link population");
    if (in.negatives_new == 0) throw UndefinedMetricError("GMAUC is undefined when every new-link candidate is an edge");
    const double baseline = static_cast<double>(in.positives_new) / static_cast<double>(total);
    const double new_term = std::max(0.0, (in.prauc_new - baseline) / (1.0 - baseline));
    const double prev_term = std::max(0.0, 2.0 * (in.auc_prev - 0.5));
    return std::sqrt(new_term * prev_term);
}

MetricBundle compute_bundle(const RankedScores& rs, std::optional<std::uint64_t> k) {
    MetricBundle out;
    out.positives = rs.positives();
    out.negatives = rs.negatives();
    if (out.positives > 0 && out.negatives > 0) out.auc = roc_auc(rs);
    if (out.positives > 0) {
        const auto curve = pr_curve(rs);
        out.prauc = curve.area;
        out.max_f1 = max_f1(curve);
    }
    if (k && rs.size() > 0) {
        const std::uint64_t kk = std::clamp<std::uint64_t>(*k, 1, rs.size());
        out.k = kk;
        out.precision_at_k = precision_at_k(rs, kk);
        if (out.positives > 0) out.ndcg_at_k = ndcg_at_k(rs, kk);
    }
    return out;
}

nlohmann::json to_json(const MetricBundle& b) {
    auto opt = [](const auto& v) -> nlohmann::json { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json j;
    j["auc"] = opt(b.auc);
    j["prauc"] = opt(b.prauc);
    j["max_f1"] = opt(b.max_f1);
    j["precision_at_k"] = opt(b.precision_at_k);
    j["ndcg_at_k"] = opt(b.ndcg_at_k);
    j["k"] = opt(b.k);
    j["P"] = b.positives;
    j["N"] = b.negatives;
    return j;
}

void write_curve_csv(std::ostream& out, const ThresholdCurve& curve, std::size_t max_points) {
    out << "x,y,threshold\n";
    const std::size_t n = curve.points.size();
    auto emit = [&](const CurvePoint& p) { out << fmt::format("{},{},{}\n", p.x, p.y, p.threshold); };
    if (max_points == 0 || n <= max_points || max_points < 2) {
        for (const auto& p : curve.points) emit(p);
        return;
    }
    std::size_t last_index = n;  // sentinel
    for (std::size_t i = 0; i < max_points; ++i) {
        const std::size_t index = i * (n - 1) / (max_points - 1);
        if (index != last_index) emit(curve.points[index]);
        last_index = index;
    }
}

std::string_view to_string(CurveKind kind) { return kind == CurveKind::roc ? "roc" : "pr"; }

}  // namespace dylp::metrics
