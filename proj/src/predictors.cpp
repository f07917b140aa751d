#include "dylp/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "dylp/error.hpp"
#include "dylp/parallel.hpp"

namespace dylp::predictors {

namespace {

using Field = std::vector<ScoreEntry>;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// Per-pair EWMA of two sparse series; keys missing from `obs` observed 0.
Field ewma_fold(const Field& prev, const Field& obs, double decay) {
    Field out;
    out.reserve(std::max(prev.size(), obs.size()));
    std::size_t i = 0, j = 0;
    auto push = [&](std::uint64_t key, double value) {
        if (value != 0.0) out.push_back({key, value});
    };
    while (i < prev.size() || j < obs.size()) {
        if (j == obs.size() || (i < prev.size() && prev[i].key < obs[j].key)) {
            push(prev[i].key, ewma_update(prev[i].score, 0.0, decay));
            ++i;
        } else if (i == prev.size() || obs[j].key < prev[i].key) {
            push(obs[j].key, ewma_update(0.0, obs[j].score, decay));
            ++j;
        } else {
            push(prev[i].key, ewma_update(prev[i].score, obs[j].score, decay));
            ++i;
            ++j;
        }
    }
    return out;
}

Field indicator_field(const Snapshot& snap) {
    Field f;
    f.reserve(snap.num_edges());
    for (const auto& e : snap.edges()) f.push_back({e.key(), 1.0});
    return f;
}

// Runs row_fn(u, out) for every source in parallel; rows are concatenated in
// source order so the result is sorted by key.
template <class RowFn>
Field rows_parallel(NodeId num_nodes, unsigned threads, RowFn&& row_fn) {
    const std::size_t chunks = chunk_count(num_nodes, threads);
    std::vector<Field> parts(chunks);
    parallel_chunks(num_nodes, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
        row_fn(static_cast<NodeId>(begin), static_cast<NodeId>(end), parts[c]);
    });
    Field out;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    out.reserve(total);
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

// Adamic-Adar for all pairs of one symmetric adjacency, canonical keys u < v.
Field adamic_adar_field(const Adjacency& graph, unsigned threads) {
    const NodeId n = graph.num_nodes();
    return rows_parallel(n, threads, [&](NodeId begin, NodeId end, Field& out) {
        std::vector<double> acc(n, 0.0);
        std::vector<NodeId> touched;
        for (NodeId u = begin; u < end; ++u) {
            for (NodeId w : graph.neighbors(u)) {
                const std::size_t deg = graph.degree(w);
                if (deg < 2) continue;
                const double weight = 1.0 / std::log(static_cast<double>(deg));
                for (NodeId v : graph.neighbors(w)) {
                    if (v <= u) continue;
                    if (acc[v] == 0.0) touched.push_back(v);
                    acc[v] += weight;
                }
            }
            std::sort(touched.begin(), touched.end());
            for (NodeId v : touched) {
                out.push_back({NodePair{u, v}.key(), acc[v]});
                acc[v] = 0.0;
            }
            touched.clear();
        }
    });
}

// Walk counts from one source, reusing dense scratch across sources.
class WalkCounter {
public:
    WalkCounter(const Adjacency& graph, double beta, int max_length)
        : graph_(graph), beta_(beta), max_length_(max_length), cur_(graph.num_nodes(), 0.0),
          next_(graph.num_nodes(), 0.0), acc_(graph.num_nodes(), 0.0), mark_(graph.num_nodes(), 0) {}

    // Fills acc_ for source u; returns touched targets (unsorted).
    const std::vector<NodeId>& run(NodeId u) {
        reset();
        frontier_.assign(1, u);
        cur_[u] = 1.0;
        double weight = 1.0;
        for (int len = 1; len <= max_length_; ++len) {
            weight *= beta_;
            next_frontier_.clear();
            for (NodeId x : frontier_) {
                const double walks = cur_[x];
                for (NodeId y : graph_.neighbors(x)) {
                    if (next_[y] == 0.0) next_frontier_.push_back(y);
                    next_[y] += walks;
                }
            }
            for (NodeId x : frontier_) cur_[x] = 0.0;
            for (NodeId y : next_frontier_) {
                if (!seen(y)) touched_.push_back(y);
                acc_[y] += weight * next_[y];
                cur_[y] = next_[y];
                next_[y] = 0.0;
            }
            std::swap(frontier_, next_frontier_);
            if (frontier_.empty()) break;
        }
        for (NodeId x : frontier_) cur_[x] = 0.0;
        for (NodeId v : touched_) {
            if (!std::isfinite(acc_[v])) throw std::overflow_error("Katz score overflowed");
        }
        return touched_;
    }

    double score(NodeId v) const { return acc_[v]; }

private:
    bool seen(NodeId y) {
        if (mark_[y]) return true;
        mark_[y] = 1;
        return false;
    }
    void reset() {
        for (NodeId v : touched_) {
            acc_[v] = 0.0;
            mark_[v] = 0;
        }
        touched_.clear();
    }

    const Adjacency& graph_;
    double beta_;
    int max_length_;
    std::vector<double> cur_, next_, acc_;
    std::vector<std::uint8_t> mark_;
    std::vector<NodeId> frontier_, next_frontier_, touched_;
};

// Truncated Katz rows from every source. With `canonical_only`, keeps v > u.
Field katz_field(const Adjacency& graph, double beta, int max_length, bool canonical_only, unsigned threads) {
    return rows_parallel(graph.num_nodes(), threads, [&](NodeId begin, NodeId end, Field& out) {
        WalkCounter counter(graph, beta, max_length);
        std::vector<NodeId> targets;
        for (NodeId u = begin; u < end; ++u) {
            if (graph.degree(u) == 0) continue;
            targets = counter.run(u);
            std::sort(targets.begin(), targets.end());
            for (NodeId v : targets) {
                if (v == u || (canonical_only && v < u)) continue;
                const double s = counter.score(v);
                if (s != 0.0) out.push_back({NodePair{u, v}.key(), s});
            }
        }
    });
}

// Expands canonical (u < v) keys to both orientations.
Field expand_symmetric(const Field& canonical) {
    Field out;
    out.reserve(canonical.size() * 2);
    for (const auto& e : canonical) {
        const auto p = NodePair::from_key(e.key);
        out.push_back(e);
        out.push_back({p.reversed().key(), e.score});
    }
    std::sort(out.begin(), out.end(), [](const ScoreEntry& a, const ScoreEntry& b) { return a.key < b.key; });
    return out;
}

class EwmaPredictor : public Predictor {
public:
    explicit EwmaPredictor(double decay) : decay_(decay) {}

    void observe(const DynamicNetwork& network, int t) override {
        if (t != observed_ + 1) throw RangeError(fmt::format("expected step {}, got {}", observed_ + 1, t));
        Field obs = observation(network, t);
        state_ = observed_ == 0 ? std::move(obs) : ewma_fold(state_, obs, decay_);
        observed_ = t;
    }

    ScoreSet scores(const PairHistory& history) const override {
        if (history.cutoff() != observed_) throw RangeError("history cutoff differs from the observed step");
        const bool directed = history.network().directed();
        if (directed && symmetric_observations()) {
            return ScoreSet(observed_ + 1, directed, expand_symmetric(state_));
        }
        return ScoreSet(observed_ + 1, directed, state_);
    }

protected:
    virtual Field observation(const DynamicNetwork& network, int t) = 0;
    // Observations keyed canonically even on directed networks.
    virtual bool symmetric_observations() const { return false; }

private:
    double decay_;
    Field state_;
};

class TsAdjPredictor final : public EwmaPredictor {
public:
    using EwmaPredictor::EwmaPredictor;

protected:
    Field observation(const DynamicNetwork& network, int t) override { return indicator_field(network.snapshot(t)); }
};

class TsAaPredictor final : public EwmaPredictor {
public:
    TsAaPredictor(double decay, unsigned threads) : EwmaPredictor(decay), threads_(threads) {}

protected:
    Field observation(const DynamicNetwork& network, int t) override {
        if (!network.directed()) return adamic_adar_field(network.adjacency(t), threads_);
        const auto sym = Adjacency::from_pairs(network.num_nodes(), network.snapshot(t).edges(), true);
        return adamic_adar_field(sym, threads_);
    }
    bool symmetric_observations() const override { return true; }

private:
    unsigned threads_;
};

class TsKatzPredictor final : public EwmaPredictor {
public:
    TsKatzPredictor(const PredictorConfig& config, unsigned threads)
        : EwmaPredictor(config.decay), beta_(config.katz_beta), max_length_(config.katz_max_length),
          threads_(threads) {}

protected:
    Field observation(const DynamicNetwork& network, int t) override {
        const auto& adj = network.adjacency(t);
        const std::size_t max_degree = adj.max_degree();
        if (!warned_ && beta_ * static_cast<double>(max_degree) >= 1.0) {
            warnings_.push_back(fmt::format(
                "katz_beta {} times max degree {} at step {} is >= 1; walk sums may be dominated by long walks",
                beta_, max_degree, t));
            warned_ = true;
        }
        return katz_field(adj, beta_, max_length_, !network.directed(), threads_);
    }

private:
    double beta_;
    int max_length_;
    unsigned threads_;
    bool warned_ = false;
};

class CumulativePredictor final : public Predictor {
public:
    void observe(const DynamicNetwork& network, int t) override {
        if (t != observed_ + 1) throw RangeError(fmt::format("expected step {}, got {}", observed_ + 1, t));
        const Field obs = indicator_field(network.snapshot(t));
        Field merged;
        merged.reserve(counts_.size() + obs.size());
        std::merge(counts_.begin(), counts_.end(), obs.begin(), obs.end(), std::back_inserter(merged),
                   [](const ScoreEntry& a, const ScoreEntry& b) { return a.key < b.key; });
        counts_.clear();
        for (const auto& e : merged) {
            if (!counts_.empty() && counts_.back().key == e.key) {
                counts_.back().score += e.score;
            } else {
                counts_.push_back(e);
            }
        }
        observed_ = t;
    }

    ScoreSet scores(const PairHistory& history) const override {
        if (history.cutoff() != observed_) throw RangeError("history cutoff differs from the observed step");
        Field out = counts_;
        for (auto& e : out) e.score /= static_cast<double>(observed_);
        return ScoreSet(observed_ + 1, history.network().directed(), std::move(out));
    }

private:
    Field counts_;
};

class RandomPredictor final : public Predictor {
public:
    explicit RandomPredictor(std::uint64_t seed) : seed_(seed) {}

    void observe(const DynamicNetwork&, int t) override {
        if (t != observed_ + 1) throw RangeError(fmt::format("expected step {}, got {}", observed_ + 1, t));
        observed_ = t;
    }

    ScoreSet scores(const PairHistory& history) const override {
        if (history.cutoff() != observed_) throw RangeError("history cutoff differs from the observed step");
        const int target = observed_ + 1;
        std::mt19937_64 rng(splitmix64(seed_ ^ splitmix64(static_cast<std::uint64_t>(target))));
        const bool directed = history.network().directed();
        const auto seen = history.seen_nodes();
        Field out;
        const std::size_t m = seen.size();
        out.reserve(directed ? m * (m > 0 ? m - 1 : 0) : m * (m > 0 ? m - 1 : 0) / 2);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = directed ? 0 : i + 1; j < m; ++j) {
                if (i == j) continue;
                out.push_back({NodePair{seen[i], seen[j]}.key(), unit_interval(rng())});
            }
        }
        return ScoreSet(target, directed, std::move(out));
    }

private:
    std::uint64_t seed_;
};

}  // namespace

std::string_view to_string(Kind kind) {
    switch (kind) {
        case Kind::ts_adj: return "ts_adj";
        case Kind::cumulative: return "cumulative";
        case Kind::ts_aa: return "ts_aa";
        case Kind::ts_katz: return "ts_katz";
        case Kind::random: return "random";
    }
    return "unknown";
}

Kind parse_kind(std::string_view name) {
    for (Kind k : {Kind::ts_adj, Kind::cumulative, Kind::ts_aa, Kind::ts_katz, Kind::random}) {
        if (name == to_string(k)) return k;
    }
    throw ConfigError(fmt::format("unknown predictor '{}' (expected ts_adj, cumulative, ts_aa, ts_katz or random)", name));
}

void PredictorConfig::validate() const {
    if (!(decay > 0.0 && decay <= 1.0)) throw ConfigError(fmt::format("decay {} outside (0,1]", decay));
    if (!(katz_beta > 0.0) || !std::isfinite(katz_beta)) throw ConfigError(fmt::format("katz_beta {} must be > 0", katz_beta));
    if (katz_max_length < 2) throw ConfigError(fmt::format("katz_max_length {} must be >= 2", katz_max_length));
}

nlohmann::json PredictorConfig::to_json() const {
    return {{"kind", to_string(kind)}, {"name", name()},          {"decay", decay},
            {"katz_beta", katz_beta},  {"katz_max_length", katz_max_length}, {"seed", seed}};
}

PredictorConfig PredictorConfig::from_json(const nlohmann::json& j) {
    PredictorConfig c;
    try {
        if (j.contains("kind")) c.kind = parse_kind(j.at("kind").get<std::string>());
        if (j.contains("decay")) c.decay = j.at("decay").get<double>();
        if (j.contains("katz_beta")) c.katz_beta = j.at("katz_beta").get<double>();
        if (j.contains("katz_max_length")) c.katz_max_length = j.at("katz_max_length").get<int>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("label")) c.label = j.at("label").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("bad predictor config: {}", e.what()));
    }
    c.validate();
    return c;
}

ScoreSet::ScoreSet(int time_step, bool directed, std::vector<ScoreEntry> entries)
    : time_step_(time_step), directed_(directed), entries_(std::move(entries)) {}

double ScoreSet::score(NodePair p) const {
    const std::uint64_t key = canonical(p, directed_).key();
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const ScoreEntry& e, std::uint64_t k) { return e.key < k; });
    return it != entries_.end() && it->key == key ? it->score : 0.0;
}

std::span<const ScoreEntry> ScoreSet::row(NodeId u) const {
    const std::uint64_t lo = std::uint64_t{u} << 32;
    const std::uint64_t hi = (std::uint64_t{u} + 1) << 32;
    auto cmp = [](const ScoreEntry& e, std::uint64_t k) { return e.key < k; };
    auto first = std::lower_bound(entries_.begin(), entries_.end(), lo, cmp);
    auto last = std::lower_bound(first, entries_.end(), hi, cmp);
    return {entries_.data() + (first - entries_.begin()), static_cast<std::size_t>(last - first)};
}

double ewma_update(double prev_score, double observation, double decay) {
    return decay * observation + (1.0 - decay) * prev_score;
}

std::vector<double> ewma_series(std::span<const double> observations, double decay) {
    std::vector<double> out;
    out.reserve(observations.size());
    for (std::size_t i = 0; i < observations.size(); ++i) {
        out.push_back(i == 0 ? observations[0] : ewma_update(out.back(), observations[i], decay));
    }
    return out;
}

double adamic_adar(const Adjacency& graph, NodeId u, NodeId v) {
    const auto nu = graph.neighbors(u);
    const auto nv = graph.neighbors(v);
    double total = 0.0;
    std::size_t i = 0, j = 0;
    while (i < nu.size() && j < nv.size()) {
        if (nu[i] < nv[j]) {
            ++i;
        } else if (nv[j] < nu[i]) {
            ++j;
        } else {
            const std::size_t deg = graph.degree(nu[i]);
            if (deg >= 2) total += 1.0 / std::log(static_cast<double>(deg));
            ++i;
            ++j;
        }
    }
    return total;
}

double truncated_katz(const Adjacency& graph, NodeId u, NodeId v, double beta, int max_length) {
    if (max_length < 2) throw RangeError("katz max_length must be >= 2");
    if (!(beta > 0.0)) throw RangeError("katz beta must be > 0");
    WalkCounter counter(graph, beta, max_length);
    counter.run(u);
    return counter.score(v);
}

std::unique_ptr<Predictor> make_predictor(const PredictorConfig& config, unsigned threads) {
    config.validate();
    threads = std::max(1u, threads);
    switch (config.kind) {
        case Kind::ts_adj: return std::make_unique<TsAdjPredictor>(config.decay);
        case Kind::cumulative: return std::make_unique<CumulativePredictor>();
        case Kind::ts_aa: return std::make_unique<TsAaPredictor>(config.decay, threads);
        case Kind::ts_katz: return std::make_unique<TsKatzPredictor>(config, threads);
        case Kind::random: return std::make_unique<RandomPredictor>(config.seed);
    }
    throw ConfigError("unknown predictor kind");
}

ScoreSet predict(const DynamicNetwork& network, int cutoff, const PredictorConfig& config, unsigned threads) {
    const PairHistory history(network, cutoff);
    auto predictor = make_predictor(config, threads);
    for (int t = 1; t <= cutoff; ++t) predictor->observe(network, t);
    return predictor->scores(history);
}

namespace {
ScoreSet predict_as(Kind kind, const DynamicNetwork& network, int cutoff, PredictorConfig config) {
    config.kind = kind;
    return predict(network, cutoff, config);
}
}  // namespace

ScoreSet predict_ts_adj(const DynamicNetwork& n, int t, const PredictorConfig& c) { return predict_as(Kind::ts_adj, n, t, c); }
ScoreSet predict_cumulative(const DynamicNetwork& n, int t, const PredictorConfig& c) { return predict_as(Kind::cumulative, n, t, c); }
ScoreSet predict_ts_aa(const DynamicNetwork& n, int t, const PredictorConfig& c) { return predict_as(Kind::ts_aa, n, t, c); }
ScoreSet predict_ts_katz(const DynamicNetwork& n, int t, const PredictorConfig& c) { return predict_as(Kind::ts_katz, n, t, c); }
ScoreSet predict_random(const DynamicNetwork& n, int t, const PredictorConfig& c) { return predict_as(Kind::random, n, t, c); }

}  // namespace dylp::predictors
