#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

#include "dylp/dyngraph.hpp"
#include "dylp/metrics.hpp"

namespace dylp::testing {

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

inline DynamicNetwork make_network(bool directed, NodeId num_nodes, const std::vector<EdgeList>& steps) {
    std::vector<SnapshotSpec> specs;
    int t = 1;
    for (const auto& edges : steps) {
        SnapshotSpec s;
        s.time_step = t++;
        for (auto [u, v] : edges) s.edges.push_back({u, v});
        specs.push_back(std::move(s));
    }
    return std::move(build_network(std::move(specs), directed, num_nodes).network);
}

inline metrics::LabeledScores labeled(std::initializer_list<double> scores, std::initializer_list<int> labels) {
    metrics::LabeledScores ls;
    auto l = labels.begin();
    for (double s : scores) ls.add(s, *l++ != 0);
    return ls;
}

/// Concordant pairs plus half the ties over P*N, counted pair by pair.
inline double brute_force_auc(const metrics::LabeledScores& ls) {
    std::uint64_t twice = 0, pos = 0, neg = 0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        if (ls.labels[i]) ++pos; else ++neg;
    }
    for (std::size_t i = 0; i < ls.size(); ++i) {
        if (!ls.labels[i]) continue;
        for (std::size_t j = 0; j < ls.size(); ++j) {
            if (ls.labels[j]) continue;
            if (ls.scores[i] > ls.scores[j]) twice += 2;
            else if (ls.scores[i] == ls.scores[j]) twice += 1;
        }
    }
    return static_cast<double>(static_cast<long double>(twice) / (2.0L * pos * neg));
}

/// Walks the confusion states threshold by threshold and, along each
/// segment, steps TP one unit at a time with the skew-interpolated FP,
/// integrating precision d(recall) with a fine midpoint rule inside each
/// unit step.
inline double stepping_pr_oracle(const metrics::LabeledScores& ls, int substeps = 1000) {
    std::vector<std::size_t> order(ls.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ls.scores[a] > ls.scores[b]; });
    double total_pos = 0;
    for (auto l : ls.labels) total_pos += l;

    double area = 0.0;
    double tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        double dtp = 0, dfp = 0;
        const double s = ls.scores[order[i]];
        while (i < order.size() && ls.scores[order[i]] == s) {
            if (ls.labels[order[i]]) dtp += 1; else dfp += 1;
            ++i;
        }
        if (dtp > 0) {
            const double skew = dfp / dtp;
            for (int unit = 0; unit < static_cast<int>(dtp); ++unit) {
                double acc = 0.0;
                for (int k = 0; k < substeps; ++k) {
                    const double x = unit + (k + 0.5) / substeps;
                    acc += (tp + x) / (tp + x + fp + skew * x);
                }
                area += acc / substeps / total_pos;
            }
        }
        tp += dtp;
        fp += dfp;
    }
    return area;
}

inline metrics::LabeledScores random_instance(std::mt19937_64& rng, std::size_t max_len, bool ties) {
    std::uniform_int_distribution<std::size_t> len_dist(2, max_len);
    const std::size_t n = len_dist(rng);
    std::uniform_int_distribution<int> coarse(0, 9);
    std::uniform_real_distribution<double> fine(0.0, 1.0);
    std::bernoulli_distribution coin(std::uniform_real_distribution<double>(0.05, 0.7)(rng));
    metrics::LabeledScores ls;
    for (std::size_t i = 0; i < n; ++i) ls.add(ties ? coarse(rng) / 10.0 : fine(rng), coin(rng));
    // both classes present
    ls.labels[0] = 1;
    ls.labels[1] = 0;
    return ls;
}

}  // namespace dylp::testing
