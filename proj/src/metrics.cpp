#include "meshseg/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace meshseg {

double boundary_smoothness(const LabelField& labels, const AdjacencyGraph& graph) {
    if (labels.labels.size() != graph.site_count)
        throw std::invalid_argument("boundary_smoothness: label count does not match sites");
    if (graph.neighbor_pairs.empty())
        throw std::invalid_argument("boundary_smoothness: adjacency has no neighbor pairs");
    std::size_t agree = 0;
    for (const auto& [i, j] : graph.neighbor_pairs)
        if (labels.labels[static_cast<std::size_t>(i)] ==
            labels.labels[static_cast<std::size_t>(j)])
            ++agree;
    return static_cast<double>(agree) / static_cast<double>(graph.neighbor_pairs.size());
}

namespace {

std::vector<std::vector<long>> raw_confusion(const LabelField& predicted, const LabelField& truth) {
    const auto k = static_cast<std::size_t>(truth.n_classes);
    std::vector<std::vector<long>> counts(k, std::vector<long>(k, 0));
    for (std::size_t i = 0; i < truth.labels.size(); ++i)
        ++counts[static_cast<std::size_t>(truth.labels[i])]
                [static_cast<std::size_t>(predicted.labels[i])];
    return counts;
}

} // namespace

AccuracyResult label_accuracy(const LabelField& predicted, const LabelField& truth) {
    if (predicted.labels.size() != truth.labels.size())
        throw std::invalid_argument("label_accuracy: length mismatch");
    if (predicted.n_classes != truth.n_classes)
        throw std::invalid_argument("label_accuracy: n_classes mismatch");
    if (truth.labels.empty()) throw std::invalid_argument("label_accuracy: empty labelings");
    const int k = truth.n_classes;
    const auto n = static_cast<double>(truth.labels.size());

    // counts[t][p]: matches scored by a permutation sending p -> t
    const auto counts = raw_confusion(predicted, truth);

    AccuracyResult result;
    if (k <= 8) {
        std::vector<int> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), 0);
        long best = -1;
        std::vector<int> best_perm = perm;
        do {
            long matches = 0;
            for (int p = 0; p < k; ++p)
                matches += counts[static_cast<std::size_t>(perm[static_cast<std::size_t>(p)])]
                                 [static_cast<std::size_t>(p)];
            if (matches > best) { // strict: first (lexicographically smallest) maximizer wins
                best = matches;
                best_perm = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        result.accuracy = static_cast<double>(best) / n;
        result.permutation = best_perm;
        result.exact = true;
        return result;
    }

    // greedy fallback above 8 classes: repeatedly take the largest unassigned
    // count cell; the score is a lower bound on the exhaustive optimum
    std::vector<bool> t_used(static_cast<std::size_t>(k), false);
    std::vector<bool> p_used(static_cast<std::size_t>(k), false);
    std::vector<int> perm(static_cast<std::size_t>(k), -1);
    long matches = 0;
    for (int step = 0; step < k; ++step) {
        long best_count = -1;
        int best_t = -1, best_p = -1;
        for (int t = 0; t < k; ++t) {
            if (t_used[static_cast<std::size_t>(t)]) continue;
            for (int p = 0; p < k; ++p) {
                if (p_used[static_cast<std::size_t>(p)]) continue;
                if (counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)] > best_count) {
                    best_count = counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
                    best_t = t;
                    best_p = p;
                }
            }
        }
        t_used[static_cast<std::size_t>(best_t)] = true;
        p_used[static_cast<std::size_t>(best_p)] = true;
        perm[static_cast<std::size_t>(best_p)] = best_t;
        matches += best_count;
    }
    result.accuracy = static_cast<double>(matches) / n;
    result.permutation = perm;
    result.exact = false;
    return result;
}

MetricsReport make_metrics(const LabelField& predicted, const LabelField& truth,
                           const AdjacencyGraph* graph) {
    const AccuracyResult acc = label_accuracy(predicted, truth);
    MetricsReport report;
    report.accuracy = acc.accuracy;
    const auto k = static_cast<std::size_t>(truth.n_classes);
    report.confusion.assign(k, std::vector<long>(k, 0));
    for (std::size_t i = 0; i < truth.labels.size(); ++i) {
        const auto mapped = static_cast<std::size_t>(
            acc.permutation[static_cast<std::size_t>(predicted.labels[i])]);
        ++report.confusion[static_cast<std::size_t>(truth.labels[i])][mapped];
    }
    if (graph) report.boundary_smoothness = boundary_smoothness(predicted, *graph);
    return report;
}

} // namespace meshseg
