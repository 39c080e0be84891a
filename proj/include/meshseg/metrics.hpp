#pragma once

#include <optional>
#include <vector>

#include "meshseg/adjacency.hpp"
#include "meshseg/hmrf.hpp"

namespace meshseg {

/// Fraction of neighbor pairs whose labels agree, in [0, 1]. Errors on an
/// empty pair set.
double boundary_smoothness(const LabelField& labels, const AdjacencyGraph& graph);

struct AccuracyResult {
    double accuracy = 0.0;
    std::vector<int> permutation; // permutation[predicted label] = matched truth label
    bool exact = true;            // false when the greedy fallback was used
};

/// Best matching fraction over label permutations. Exhaustive up to 8
/// classes; beyond that a greedy assignment is reported as a lower bound
/// with exact = false.
AccuracyResult label_accuracy(const LabelField& predicted, const LabelField& truth);

struct MetricsReport {
    double accuracy = 0.0;
    std::optional<double> boundary_smoothness; // absent without an adjacency graph
    std::vector<std::vector<long>> confusion;  // [truth][permuted prediction]
};

/// Accuracy, confusion counts under the best permutation, and (when a graph
/// is supplied) the smoothness of the predicted labeling.
MetricsReport make_metrics(const LabelField& predicted, const LabelField& truth,
                           const AdjacencyGraph* graph = nullptr);

} // namespace meshseg
