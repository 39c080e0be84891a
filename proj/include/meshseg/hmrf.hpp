#pragma once

#include <cstddef>

#include "meshseg/adjacency.hpp"
#include "meshseg/linalg.hpp"

namespace meshseg {

/// Per-site labels over the state space {0, ..., n_classes-1}.
struct LabelField {
    std::vector<int> labels;
    int n_classes = 0;

    friend bool operator==(const LabelField&, const LabelField&) = default;
};

struct EnergyBreakdown {
    double unary_total = 0.0;
    double pairwise_total = 0.0;
    double total = 0.0; // unary_total + pairwise_total at this evaluation order
};

/// Potts energy: sum_i unaries(i, x_i) + beta * #{(i,j) neighbors : x_i != x_j}.
/// Unaries are costs, site x class.
EnergyBreakdown potts_energy(const LabelField& labels, const AdjacencyGraph& graph,
                             const Matrix& unaries, double beta);

struct SweepResult {
    LabelField labels;
    std::size_t changed = 0;
};

/// One ICM pass in site index order. Each site moves to the label minimizing
/// unaries(i, l) + beta * (neighbors currently disagreeing with l), ties
/// toward the smallest label; updates propagate within the sweep. Never
/// increases the Potts energy.
SweepResult icm_sweep(const LabelField& labels, const AdjacencyGraph& graph,
                      const Matrix& unaries, double beta);

/// Repeat icm_sweep until a sweep changes nothing or max_sweeps is reached.
LabelField map_labels(const LabelField& initial, const AdjacencyGraph& graph,
                      const Matrix& unaries, double beta, int max_sweeps);

struct MapResult {
    LabelField labels;
    double energy = 0.0;
};

/// Exact minimizer by exhaustive enumeration; ties resolve to the
/// lexicographically smallest labeling. The label count is unaries.cols().
/// Guarded to n_classes^sites <= 1e6.
MapResult brute_force_map(const AdjacencyGraph& graph, const Matrix& unaries, double beta);

} // namespace meshseg
