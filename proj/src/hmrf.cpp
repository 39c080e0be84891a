#include "meshseg/hmrf.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace meshseg {

namespace {

void check_shapes(const LabelField& labels, const AdjacencyGraph& graph, const Matrix& unaries,
                  double beta) {
    if (labels.labels.size() != graph.site_count)
        throw std::invalid_argument("label count does not match site count");
    if (unaries.rows() != graph.site_count)
        throw std::invalid_argument("unary rows do not match site count");
    if (unaries.cols() != static_cast<std::size_t>(labels.n_classes))
        throw std::invalid_argument("unary columns do not match n_classes");
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
    for (int l : labels.labels)
        if (l < 0 || l >= labels.n_classes)
            throw std::invalid_argument("label out of range");
}

} // namespace

EnergyBreakdown potts_energy(const LabelField& labels, const AdjacencyGraph& graph,
                             const Matrix& unaries, double beta) {
    check_shapes(labels, graph, unaries, beta);
    EnergyBreakdown e;
    for (std::size_t i = 0; i < graph.site_count; ++i)
        e.unary_total += unaries(i, static_cast<std::size_t>(labels.labels[i]));
    std::size_t disagreements = 0;
    for (const auto& [i, j] : graph.neighbor_pairs)
        if (labels.labels[static_cast<std::size_t>(i)] !=
            labels.labels[static_cast<std::size_t>(j)])
            ++disagreements;
    e.pairwise_total = beta * static_cast<double>(disagreements);
    e.total = e.unary_total + e.pairwise_total;
    return e;
}

SweepResult icm_sweep(const LabelField& labels, const AdjacencyGraph& graph,
                      const Matrix& unaries, double beta) {
    check_shapes(labels, graph, unaries, beta);
    SweepResult result{labels, 0};
    std::vector<int>& x = result.labels.labels;
    const int n_classes = labels.n_classes;
    for (std::size_t i = 0; i < graph.site_count; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_label = 0;
        for (int l = 0; l < n_classes; ++l) {
            std::size_t disagree = 0;
            for (int nb : graph.neighbors_of[i])
                if (x[static_cast<std::size_t>(nb)] != l) ++disagree;
            const double cost =
                unaries(i, static_cast<std::size_t>(l)) + beta * static_cast<double>(disagree);
            if (cost < best) { // strict: ties stay at the smallest label
                best = cost;
                best_label = l;
            }
        }
        if (best_label != x[i]) ++result.changed;
        x[i] = best_label;
    }
    return result;
}

LabelField map_labels(const LabelField& initial, const AdjacencyGraph& graph,
                      const Matrix& unaries, double beta, int max_sweeps) {
    if (max_sweeps < 1) throw std::invalid_argument("map_labels: max_sweeps must be at least 1");
    LabelField current = initial;
    for (int s = 0; s < max_sweeps; ++s) {
        SweepResult r = icm_sweep(current, graph, unaries, beta);
        current = std::move(r.labels);
        if (r.changed == 0) break;
    }
    return current;
}

MapResult brute_force_map(const AdjacencyGraph& graph, const Matrix& unaries, double beta) {
    const std::size_t n = graph.site_count;
    const int n_classes = static_cast<int>(unaries.cols());
    if (n_classes < 1) throw std::invalid_argument("brute_force_map: no classes");

    double combinations = 1.0;
    for (std::size_t i = 0; i < n; ++i) combinations *= static_cast<double>(n_classes);
    if (combinations > 1e6)
        throw std::invalid_argument("brute_force_map: instance too large (" +
                                    std::to_string(n_classes) + "^" + std::to_string(n) +
                                    " labelings)");

    LabelField current{std::vector<int>(n, 0), n_classes};
    MapResult best{current, potts_energy(current, graph, unaries, beta).total};
    // odometer with site 0 most significant: lexicographic enumeration, so a
    // strict improvement test keeps the lexicographically smallest optimum
    while (true) {
        std::size_t pos = n;
        while (pos > 0) {
            --pos;
            if (++current.labels[pos] < n_classes) break;
            current.labels[pos] = 0;
            if (pos == 0) return best;
        }
        if (n == 0) return best;
        const double energy = potts_energy(current, graph, unaries, beta).total;
        if (energy < best.energy) {
            best.labels = current;
            best.energy = energy;
        }
    }
}

} // namespace meshseg
