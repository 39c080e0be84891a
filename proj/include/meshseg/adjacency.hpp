#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "meshseg/mesh.hpp"

namespace meshseg {

/// The site set (one site per face) and its neighborhood system: two sites
/// are neighbors iff their faces share an edge. The relation is symmetric
/// and irreflexive; pairs are stored once with first < second, sorted.
struct AdjacencyGraph {
    std::size_t site_count = 0;
    std::vector<std::pair<int, int>> neighbor_pairs;
    std::vector<std::vector<int>> neighbors_of;
};

/// Build the face adjacency graph. An edge shared by more than two faces is
/// a hard error naming the edge: the neighborhood system is ill-defined on
/// non-manifold input.
AdjacencyGraph build_adjacency(const TriangleMesh& mesh);

} // namespace meshseg
