#include "meshseg/adjacency.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace meshseg {

AdjacencyGraph build_adjacency(const TriangleMesh& mesh) {
    const int vertex_count = static_cast<int>(mesh.vertices.size());
    for (const auto& tri : mesh.faces) {
        for (int idx : tri)
            if (idx < 0 || idx >= vertex_count)
                throw std::invalid_argument("build_adjacency: face index out of range");
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw std::invalid_argument("build_adjacency: face with repeated vertex index");
    }

    // ordered map keeps edge traversal, and thus error reporting, deterministic
    std::map<std::pair<int, int>, std::vector<int>> edge_faces;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& tri = mesh.faces[f];
        for (int k = 0; k < 3; ++k) {
            int a = tri[k], b = tri[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            edge_faces[{a, b}].push_back(static_cast<int>(f));
        }
    }

    AdjacencyGraph graph;
    graph.site_count = mesh.faces.size();
    graph.neighbors_of.resize(mesh.faces.size());
    for (const auto& [edge, faces] : edge_faces) {
        if (faces.size() > 2)
            throw std::invalid_argument("build_adjacency: non-manifold edge (" +
                                        std::to_string(edge.first) + ", " +
                                        std::to_string(edge.second) + ") shared by " +
                                        std::to_string(faces.size()) + " faces");
        if (faces.size() == 2 && faces[0] != faces[1])
            graph.neighbor_pairs.emplace_back(std::min(faces[0], faces[1]),
                                              std::max(faces[0], faces[1]));
    }
    std::sort(graph.neighbor_pairs.begin(), graph.neighbor_pairs.end());
    graph.neighbor_pairs.erase(
        std::unique(graph.neighbor_pairs.begin(), graph.neighbor_pairs.end()),
        graph.neighbor_pairs.end());
    for (const auto& [i, j] : graph.neighbor_pairs) {
        graph.neighbors_of[static_cast<std::size_t>(i)].push_back(j);
        graph.neighbors_of[static_cast<std::size_t>(j)].push_back(i);
    }
    for (auto& nbrs : graph.neighbors_of) std::sort(nbrs.begin(), nbrs.end());
    return graph;
}

} // namespace meshseg
