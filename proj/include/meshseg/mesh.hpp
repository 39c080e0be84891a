#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "meshseg/linalg.hpp"

namespace meshseg {

/// Vertices plus triangular faces. Every face holds three distinct
/// vertex indices, each below vertices.size().
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
};

/// Parse ASCII Wavefront OBJ text. Handles `v` and `f` records and `#`
/// comments; `f` entries may carry `/`-separated texture/normal sub-indices,
/// which are ignored. Polygons with more than three vertices are
/// fan-triangulated; negative indices resolve against the vertices seen so
/// far. Throws ParseError on malformed records, out-of-range indices, faces
/// with fewer than three distinct vertices, or input without faces.
TriangleMesh parse_obj(std::string_view text);

/// Parse ASCII PLY 1.0. Requires a `vertex` element with x/y/z properties
/// and a `face` element with a vertex index list; other declared properties
/// are consumed and dropped. Binary PLY is rejected with an explicit message,
/// as is any header/body element-count mismatch.
TriangleMesh parse_ply(std::string_view text);

std::string write_ply(const TriangleMesh& mesh);

using Rgb = std::array<std::uint8_t, 3>;

/// ASCII PLY with one red/green/blue triple per face, taken from
/// palette[labels[face]]. Labels without a palette entry are an error.
/// Vertex coordinates are printed with 9 significant digits.
std::string write_ply_colored(const TriangleMesh& mesh, const std::vector<int>& labels,
                              const std::vector<Rgb>& palette);

/// n visually distinct colors (hue wheel).
std::vector<Rgb> make_palette(int n);

/// Read a mesh from disk, dispatching on the .obj/.ply extension.
TriangleMesh load_mesh(const std::string& path);

} // namespace meshseg
