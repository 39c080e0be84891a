#pragma once

#include "meshseg/linalg.hpp"
#include "meshseg/mesh.hpp"

namespace meshseg {

enum class FeatureKind {
    centroid,        // 3 dims: face centroid
    centroid_normal, // 6 dims: centroid followed by the unit normal
};

struct FeatureConfig {
    FeatureKind kind = FeatureKind::centroid;
};

/// One feature row per face, in face order. Requesting normals on a
/// zero-area face is an error naming the face.
FeatureMatrix face_features(const TriangleMesh& mesh, const FeatureConfig& config = {});

} // namespace meshseg
