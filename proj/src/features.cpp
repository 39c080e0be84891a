#include "meshseg/features.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace meshseg {

FeatureMatrix face_features(const TriangleMesh& mesh, const FeatureConfig& config) {
    const bool with_normals = config.kind == FeatureKind::centroid_normal;
    const std::size_t dim = with_normals ? 6 : 3;
    FeatureMatrix features(mesh.faces.size(), dim);
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& tri = mesh.faces[f];
        const Vec3& a = mesh.vertices[static_cast<std::size_t>(tri[0])];
        const Vec3& b = mesh.vertices[static_cast<std::size_t>(tri[1])];
        const Vec3& c = mesh.vertices[static_cast<std::size_t>(tri[2])];
        const Vec3 centroid = (1.0 / 3.0) * (a + b + c);
        features(f, 0) = centroid.x;
        features(f, 1) = centroid.y;
        features(f, 2) = centroid.z;
        if (with_normals) {
            const Vec3 n = cross(b - a, c - a);
            const double len = norm(n);
            if (!(len > 0.0) || !std::isfinite(len))
                throw std::invalid_argument("face_features: face " + std::to_string(f) +
                                            " has zero area; cannot take its normal");
            features(f, 3) = n.x / len;
            features(f, 4) = n.y / len;
            features(f, 5) = n.z / len;
        }
    }
    if (!features.all_finite())
        throw std::invalid_argument("face_features: non-finite feature entry");
    return features;
}

} // namespace meshseg
