#pragma once

#include <cstdint>

#include "meshseg/features.hpp"
#include "meshseg/hmrf.hpp"
#include "meshseg/mesh.hpp"

namespace meshseg {

enum class SynthKind { grid_sheet, sphere, two_lobes };

/// Synthetic instance description. `resolution` controls mesh density
/// (grid side length, or sphere latitude rings); noise_sigma is the standard
/// deviation of isotropic Gaussian noise added to each feature entry.
struct SynthSpec {
    SynthKind kind = SynthKind::grid_sheet;
    int resolution = 8;
    int n_classes = 2;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

struct SynthData {
    TriangleMesh mesh;
    FeatureMatrix features; // centroid features + noise
    LabelField truth;       // planted contiguous regions
};

/// Build a mesh with planted contiguous label regions and noisy centroid
/// features. Deterministic per spec. Errors when n_classes exceeds the
/// plantable regions for the kind (grid columns, sphere rings, or the two
/// lobes).
SynthData synth(const SynthSpec& spec);

} // namespace meshseg
