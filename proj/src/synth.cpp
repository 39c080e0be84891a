#include "meshseg/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "meshseg/rng.hpp"

namespace meshseg {

namespace {

void check_spec(const SynthSpec& spec) {
    if (spec.resolution < 2) throw std::invalid_argument("synth: resolution must be at least 2");
    if (spec.n_classes < 1) throw std::invalid_argument("synth: n_classes must be at least 1");
    if (!(spec.noise_sigma >= 0.0))
        throw std::invalid_argument("synth: noise_sigma must be nonnegative");
}

[[noreturn]] void too_many_classes(const SynthSpec& spec, int plantable) {
    throw std::invalid_argument("synth: n_classes " + std::to_string(spec.n_classes) +
                                " exceeds plantable regions (" + std::to_string(plantable) +
                                ") for this kind");
}

// Flat square sheet in the xy plane: resolution^2 vertices, each interior
// quad split into two triangles. Classes are planted as vertical bands of
// quad columns.
void build_grid_sheet(const SynthSpec& spec, SynthData& out) {
    const int r = spec.resolution;
    if (spec.n_classes > r - 1) too_many_classes(spec, r - 1);
    auto vid = [r](int i, int j) { return j * r + i; };
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < r; ++i)
            out.mesh.vertices.push_back({static_cast<double>(i), static_cast<double>(j), 0.0});
    for (int j = 0; j + 1 < r; ++j) {
        for (int i = 0; i + 1 < r; ++i) {
            const int band = i * spec.n_classes / (r - 1);
            out.mesh.faces.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            out.mesh.faces.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
            out.truth.labels.push_back(band);
            out.truth.labels.push_back(band);
        }
    }
}

// Closed latitude/longitude sphere. Appends faces and per-face stack indices.
void append_sphere(TriangleMesh& mesh, std::vector<int>& face_stack, const Vec3& center,
                   double radius, int stacks, int slices) {
    const double pi = std::numbers::pi_v<double>;
    const int base = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(center + Vec3{0.0, 0.0, radius}); // north pole
    for (int k = 1; k < stacks; ++k) {
        const double polar = pi * k / stacks;
        const double z = radius * std::cos(polar);
        const double ring = radius * std::sin(polar);
        for (int s = 0; s < slices; ++s) {
            const double azimuth = 2.0 * pi * s / slices;
            mesh.vertices.push_back(
                center + Vec3{ring * std::cos(azimuth), ring * std::sin(azimuth), z});
        }
    }
    mesh.vertices.push_back(center + Vec3{0.0, 0.0, -radius}); // south pole
    const int south = base + 1 + (stacks - 1) * slices;
    auto ring_vid = [&](int k, int s) { return base + 1 + (k - 1) * slices + (s % slices); };

    for (int s = 0; s < slices; ++s) {
        mesh.faces.push_back({base, ring_vid(1, s), ring_vid(1, s + 1)});
        face_stack.push_back(0);
    }
    for (int k = 1; k + 1 < stacks; ++k) {
        for (int s = 0; s < slices; ++s) {
            const int a = ring_vid(k, s), b = ring_vid(k, s + 1);
            const int c = ring_vid(k + 1, s + 1), d = ring_vid(k + 1, s);
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, d});
            face_stack.push_back(k);
            face_stack.push_back(k);
        }
    }
    for (int s = 0; s < slices; ++s) {
        mesh.faces.push_back({south, ring_vid(stacks - 1, s + 1), ring_vid(stacks - 1, s)});
        face_stack.push_back(stacks - 1);
    }
}

void build_sphere(const SynthSpec& spec, SynthData& out) {
    const int stacks = spec.resolution;
    if (spec.n_classes > stacks) too_many_classes(spec, stacks);
    std::vector<int> face_stack;
    append_sphere(out.mesh, face_stack, {0.0, 0.0, 0.0}, 1.0, stacks, 2 * spec.resolution);
    for (int stack : face_stack)
        out.truth.labels.push_back(stack * spec.n_classes / stacks);
}

void build_two_lobes(const SynthSpec& spec, SynthData& out) {
    if (spec.n_classes > 2) too_many_classes(spec, 2);
    std::vector<int> face_stack;
    append_sphere(out.mesh, face_stack, {-1.5, 0.0, 0.0}, 1.0, spec.resolution,
                  2 * spec.resolution);
    const std::size_t first_lobe_faces = out.mesh.faces.size();
    append_sphere(out.mesh, face_stack, {1.5, 0.0, 0.0}, 1.0, spec.resolution,
                  2 * spec.resolution);
    const int second_label = spec.n_classes > 1 ? 1 : 0;
    for (std::size_t f = 0; f < out.mesh.faces.size(); ++f)
        out.truth.labels.push_back(f < first_lobe_faces ? 0 : second_label);
}

} // namespace

SynthData synth(const SynthSpec& spec) {
    check_spec(spec);
    SynthData out;
    switch (spec.kind) {
        case SynthKind::grid_sheet: build_grid_sheet(spec, out); break;
        case SynthKind::sphere: build_sphere(spec, out); break;
        case SynthKind::two_lobes: build_two_lobes(spec, out); break;
    }
    out.truth.n_classes = spec.n_classes;
    out.features = face_features(out.mesh, {FeatureKind::centroid});
    if (spec.noise_sigma > 0.0) {
        Rng rng(spec.seed);
        for (std::size_t i = 0; i < out.features.rows(); ++i)
            for (std::size_t j = 0; j < out.features.cols(); ++j)
                out.features(i, j) += spec.noise_sigma * rng.normal();
    }
    return out;
}

} // namespace meshseg
