#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "meshseg/adjacency.hpp"
#include "meshseg/em.hpp"
#include "meshseg/metrics.hpp"
#include "meshseg/rng.hpp"
#include "meshseg/synth.hpp"

using namespace meshseg;

namespace {

AdjacencyGraph ring_graph(int sites) {
    AdjacencyGraph g;
    g.site_count = static_cast<std::size_t>(sites);
    g.neighbors_of.resize(g.site_count);
    for (int i = 0; i < sites; ++i) {
        const int j = (i + 1) % sites;
        g.neighbor_pairs.emplace_back(std::min(i, j), std::max(i, j));
        g.neighbors_of[static_cast<std::size_t>(i)].push_back(j);
        g.neighbors_of[static_cast<std::size_t>(j)].push_back(i);
    }
    return g;
}

} // namespace

TEST_CASE("synth: grid_sheet has 2 (r-1)^2 faces") {
    for (int r : {2, 5, 10}) {
        const SynthData data = synth({SynthKind::grid_sheet, r, 1, 0.0, 0});
        CHECK(data.mesh.faces.size() == static_cast<std::size_t>(2 * (r - 1) * (r - 1)));
        CHECK(data.features.rows() == data.mesh.faces.size());
        CHECK(data.truth.labels.size() == data.mesh.faces.size());
    }
}

TEST_CASE("synth: meshes are valid and spheres are closed") {
    const SynthData sphere = synth({SynthKind::sphere, 6, 3, 0.0, 1});
    const AdjacencyGraph g = build_adjacency(sphere.mesh);
    CHECK(2 * g.neighbor_pairs.size() == 3 * sphere.mesh.faces.size());

    const SynthData lobes = synth({SynthKind::two_lobes, 5, 2, 0.0, 1});
    const AdjacencyGraph g2 = build_adjacency(lobes.mesh);
    CHECK(2 * g2.neighbor_pairs.size() == 3 * lobes.mesh.faces.size());
    // planted regions are contiguous: no adjacency crosses the lobes
    for (const auto& [i, j] : g2.neighbor_pairs)
        CHECK(lobes.truth.labels[static_cast<std::size_t>(i)] ==
              lobes.truth.labels[static_cast<std::size_t>(j)]);
}

TEST_CASE("synth: noiseless two_lobes is perfectly separable at beta=0") {
    const SynthData data = synth({SynthKind::two_lobes, 6, 2, 0.0, 7});
    const AdjacencyGraph graph = build_adjacency(data.mesh);
    RunConfig config;
    config.model.n_classes = 2;
    config.seed = 7;
    const SegmentationResult result = run(data.features, graph, config);
    CHECK(label_accuracy(result.labels, data.truth).accuracy == 1.0);
}

TEST_CASE("synth: identical specs give identical bits") {
    const SynthSpec spec{SynthKind::two_lobes, 5, 2, 0.7, 42};
    const SynthData a = synth(spec);
    const SynthData b = synth(spec);
    CHECK(a.features == b.features);
    CHECK(a.truth.labels == b.truth.labels);
    REQUIRE(a.mesh.vertices.size() == b.mesh.vertices.size());
    for (std::size_t v = 0; v < a.mesh.vertices.size(); ++v) {
        CHECK(a.mesh.vertices[v].x == b.mesh.vertices[v].x);
        CHECK(a.mesh.vertices[v].y == b.mesh.vertices[v].y);
        CHECK(a.mesh.vertices[v].z == b.mesh.vertices[v].z);
    }
    CHECK(a.mesh.faces == b.mesh.faces);
}

TEST_CASE("synth: class counts beyond the plantable regions are rejected") {
    CHECK_THROWS_AS(synth({SynthKind::grid_sheet, 4, 4, 0.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(synth({SynthKind::sphere, 3, 4, 0.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(synth({SynthKind::two_lobes, 4, 3, 0.0, 0}), std::invalid_argument);
    CHECK_NOTHROW(synth({SynthKind::grid_sheet, 4, 3, 0.0, 0}));
}

TEST_CASE("boundary_smoothness") {
    SUBCASE("constant labelings score 1") {
        const AdjacencyGraph g = ring_graph(5);
        CHECK(boundary_smoothness({std::vector<int>(5, 2), 3}, g) == 1.0);
    }
    SUBCASE("one disagreeing edge scores 0") {
        AdjacencyGraph g;
        g.site_count = 2;
        g.neighbor_pairs = {{0, 1}};
        g.neighbors_of = {{1}, {0}};
        CHECK(boundary_smoothness({{0, 1}, 2}, g) == 0.0);
    }
    SUBCASE("6-ring with two blocks scores 4/6") {
        const AdjacencyGraph g = ring_graph(6);
        CHECK(boundary_smoothness({{0, 0, 0, 1, 1, 1}, 2}, g) ==
              doctest::Approx(4.0 / 6.0).epsilon(1e-15));
    }
    SUBCASE("an empty pair set is an error") {
        AdjacencyGraph g;
        g.site_count = 1;
        g.neighbors_of.resize(1);
        CHECK_THROWS_AS(boundary_smoothness({{0}, 1}, g), std::invalid_argument);
    }
}

TEST_CASE("label_accuracy") {
    SUBCASE("identical labelings score 1 with the identity permutation") {
        const LabelField t{{0, 1, 2, 0}, 3};
        const AccuracyResult r = label_accuracy(t, t);
        CHECK(r.accuracy == 1.0);
        CHECK(r.permutation == std::vector<int>{0, 1, 2});
        CHECK(r.exact);
    }
    SUBCASE("a label swap still scores 1") {
        const LabelField t{{0, 0, 1, 1}, 2};
        const LabelField p{{1, 1, 0, 0}, 2};
        const AccuracyResult r = label_accuracy(p, t);
        CHECK(r.accuracy == 1.0);
        CHECK(r.permutation == std::vector<int>{1, 0});
    }
    SUBCASE("one mismatch in four scores 0.75") {
        const LabelField t{{0, 0, 1, 1}, 2};
        const LabelField p{{0, 1, 1, 1}, 2};
        CHECK(label_accuracy(p, t).accuracy == 0.75);
    }
    SUBCASE("permutation invariance on random labelings") {
        Rng rng(64);
        for (int trial = 0; trial < 20; ++trial) {
            const int k = 2 + static_cast<int>(rng.uniform_index(4));
            LabelField t{std::vector<int>(30), k}, p{std::vector<int>(30), k};
            for (int& l : t.labels) l = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(k)));
            for (int& l : p.labels) l = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(k)));
            std::vector<int> sigma(static_cast<std::size_t>(k));
            for (int j = 0; j < k; ++j) sigma[static_cast<std::size_t>(j)] = j;
            for (int j = k - 1; j > 0; --j)
                std::swap(sigma[static_cast<std::size_t>(j)],
                          sigma[rng.uniform_index(static_cast<std::size_t>(j + 1))]);
            LabelField shuffled = p;
            for (int& l : shuffled.labels) l = sigma[static_cast<std::size_t>(l)];
            CHECK(label_accuracy(shuffled, t).accuracy == label_accuracy(p, t).accuracy);
        }
    }
    SUBCASE("mismatched inputs are rejected") {
        CHECK_THROWS_AS(label_accuracy({{0, 1}, 2}, {{0}, 2}), std::invalid_argument);
        CHECK_THROWS_AS(label_accuracy({{0, 1}, 2}, {{0, 1}, 3}), std::invalid_argument);
    }
    SUBCASE("above 8 classes the greedy fallback is flagged") {
        LabelField t{std::vector<int>(18), 9};
        for (int i = 0; i < 18; ++i) t.labels[static_cast<std::size_t>(i)] = i % 9;
        const AccuracyResult r = label_accuracy(t, t);
        CHECK(r.accuracy == 1.0);
        CHECK_FALSE(r.exact);
    }
}

TEST_CASE("make_metrics ties accuracy to the confusion matrix") {
    const LabelField t{{0, 0, 1, 1, 1}, 2};
    const LabelField p{{1, 0, 0, 0, 0}, 2};
    // best permutation maps predicted 0 -> truth 1 (3 matches) and 1 -> 0 (1 match)
    const MetricsReport report = make_metrics(p, t, nullptr);
    CHECK(report.accuracy == doctest::Approx(0.8));
    long diag = report.confusion[0][0] + report.confusion[1][1];
    CHECK(diag == 4);
    CHECK_FALSE(report.boundary_smoothness.has_value());
}

TEST_CASE("the neighbor prior raises smoothness on noisy instances (statistical)") {
    const int seeds = 20;
    double base_acc = 0.0, base_smooth = 0.0;
    std::vector<double> betas{0.5, 1.0, 2.0};
    std::vector<double> acc(betas.size(), 0.0), smooth(betas.size(), 0.0);
    for (int seed = 0; seed < seeds; ++seed) {
        const SynthData data =
            synth({SynthKind::two_lobes, 6, 2, 1.0, static_cast<std::uint64_t>(seed)});
        const AdjacencyGraph graph = build_adjacency(data.mesh);
        RunConfig config;
        config.model.n_classes = 2;
        config.seed = static_cast<std::uint64_t>(seed);
        config.beta = 0.0;
        const SegmentationResult plain = run(data.features, graph, config);
        base_acc += label_accuracy(plain.labels, data.truth).accuracy;
        base_smooth += boundary_smoothness(plain.labels, graph);
        for (std::size_t b = 0; b < betas.size(); ++b) {
            config.beta = betas[b];
            const SegmentationResult smoothed = run(data.features, graph, config);
            acc[b] += label_accuracy(smoothed.labels, data.truth).accuracy;
            smooth[b] += boundary_smoothness(smoothed.labels, graph);
        }
    }
    for (std::size_t b = 0; b < betas.size(); ++b) {
        CHECK(smooth[b] / seeds >= base_smooth / seeds);
        CHECK(acc[b] / seeds >= base_acc / seeds);
    }
}
