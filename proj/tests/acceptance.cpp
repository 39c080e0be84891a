// Acceptance suite: every release criterion in one binary, one line each.
// Exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "meshseg/adjacency.hpp"
#include "meshseg/em.hpp"
#include "meshseg/features.hpp"
#include "meshseg/hmrf.hpp"
#include "meshseg/mesh.hpp"
#include "meshseg/metrics.hpp"
#include "meshseg/model.hpp"
#include "meshseg/rng.hpp"
#include "meshseg/serialize.hpp"
#include "meshseg/synth.hpp"

namespace fs = std::filesystem;
using namespace meshseg;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& message) {
        if (!condition && ok) {
            ok = false;
            detail = message;
        }
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

AdjacencyGraph isolated_sites(std::size_t n) {
    AdjacencyGraph g;
    g.site_count = n;
    g.neighbors_of.resize(n);
    return g;
}

FeatureMatrix blob_features(int points, int clusters, std::uint64_t seed) {
    Rng rng(seed);
    Matrix centers(static_cast<std::size_t>(clusters), 3);
    for (double& c : centers.data()) c = rng.uniform(-5.0, 5.0);
    FeatureMatrix features(static_cast<std::size_t>(points), 3);
    for (int i = 0; i < points; ++i) {
        const auto c = static_cast<std::size_t>(i % clusters);
        for (std::size_t j = 0; j < 3; ++j)
            features(static_cast<std::size_t>(i), j) = centers(c, j) + 1.5 * rng.normal();
    }
    return features;
}

// ---- criterion 1: EM bound monotonicity at beta = 0 ------------------------

Check em_monotonicity() {
    Check check;
    const auto started = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FeatureMatrix features = blob_features(500, 3, seed);
        RunConfig config;
        config.model.n_classes = 3;
        config.seed = seed;
        const SegmentationResult result = run(features, isolated_sites(500), config);
        for (std::size_t t = 1; t < result.bound_trace.size(); ++t)
            check.require(result.bound_trace[t] >= result.bound_trace[t - 1] - 1e-9,
                          "bound decreased at seed " + std::to_string(seed) + " step " +
                              std::to_string(t));
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    check.require(elapsed < 5.0, "runtime " + std::to_string(elapsed) + "s exceeds 5s");
    return check;
}

// ---- criterion 2: Jensen bound structure ------------------------------------

Check jensen_structure() {
    Check check;
    Rng rng(99);
    for (int draw = 0; draw < 50; ++draw) {
        const std::size_t n = 5 + rng.uniform_index(20), d = 1 + rng.uniform_index(3);
        FeatureMatrix features(n, d);
        for (double& v : features.data()) v = rng.uniform(-4.0, 4.0);
        const int k = 1 + static_cast<int>(rng.uniform_index(3));
        std::vector<ClassParams> params;
        double prior_total = 0.0;
        for (int j = 0; j < k; ++j) {
            ClassParams p;
            p.mean.resize(d);
            for (double& m : p.mean) m = rng.uniform(-4.0, 4.0);
            Matrix a(d, d);
            for (double& v : a.data()) v = rng.uniform(-1.0, 1.0);
            p.covariance = Matrix(d, d, 0.0);
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < d; ++c) {
                    for (std::size_t m = 0; m < d; ++m)
                        p.covariance(r, c) += a(r, m) * a(c, m);
                    if (r == c) p.covariance(r, c) += 0.5;
                }
            p.prior = rng.uniform(0.1, 1.0);
            prior_total += p.prior;
            params.push_back(std::move(p));
        }
        for (ClassParams& p : params) p.prior /= prior_total;

        Matrix q(n, static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
                q(i, j) = rng.uniform(0.01, 1.0);
                row += q(i, j);
            }
            for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) q(i, j) /= row;
        }

        const double ll = log_likelihood(features, params);
        check.require(lower_bound(features, q, params) <= ll + 1e-12,
                      "bound exceeded likelihood on draw " + std::to_string(draw));
        const Matrix post = e_step(features, params, {}, isolated_sites(n), 0.0);
        const double gap = std::abs(lower_bound(features, post, params) - ll);
        check.require(gap <= 1e-10,
                      "posterior gap " + std::to_string(gap) + " on draw " + std::to_string(draw));
    }
    return check;
}

// ---- criterion 3: exhaustive MAP oracle vs ICM -------------------------------

Check inference_oracle() {
    Check check;
    const auto started = std::chrono::steady_clock::now();
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t sites = 1 + rng.uniform_index(10);
        const int classes = 1 + static_cast<int>(rng.uniform_index(3));
        AdjacencyGraph graph = isolated_sites(sites);
        for (std::size_t i = 0; i < sites; ++i)
            for (std::size_t j = i + 1; j < sites; ++j)
                if (rng.uniform() < 0.3) {
                    graph.neighbor_pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
                    graph.neighbors_of[i].push_back(static_cast<int>(j));
                    graph.neighbors_of[j].push_back(static_cast<int>(i));
                }
        Matrix unaries(sites, static_cast<std::size_t>(classes));
        for (double& u : unaries.data()) u = rng.uniform(0.0, 1.0);
        const double beta = trial % 4 == 0 ? 0.0 : rng.uniform(0.0, 2.0);
        LabelField initial{std::vector<int>(sites), classes};
        for (int& l : initial.labels)
            l = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(classes)));

        const MapResult exact = brute_force_map(graph, unaries, beta);
        const LabelField approx = map_labels(initial, graph, unaries, beta, 20);
        const double approx_energy = potts_energy(approx, graph, unaries, beta).total;
        check.require(exact.energy <= approx_energy + 1e-12,
                      "oracle beat by ICM on trial " + std::to_string(trial));

        if (beta == 0.0) {
            bool unique = true;
            for (std::size_t i = 0; i < sites && unique; ++i) {
                int wins = 0;
                double best = unaries(i, 0);
                for (int l = 1; l < classes; ++l) best = std::min(best, unaries(i, static_cast<std::size_t>(l)));
                for (int l = 0; l < classes; ++l)
                    if (unaries(i, static_cast<std::size_t>(l)) == best) ++wins;
                unique = wins == 1;
            }
            if (unique)
                check.require(approx_energy == exact.energy,
                              "beta=0 inexact with unique argmins on trial " +
                                  std::to_string(trial));
        }
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    check.require(elapsed < 10.0, "runtime " + std::to_string(elapsed) + "s exceeds 10s");
    return check;
}

// ---- criterion 4: faithful ladder initialization and density ----------------

Check ladder_fidelity() {
    Check check;
    ModelConfig config;
    config.n_classes = 4;
    config.init_mode = InitMode::paper;
    config.density_mode = DensityMode::paper;
    config.covariance_update = CovarianceUpdate::fixed_identity;

    Matrix features(25, 3);
    Rng rng(3);
    for (double& v : features.data()) v = rng.uniform(0.0, 6.0);

    const InitResult init = init_params(features, config, 0);
    for (double r : init.responsibilities.data())
        check.require(r == 0.0, "initial responsibilities are not all zero");
    for (int j = 0; j < 4; ++j) {
        const ClassParams& p = init.params[static_cast<std::size_t>(j)];
        check.require(p.covariance == Matrix::identity(3), "initial covariance is not I");
        check.require(p.mean == std::vector<double>(3, 2.0 * j), "initial mean is not 2j");
        check.require(p.prior == 0.25, "initial prior is not 1/4");
    }

    // first-iteration densities against a straight-line evaluation of
    // p = |S|^{-1/2} exp(-(x-mu)^T S^{-1} (x-mu) / 2) / sqrt(2 pi), S = I
    const Matrix costs = emission_costs(features, init.params, DensityMode::paper);
    for (std::size_t i = 0; i < features.rows(); ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            double quad = 0.0;
            for (std::size_t kk = 0; kk < 3; ++kk) {
                const double diff = features(i, kk) - init.params[j].mean[kk];
                quad += diff * diff;
            }
            const double direct =
                std::exp(-0.5 * quad) / std::sqrt(2.0 * 3.141592653589793);
            const double via_model = std::exp(-costs(i, j));
            check.require(std::abs(via_model - direct) <= 1e-12,
                          "density mismatch at site " + std::to_string(i) + " class " +
                              std::to_string(j));
        }
    return check;
}

// ---- criterion 5: the smoothing prior helps on noisy instances ---------------

Check smoothing_improves() {
    Check check;
    const auto started = std::chrono::steady_clock::now();
    const int seeds = 20;
    double acc0 = 0.0, acc1 = 0.0, smooth0 = 0.0, smooth1 = 0.0;
    for (int seed = 0; seed < seeds; ++seed) {
        const SynthData data =
            synth({SynthKind::two_lobes, 8, 2, 1.5, static_cast<std::uint64_t>(seed)});
        const AdjacencyGraph graph = build_adjacency(data.mesh);
        RunConfig config;
        config.model.n_classes = 2;
        config.seed = static_cast<std::uint64_t>(seed);

        config.beta = 0.0;
        const SegmentationResult plain = run(data.features, graph, config);
        acc0 += label_accuracy(plain.labels, data.truth).accuracy;
        smooth0 += boundary_smoothness(plain.labels, graph);

        config.beta = 1.0;
        const SegmentationResult smoothed = run(data.features, graph, config);
        acc1 += label_accuracy(smoothed.labels, data.truth).accuracy;
        smooth1 += boundary_smoothness(smoothed.labels, graph);
    }
    acc0 /= seeds;
    acc1 /= seeds;
    smooth0 /= seeds;
    smooth1 /= seeds;
    char buf[160];
    std::snprintf(buf, sizeof buf, "acc %.4f -> %.4f, smoothness %.4f -> %.4f", acc0, acc1,
                  smooth0, smooth1);
    check.detail = buf;
    check.require(acc0 >= 0.60 && acc0 <= 0.90,
                  "baseline accuracy " + std::to_string(acc0) + " outside [0.60, 0.90]");
    check.require(acc1 > acc0, std::string("accuracy did not improve: ") + buf);
    check.require(smooth1 > smooth0, std::string("smoothness did not improve: ") + buf);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    check.require(elapsed < 30.0, "runtime " + std::to_string(elapsed) + "s exceeds 30s");
    return check;
}

// ---- criterion 6: parser fixtures ---------------------------------------------

Check parser_fixtures() {
    Check check;
    const std::string dir = MESHSEG_FIXTURE_DIR;
    const TriangleMesh cube = parse_obj(read_file(dir + "/cube.obj"));
    check.require(cube.vertices.size() == 8, "cube vertex count");
    check.require(cube.faces.size() == 12, "cube face count");
    const AdjacencyGraph cube_graph = build_adjacency(cube);
    check.require(cube_graph.neighbor_pairs.size() == 18, "cube adjacency pairs");

    const TriangleMesh tetra = parse_ply(read_file(dir + "/tetrahedron.ply"));
    check.require(tetra.faces.size() == 4, "tetrahedron face count");
    check.require(build_adjacency(tetra).neighbor_pairs.size() == 6, "tetrahedron pairs");

    std::vector<int> labels(12, 0);
    for (std::size_t f = 0; f < 6; ++f) labels[f] = 1;
    const TriangleMesh back = parse_ply(write_ply_colored(cube, labels, make_palette(2)));
    check.require(back.faces == cube.faces, "colored PLY round-trip changed faces");
    return check;
}

// ---- criterion 7: CLI determinism ---------------------------------------------

Check cli_determinism() {
    Check check;
    const fs::path base = fs::temp_directory_path() / "meshseg_acceptance";
    fs::remove_all(base);
    auto pipeline = [&](const fs::path& dir) {
        fs::create_directories(dir);
        const std::string mesh = (dir / "m.ply").string();
        const std::string feat = (dir / "f.csv").string();
        const std::string truth = (dir / "t.csv").string();
        const std::string result = (dir / "out.json").string();
        const std::string seg_ply = (dir / "seg.ply").string();
        const std::string metrics = (dir / "metrics.json").string();
        const std::string cli = MESHSEG_CLI_BIN;
        std::vector<std::string> commands{
            cli + " synth --kind two_lobes --resolution 6 --classes 2 --noise 1.0 --seed 11" +
                " --mesh " + mesh + " --features " + feat + " --truth " + truth + " > " +
                (dir / "synth.out").string(),
            cli + " segment --input " + mesh + " --classes 2 --beta 1.0 --seed 11 --output " +
                result + " --ply " + seg_ply + " > " + (dir / "segment.out").string(),
            cli + " eval --predicted " + result + " --truth " + truth + " --mesh " + mesh +
                " --output " + metrics + " > " + (dir / "eval.out").string(),
        };
        for (const std::string& command : commands)
            if (std::system(command.c_str()) != 0) return false;
        return true;
    };
    check.require(pipeline(base / "run1"), "first pipeline run failed");
    check.require(pipeline(base / "run2"), "second pipeline run failed");
    if (!check.ok) return check;
    for (const char* name : {"m.ply", "f.csv", "t.csv", "out.json", "seg.ply", "metrics.json",
                             "synth.out", "segment.out", "eval.out"})
        check.require(read_file((base / "run1" / name).string()) ==
                          read_file((base / "run2" / name).string()),
                      std::string("output differs between runs: ") + name);
    return check;
}

} // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        std::function<Check()> body;
    };
    const std::vector<Criterion> criteria{
        {1, "EM bound monotone at beta=0 (500 points, 3 classes, 20 seeds)", em_monotonicity},
        {2, "lower bound never exceeds the likelihood; tight at the posterior", jensen_structure},
        {3, "ICM never beats the exhaustive oracle; exact at beta=0", inference_oracle},
        {4, "ladder init and fixed-constant density reproduce the reference formulas",
         ladder_fidelity},
        {5, "beta=1 beats beta=0 on noisy two-lobe accuracy and smoothness", smoothing_improves},
        {6, "parser fixtures: cube, tetrahedron, colored round-trip", parser_fixtures},
        {7, "synth + segment + eval are byte-reproducible", cli_determinism},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        Check check;
        try {
            check = criterion.body();
        } catch (const std::exception& e) {
            check.ok = false;
            check.detail = std::string("exception: ") + e.what();
        }
        if (check.ok) {
            std::printf("[PASS] criterion %d: %s%s%s\n", criterion.number, criterion.name,
                        check.detail.empty() ? "" : " -- ", check.detail.c_str());
        } else {
            ++failures;
            std::printf("[FAIL] criterion %d: %s -- %s\n", criterion.number, criterion.name,
                        check.detail.c_str());
        }
    }
    if (failures == 0)
        std::printf("all %zu criteria passed\n", criteria.size());
    else
        std::printf("%d of %zu criteria FAILED\n", failures, criteria.size());
    return failures;
}
