#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "meshseg/adjacency.hpp"
#include "meshseg/em.hpp"
#include "meshseg/errors.hpp"
#include "meshseg/features.hpp"
#include "meshseg/mesh.hpp"
#include "meshseg/metrics.hpp"
#include "meshseg/serialize.hpp"
#include "meshseg/synth.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumeric = 4;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw meshseg::IoError("cannot write '" + path + "'");
    out << content;
    if (!out) throw meshseg::IoError("write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw meshseg::IoError("cannot read '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

struct SegmentOptions {
    std::string input;
    std::string output;
    std::string ply;
    int classes = 2;
    double beta = 0.0;
    int max_iter = 100;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    std::string init = "kmeans";
    std::string density = "corrected";
    std::string cov = "full";
    std::string features = "centroid";
};

int run_segment(const SegmentOptions& opt) {
    const meshseg::TriangleMesh mesh = meshseg::load_mesh(opt.input);
    meshseg::FeatureConfig fc;
    fc.kind = opt.features == "centroid-normal" ? meshseg::FeatureKind::centroid_normal
                                                : meshseg::FeatureKind::centroid;
    const meshseg::FeatureMatrix features = meshseg::face_features(mesh, fc);
    const meshseg::AdjacencyGraph graph = meshseg::build_adjacency(mesh);

    meshseg::RunConfig config;
    config.beta = opt.beta;
    config.max_iterations = opt.max_iter;
    config.tolerance = opt.tol;
    config.seed = opt.seed;
    config.model.n_classes = opt.classes;
    config.model.init_mode =
        opt.init == "paper" ? meshseg::InitMode::paper : meshseg::InitMode::kmeans;
    config.model.density_mode =
        opt.density == "paper" ? meshseg::DensityMode::paper : meshseg::DensityMode::corrected;
    config.model.covariance_update = opt.cov == "identity"
                                         ? meshseg::CovarianceUpdate::fixed_identity
                                         : meshseg::CovarianceUpdate::full;

    const meshseg::SegmentationResult result = meshseg::run(features, graph, config);
    write_file(opt.output, meshseg::result_to_json(result).dump(2) + "\n");
    if (!opt.ply.empty()) {
        const auto palette = meshseg::make_palette(opt.classes);
        write_file(opt.ply, meshseg::write_ply_colored(mesh, result.labels.labels, palette));
    }
    char bound[64] = "nan";
    if (!result.bound_trace.empty())
        std::snprintf(bound, sizeof bound, "%.17g", result.bound_trace.back());
    std::printf("iters=%d bound=%s converged=%s\n", result.iterations, bound,
                result.converged ? "true" : "false");
    return 0;
}

struct SynthOptions {
    std::string kind = "grid_sheet";
    int resolution = 8;
    int classes = 2;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string mesh_path;
    std::string features_path;
    std::string truth_path;
};

int run_synth(const SynthOptions& opt) {
    meshseg::SynthSpec spec;
    if (opt.kind == "grid_sheet") spec.kind = meshseg::SynthKind::grid_sheet;
    else if (opt.kind == "sphere") spec.kind = meshseg::SynthKind::sphere;
    else spec.kind = meshseg::SynthKind::two_lobes;
    spec.resolution = opt.resolution;
    spec.n_classes = opt.classes;
    spec.noise_sigma = opt.noise;
    spec.seed = opt.seed;

    const meshseg::SynthData data = meshseg::synth(spec);
    write_file(opt.mesh_path, meshseg::write_ply(data.mesh));
    write_file(opt.features_path, meshseg::features_to_csv(data.features));
    write_file(opt.truth_path, meshseg::labels_to_csv(data.truth.labels));
    std::printf("faces=%zu classes=%d\n", data.mesh.faces.size(), spec.n_classes);
    return 0;
}

struct EvalOptions {
    std::string predicted;
    std::string truth;
    std::string mesh_path;
    std::string output;
};

std::vector<int> read_predicted(const std::string& path) {
    const std::string text = read_file(path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
        return meshseg::result_from_json(meshseg::ojson::parse(text)).labels.labels;
    return meshseg::labels_from_csv(text);
}

int run_eval(const EvalOptions& opt) {
    const std::vector<int> predicted = read_predicted(opt.predicted);
    const std::vector<int> truth = meshseg::labels_from_csv(read_file(opt.truth));
    if (predicted.size() != truth.size())
        throw std::invalid_argument("eval: predicted has " + std::to_string(predicted.size()) +
                                    " labels but truth has " + std::to_string(truth.size()));
    int n_classes = 1;
    for (int l : predicted) n_classes = std::max(n_classes, l + 1);
    for (int l : truth) n_classes = std::max(n_classes, l + 1);
    const meshseg::LabelField pred_field{predicted, n_classes};
    const meshseg::LabelField truth_field{truth, n_classes};

    meshseg::MetricsReport report;
    if (!opt.mesh_path.empty()) {
        const meshseg::AdjacencyGraph graph =
            meshseg::build_adjacency(meshseg::load_mesh(opt.mesh_path));
        report = meshseg::make_metrics(pred_field, truth_field, &graph);
    } else {
        report = meshseg::make_metrics(pred_field, truth_field, nullptr);
    }
    if (!opt.output.empty())
        write_file(opt.output, meshseg::metrics_to_json(report).dump(2) + "\n");
    char acc[64], smooth[64] = "n/a";
    std::snprintf(acc, sizeof acc, "%.17g", report.accuracy);
    if (report.boundary_smoothness)
        std::snprintf(smooth, sizeof smooth, "%.17g", *report.boundary_smoothness);
    std::printf("accuracy=%s boundary_smoothness=%s\n", acc, smooth);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Segment triangle meshes into labeled blocks: Gaussian mixture emissions, "
                 "Potts smoothing over face adjacency, EM parameter estimation"};
    app.require_subcommand(1);

    SegmentOptions seg;
    CLI::App* segment = app.add_subcommand("segment", "Segment a mesh and write the result JSON");
    segment->add_option("--input", seg.input, "Input mesh (.obj or .ply)")->required();
    segment->add_option("--output", seg.output, "Output result JSON path")->required();
    segment->add_option("--ply", seg.ply, "Also write a colored PLY of the labeling");
    segment->add_option("--classes", seg.classes, "Number of classes")->required()
        ->check(CLI::PositiveNumber);
    segment->add_option("--beta", seg.beta, "Neighbor smoothing strength (default 0)")
        ->check(CLI::NonNegativeNumber);
    segment->add_option("--max-iter", seg.max_iter, "Iteration cap (default 100)")
        ->check(CLI::PositiveNumber);
    segment->add_option("--tol", seg.tol, "Relative bound-change tolerance (default 1e-6)");
    segment->add_option("--seed", seg.seed, "Random seed (default 0)");
    segment->add_option("--init", seg.init, "Initialization: kmeans (default) or paper")
        ->check(CLI::IsMember({"kmeans", "paper"}));
    segment->add_option("--density", seg.density, "Density: corrected (default) or paper")
        ->check(CLI::IsMember({"corrected", "paper"}));
    segment->add_option("--cov", seg.cov, "Covariance update: full (default) or identity")
        ->check(CLI::IsMember({"full", "identity"}));
    segment->add_option("--features", seg.features,
                        "Features: centroid (default) or centroid-normal")
        ->check(CLI::IsMember({"centroid", "centroid-normal"}));

    SynthOptions syn;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Generate a synthetic mesh with planted labels");
    synth_cmd->add_option("--kind", syn.kind, "grid_sheet, sphere, or two_lobes")
        ->check(CLI::IsMember({"grid_sheet", "sphere", "two_lobes"}));
    synth_cmd->add_option("--resolution", syn.resolution, "Mesh resolution (default 8)")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--classes", syn.classes, "Planted class count (default 2)")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--noise", syn.noise, "Feature noise sigma (default 0)")
        ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--seed", syn.seed, "Random seed (default 0)");
    synth_cmd->add_option("--mesh", syn.mesh_path, "Output mesh PLY path")->required();
    synth_cmd->add_option("--features", syn.features_path, "Output features CSV path")->required();
    synth_cmd->add_option("--truth", syn.truth_path, "Output truth labels CSV path")->required();

    EvalOptions ev;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Score a predicted labeling against truth");
    eval_cmd->add_option("--predicted", ev.predicted,
                         "Predicted labels: CSV, or a segment result .json")->required();
    eval_cmd->add_option("--truth", ev.truth, "Truth labels CSV")->required();
    eval_cmd->add_option("--mesh", ev.mesh_path,
                         "Mesh for boundary smoothness (optional; null in JSON when absent)");
    eval_cmd->add_option("--output", ev.output, "Output metrics JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (segment->parsed()) return run_segment(seg);
        if (synth_cmd->parsed()) return run_synth(syn);
        return run_eval(ev);
    } catch (const meshseg::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const meshseg::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const meshseg::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
