#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "meshseg/adjacency.hpp"
#include "meshseg/em.hpp"
#include "meshseg/errors.hpp"
#include "meshseg/features.hpp"
#include "meshseg/hmrf.hpp"
#include "meshseg/mesh.hpp"
#include "meshseg/metrics.hpp"
#include "meshseg/model.hpp"
#include "meshseg/serialize.hpp"
#include "meshseg/synth.hpp"

namespace py = pybind11;
using namespace meshseg;

namespace {

Matrix matrix_from_buffer(const py::buffer& buffer) {
    const py::buffer_info info = buffer.request();
    if (info.ndim != 2) throw std::invalid_argument("Matrix expects a 2-d buffer");
    if (info.format != py::format_descriptor<double>::format())
        throw std::invalid_argument("Matrix expects float64 data");
    Matrix m(static_cast<std::size_t>(info.shape[0]), static_cast<std::size_t>(info.shape[1]));
    const char* base = static_cast<const char*>(info.ptr);
    for (py::ssize_t i = 0; i < info.shape[0]; ++i)
        for (py::ssize_t j = 0; j < info.shape[1]; ++j) {
            const char* cell = base + i * info.strides[0] + j * info.strides[1];
            double value;
            std::memcpy(&value, cell, sizeof value);
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = value;
        }
    return m;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mesh segmentation: Gaussian mixture emissions with a Potts prior over "
              "face adjacency, estimated by EM with ICM label inference";

    py::register_exception<ParseError>(m, "MeshParseError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<Matrix>(m, "Matrix", py::buffer_protocol())
        .def(py::init<>())
        .def(py::init<std::size_t, std::size_t, double>(), py::arg("rows"), py::arg("cols"),
             py::arg("fill") = 0.0)
        .def(py::init(&matrix_from_buffer))
        .def_static("from_rows", &Matrix::from_rows)
        .def_buffer([](Matrix& self) {
            return py::buffer_info(self.data().data(), sizeof(double),
                                   py::format_descriptor<double>::format(), 2,
                                   {self.rows(), self.cols()},
                                   {sizeof(double) * self.cols(), sizeof(double)});
        })
        .def_property_readonly("rows", &Matrix::rows)
        .def_property_readonly("cols", &Matrix::cols)
        .def("__getitem__",
             [](const Matrix& self, std::pair<std::size_t, std::size_t> index) {
                 if (index.first >= self.rows() || index.second >= self.cols())
                     throw py::index_error();
                 return self(index.first, index.second);
             })
        .def("__eq__", [](const Matrix& a, const Matrix& b) { return a == b; })
        .def("tolist", [](const Matrix& self) {
            std::vector<std::vector<double>> rows(self.rows());
            for (std::size_t i = 0; i < self.rows(); ++i)
                rows[i].assign(self.row(i).begin(), self.row(i).end());
            return rows;
        });

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<double, double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0,
             py::arg("z") = 0.0)
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z);

    py::class_<TriangleMesh>(m, "TriangleMesh")
        .def(py::init<>())
        .def_readwrite("vertices", &TriangleMesh::vertices)
        .def_readwrite("faces", &TriangleMesh::faces);

    py::class_<AdjacencyGraph>(m, "AdjacencyGraph")
        .def(py::init<>())
        .def_readonly("site_count", &AdjacencyGraph::site_count)
        .def_readonly("neighbor_pairs", &AdjacencyGraph::neighbor_pairs)
        .def_readonly("neighbors_of", &AdjacencyGraph::neighbors_of);

    py::class_<LabelField>(m, "LabelField")
        .def(py::init<std::vector<int>, int>(), py::arg("labels"), py::arg("n_classes"))
        .def_readwrite("labels", &LabelField::labels)
        .def_readwrite("n_classes", &LabelField::n_classes);

    py::enum_<FeatureKind>(m, "FeatureKind")
        .value("centroid", FeatureKind::centroid)
        .value("centroid_normal", FeatureKind::centroid_normal);

    py::class_<FeatureConfig>(m, "FeatureConfig")
        .def(py::init<>())
        .def_readwrite("kind", &FeatureConfig::kind);

    py::enum_<DensityMode>(m, "DensityMode")
        .value("corrected", DensityMode::corrected)
        .value("paper", DensityMode::paper);

    py::enum_<InitMode>(m, "InitMode")
        .value("paper", InitMode::paper)
        .value("kmeans", InitMode::kmeans);

    py::enum_<CovarianceUpdate>(m, "CovarianceUpdate")
        .value("full", CovarianceUpdate::full)
        .value("fixed_identity", CovarianceUpdate::fixed_identity);

    py::class_<ClassParams>(m, "ClassParams")
        .def(py::init<>())
        .def_readwrite("mean", &ClassParams::mean)
        .def_readwrite("covariance", &ClassParams::covariance)
        .def_readwrite("prior", &ClassParams::prior);

    py::class_<ModelConfig>(m, "ModelConfig")
        .def(py::init<>())
        .def_readwrite("n_classes", &ModelConfig::n_classes)
        .def_readwrite("density_mode", &ModelConfig::density_mode)
        .def_readwrite("init_mode", &ModelConfig::init_mode)
        .def_readwrite("covariance_update", &ModelConfig::covariance_update)
        .def_readwrite("ridge", &ModelConfig::ridge);

    py::class_<InitResult>(m, "InitResult")
        .def_readonly("params", &InitResult::params)
        .def_readonly("responsibilities", &InitResult::responsibilities);

    py::class_<EnergyBreakdown>(m, "EnergyBreakdown")
        .def_readonly("unary_total", &EnergyBreakdown::unary_total)
        .def_readonly("pairwise_total", &EnergyBreakdown::pairwise_total)
        .def_readonly("total", &EnergyBreakdown::total);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("labels", &SweepResult::labels)
        .def_readonly("changed", &SweepResult::changed);

    py::class_<MapResult>(m, "MapResult")
        .def_readonly("labels", &MapResult::labels)
        .def_readonly("energy", &MapResult::energy);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("beta", &RunConfig::beta)
        .def_readwrite("max_iterations", &RunConfig::max_iterations)
        .def_readwrite("tolerance", &RunConfig::tolerance)
        .def_readwrite("icm_sweeps_per_iteration", &RunConfig::icm_sweeps_per_iteration)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("model", &RunConfig::model);

    py::class_<SegmentationResult>(m, "SegmentationResult")
        .def_readonly("labels", &SegmentationResult::labels)
        .def_readonly("params", &SegmentationResult::params)
        .def_readonly("bound_trace", &SegmentationResult::bound_trace)
        .def_readonly("converged", &SegmentationResult::converged)
        .def_readonly("iterations", &SegmentationResult::iterations)
        .def_readonly("argmax_prior_class", &SegmentationResult::argmax_prior_class)
        .def_readonly("argmax_prior_value", &SegmentationResult::argmax_prior_value);

    py::enum_<SynthKind>(m, "SynthKind")
        .value("grid_sheet", SynthKind::grid_sheet)
        .value("sphere", SynthKind::sphere)
        .value("two_lobes", SynthKind::two_lobes);

    py::class_<SynthSpec>(m, "SynthSpec")
        .def(py::init<>())
        .def_readwrite("kind", &SynthSpec::kind)
        .def_readwrite("resolution", &SynthSpec::resolution)
        .def_readwrite("n_classes", &SynthSpec::n_classes)
        .def_readwrite("noise_sigma", &SynthSpec::noise_sigma)
        .def_readwrite("seed", &SynthSpec::seed);

    py::class_<SynthData>(m, "SynthData")
        .def_readonly("mesh", &SynthData::mesh)
        .def_readonly("features", &SynthData::features)
        .def_readonly("truth", &SynthData::truth);

    py::class_<AccuracyResult>(m, "AccuracyResult")
        .def_readonly("accuracy", &AccuracyResult::accuracy)
        .def_readonly("permutation", &AccuracyResult::permutation)
        .def_readonly("exact", &AccuracyResult::exact);

    py::class_<MetricsReport>(m, "MetricsReport")
        .def_readonly("accuracy", &MetricsReport::accuracy)
        .def_readonly("boundary_smoothness", &MetricsReport::boundary_smoothness)
        .def_readonly("confusion", &MetricsReport::confusion);

    // mesh and feature plumbing
    m.def("parse_obj", [](const std::string& text) { return parse_obj(text); }, py::arg("text"));
    m.def("parse_ply", [](const std::string& text) { return parse_ply(text); }, py::arg("text"));
    m.def("write_ply", &write_ply, py::arg("mesh"));
    m.def("write_ply_colored", &write_ply_colored, py::arg("mesh"), py::arg("labels"),
          py::arg("palette"));
    m.def("make_palette", &make_palette, py::arg("n"));
    m.def("load_mesh", &load_mesh, py::arg("path"));
    m.def("build_adjacency", &build_adjacency, py::arg("mesh"));
    m.def("face_features", &face_features, py::arg("mesh"), py::arg("config") = FeatureConfig{});

    // model
    m.def(
        "log_density",
        [](const std::vector<double>& x, const ClassParams& params, DensityMode mode,
           double ridge) { return log_density(x, params, mode, ridge); },
        py::arg("x"), py::arg("params"), py::arg("mode") = DensityMode::corrected,
        py::arg("ridge") = 1e-6);
    m.def("init_params", &init_params, py::arg("features"), py::arg("config"), py::arg("seed"));

    // label field inference
    m.def("potts_energy", &potts_energy, py::arg("labels"), py::arg("graph"), py::arg("unaries"),
          py::arg("beta"));
    m.def("icm_sweep", &icm_sweep, py::arg("labels"), py::arg("graph"), py::arg("unaries"),
          py::arg("beta"));
    m.def("map_labels", &map_labels, py::arg("initial"), py::arg("graph"), py::arg("unaries"),
          py::arg("beta"), py::arg("max_sweeps"));
    m.def("brute_force_map", &brute_force_map, py::arg("graph"), py::arg("unaries"),
          py::arg("beta"));

    // EM machinery
    m.def("log_likelihood", &log_likelihood, py::arg("features"), py::arg("params"),
          py::arg("mode") = DensityMode::corrected, py::arg("ridge") = 1e-6);
    m.def("emission_costs", &emission_costs, py::arg("features"), py::arg("params"),
          py::arg("mode") = DensityMode::corrected, py::arg("ridge") = 1e-6);
    m.def("e_step", &e_step, py::arg("features"), py::arg("params"), py::arg("labels"),
          py::arg("graph"), py::arg("beta"), py::arg("mode") = DensityMode::corrected,
          py::arg("ridge") = 1e-6);
    m.def("m_step", &m_step, py::arg("features"), py::arg("responsibilities"), py::arg("config"));
    m.def("lower_bound", &lower_bound, py::arg("features"), py::arg("responsibilities"),
          py::arg("params"), py::arg("mode") = DensityMode::corrected, py::arg("ridge") = 1e-6);
    m.def("run", &run, py::arg("features"), py::arg("graph"), py::arg("config"));

    // benchmarks and metrics
    m.def("synth", &synth, py::arg("spec"));
    m.def("boundary_smoothness", &boundary_smoothness, py::arg("labels"), py::arg("graph"));
    m.def("label_accuracy", &label_accuracy, py::arg("predicted"), py::arg("truth"));
    m.def(
        "make_metrics",
        [](const LabelField& predicted, const LabelField& truth) {
            return make_metrics(predicted, truth, nullptr);
        },
        py::arg("predicted"), py::arg("truth"));
    m.def(
        "make_metrics",
        [](const LabelField& predicted, const LabelField& truth, const AdjacencyGraph& graph) {
            return make_metrics(predicted, truth, &graph);
        },
        py::arg("predicted"), py::arg("truth"), py::arg("graph"));

    // JSON interchange (documents as strings)
    m.def("params_to_json", [](const std::vector<ClassParams>& params) {
        return params_to_json(params).dump(2);
    });
    m.def("params_from_json",
          [](const std::string& text) { return params_from_json(ojson::parse(text)); });
    m.def("result_to_json",
          [](const SegmentationResult& result) { return result_to_json(result).dump(2); });
    m.def("result_from_json",
          [](const std::string& text) { return result_from_json(ojson::parse(text)); });
    m.def("metrics_to_json",
          [](const MetricsReport& report) { return metrics_to_json(report).dump(2); });
}
