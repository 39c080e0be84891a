"""Triangle mesh segmentation: Gaussian mixture emissions with a Potts
smoothness prior over face adjacency, estimated by EM with ICM label
inference. The compiled extension carries the implementation; this package
re-exports its public surface."""

from ._core import (  # noqa: F401
    AccuracyResult,
    AdjacencyGraph,
    ClassParams,
    CovarianceUpdate,
    DensityMode,
    EnergyBreakdown,
    FeatureConfig,
    FeatureKind,
    InitMode,
    InitResult,
    IoError,
    LabelField,
    MapResult,
    Matrix,
    MeshParseError,
    MetricsReport,
    ModelConfig,
    NumericError,
    RunConfig,
    SegmentationResult,
    SweepResult,
    SynthData,
    SynthKind,
    SynthSpec,
    TriangleMesh,
    Vec3,
    boundary_smoothness,
    brute_force_map,
    build_adjacency,
    e_step,
    emission_costs,
    face_features,
    icm_sweep,
    init_params,
    label_accuracy,
    load_mesh,
    log_density,
    log_likelihood,
    lower_bound,
    m_step,
    make_metrics,
    make_palette,
    map_labels,
    metrics_to_json,
    params_from_json,
    params_to_json,
    parse_obj,
    parse_ply,
    potts_energy,
    result_from_json,
    result_to_json,
    run,
    synth,
    write_ply,
    write_ply_colored,
)

__version__ = "0.1.0"
