#pragma once

#include <cstdint>
#include <vector>

#include "meshseg/adjacency.hpp"
#include "meshseg/hmrf.hpp"
#include "meshseg/linalg.hpp"
#include "meshseg/model.hpp"

namespace meshseg {

struct RunConfig {
    double beta = 0.0;
    int max_iterations = 100;
    double tolerance = 1e-6; // relative change of the lower bound
    int icm_sweeps_per_iteration = 10;
    std::uint64_t seed = 0;
    ModelConfig model;
};

/// Mutable state of one run: responsibilities (site x class, rows sum to 1),
/// current parameters, the current label field, and the lower-bound trace.
struct EmState {
    Matrix responsibilities;
    std::vector<ClassParams> params;
    LabelField labels;
    std::vector<double> bound_trace;
    int iteration = 0;
};

struct SegmentationResult {
    LabelField labels;
    std::vector<ClassParams> params;
    std::vector<double> bound_trace;
    bool converged = false;
    int iterations = 0;
    int argmax_prior_class = 0;
    double argmax_prior_value = 0.0;
};

/// Mixture log-likelihood: sum_i logsumexp_j (log prior_j + log f(y_i; theta_j)).
/// Priors must sum to 1 within 1e-9; the feature set must be nonempty.
double log_likelihood(const FeatureMatrix& features, const std::vector<ClassParams>& params,
                      DensityMode mode = DensityMode::corrected, double ridge = 1e-6);

/// Negative emission log-densities, site x class. These are the unary costs
/// fed to the label-field inference.
Matrix emission_costs(const FeatureMatrix& features, const std::vector<ClassParams>& params,
                      DensityMode mode = DensityMode::corrected, double ridge = 1e-6);

/// Posterior responsibilities. Q_i(j) is proportional to
///   prior_j * f(y_i; theta_j) * exp(-beta * #{k in N_i : labels[k] != j}),
/// computed in log space and row-normalized. With beta = 0 the neighbor term
/// vanishes and the labels argument is ignored.
Matrix e_step(const FeatureMatrix& features, const std::vector<ClassParams>& params,
              const LabelField& labels, const AdjacencyGraph& graph, double beta,
              DensityMode mode = DensityMode::corrected, double ridge = 1e-6);

/// Closed-form weighted updates: mean_j = sum_i Q_ij y_i / mass_j,
/// prior_j = mass_j / N, and for covariance_update == full the weighted
/// scatter plus ridge * I (fixed_identity keeps the identity). A class whose
/// mass falls below 1e-12 is re-seeded at the data point with the lowest
/// maximum responsibility, its covariance reset to the identity and its
/// prior to 1/N (priors renormalized afterwards).
std::vector<ClassParams> m_step(const FeatureMatrix& features, const Matrix& responsibilities,
                                const ModelConfig& config);

/// The Jensen surrogate: sum_i sum_j Q_ij (log prior_j + log f(y_i; theta_j)
/// - log Q_ij), with Q_ij = 0 terms contributing zero. Never exceeds
/// log_likelihood; equal when Q is the exact posterior.
double lower_bound(const FeatureMatrix& features, const Matrix& responsibilities,
                   const std::vector<ClassParams>& params,
                   DensityMode mode = DensityMode::corrected, double ridge = 1e-6);

/// The full driver. Each iteration: (a) with beta > 0, re-infer the label
/// field by ICM under the current emission costs; (b) refresh
/// responsibilities; (c) re-estimate parameters; (d) append the lower bound.
/// Stops when the relative bound change drops below tolerance or after
/// max_iterations. Final labels are the per-site argmax responsibility when
/// beta = 0, otherwise the ICM labels. A non-finite bound aborts.
SegmentationResult run(const FeatureMatrix& features, const AdjacencyGraph& graph,
                       const RunConfig& config);

} // namespace meshseg
