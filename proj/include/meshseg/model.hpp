#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "meshseg/linalg.hpp"

namespace meshseg {

/// Per-class Gaussian parameters: mean, covariance, mixing prior.
/// Treated as an immutable value once constructed.
struct ClassParams {
    std::vector<double> mean;
    Matrix covariance; // symmetric positive definite
    double prior = 0.0;
};

/// `corrected` is the proper multivariate normal log-density. `paper` keeps
/// the constant 1/sqrt(2*pi) regardless of dimension; the two differ by the
/// fixed offset (d-1)/2 * log(2*pi), so argmax-based labelings agree.
enum class DensityMode { corrected, paper };

/// `kmeans` seeds from the data (k-means++ plus Lloyd refinement). `paper`
/// is the fixed ladder: zero responsibilities, identity covariances,
/// mean_j = (2j, ..., 2j), uniform priors — deterministic and data-independent.
enum class InitMode { paper, kmeans };

enum class CovarianceUpdate { full, fixed_identity };

struct ModelConfig {
    int n_classes = 2;
    DensityMode density_mode = DensityMode::corrected;
    InitMode init_mode = InitMode::kmeans;
    CovarianceUpdate covariance_update = CovarianceUpdate::full;
    double ridge = 1e-6;
};

/// Precomputed Cholesky form of one class density, so per-site evaluation
/// is a triangular solve. Factorization is attempted on the covariance as
/// given; if that fails, once more after adding ridge * (trace/d) * I.
/// Still not positive definite after the ridge is an error.
class GaussianDensity {
public:
    static GaussianDensity make(const ClassParams& params, DensityMode mode, double ridge);

    double log_density(std::span<const double> x) const;

    std::size_t dim() const { return mean_.size(); }

private:
    std::vector<double> mean_;
    Matrix chol_;
    double log_det_ = 0.0;
    double constant_ = 0.0;
};

/// Log of the class-conditional density f(x; params) in the requested mode.
double log_density(std::span<const double> x, const ClassParams& params, DensityMode mode,
                   double ridge = 1e-6);

struct InitResult {
    std::vector<ClassParams> params;
    Matrix responsibilities; // site x class
};

/// Initial parameters and responsibilities. `paper` mode is the fixed ladder
/// described at InitMode; `kmeans` mode runs k-means++ seeding and 10 Lloyd
/// iterations, then sets means to the cluster centers, covariances to the
/// per-cluster diagonal covariance plus ridge * I, priors to the cluster
/// fractions, and responsibilities to the one-hot cluster assignment.
/// Deterministic given (features, config, seed).
InitResult init_params(const FeatureMatrix& features, const ModelConfig& config,
                       std::uint64_t seed);

} // namespace meshseg
