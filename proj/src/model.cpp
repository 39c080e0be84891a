#include "meshseg/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "meshseg/errors.hpp"
#include "meshseg/rng.hpp"

namespace meshseg {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

} // namespace

GaussianDensity GaussianDensity::make(const ClassParams& params, DensityMode mode, double ridge) {
    const std::size_t d = params.mean.size();
    if (params.covariance.rows() != d || params.covariance.cols() != d)
        throw std::invalid_argument("GaussianDensity: covariance shape does not match mean");
    if (!(ridge > 0.0)) throw std::invalid_argument("GaussianDensity: ridge must be positive");

    auto chol = cholesky(params.covariance);
    if (!chol) {
        // rescue nearly singular covariances with a trace-scaled ridge
        const double scale = ridge * (trace(params.covariance) / static_cast<double>(d));
        chol = cholesky(add_scaled_identity(params.covariance, scale));
        if (!chol)
            throw NumericError("covariance not positive definite after ridge regularization");
    }

    GaussianDensity g;
    g.mean_ = params.mean;
    g.chol_ = std::move(*chol);
    g.log_det_ = cholesky_log_det(g.chol_);
    const double dims = mode == DensityMode::corrected ? static_cast<double>(d) : 1.0;
    g.constant_ = -0.5 * dims * kLog2Pi;
    return g;
}

double GaussianDensity::log_density(std::span<const double> x) const {
    if (x.size() != mean_.size())
        throw std::invalid_argument("log_density: dimension mismatch");
    std::vector<double> diff(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) diff[k] = x[k] - mean_[k];
    const double quad = cholesky_quadratic(chol_, diff);
    return -0.5 * quad - 0.5 * log_det_ + constant_;
}

double log_density(std::span<const double> x, const ClassParams& params, DensityMode mode,
                   double ridge) {
    return GaussianDensity::make(params, mode, ridge).log_density(x);
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

struct KmeansResult {
    Matrix centers;              // k x d
    std::vector<int> assignment; // per point
    std::vector<std::size_t> counts;
};

KmeansResult kmeans(const FeatureMatrix& features, int k, Rng& rng) {
    const std::size_t n = features.rows(), d = features.cols();
    const std::size_t kk = static_cast<std::size_t>(k);
    Matrix centers(kk, d);

    // k-means++ seeding
    std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
    std::size_t first = rng.uniform_index(n);
    for (std::size_t j = 0; j < d; ++j) centers(0, j) = features(first, j);
    for (std::size_t c = 1; c < kk; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dist2[i] = std::min(dist2[i], squared_distance(features.row(i), centers.row(c - 1)));
            total += dist2[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double r = rng.uniform() * total;
            double cum = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cum += dist2[i];
                if (cum > r) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.uniform_index(n); // all points coincide with chosen centers
        }
        for (std::size_t j = 0; j < d; ++j) centers(c, j) = features(pick, j);
    }

    std::vector<int> assignment(n, 0);
    std::vector<std::size_t> counts(kk, 0);
    for (int iter = 0; iter < 10; ++iter) {
        // assignment, ties toward the smaller center index
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (std::size_t c = 0; c < kk; ++c) {
                const double d2 = squared_distance(features.row(i), centers.row(c));
                if (d2 < best) {
                    best = d2;
                    best_c = static_cast<int>(c);
                }
            }
            assignment[i] = best_c;
        }
        counts.assign(kk, 0);
        Matrix sums(kk, d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(assignment[i]);
            ++counts[c];
            for (std::size_t j = 0; j < d; ++j) sums(c, j) += features(i, j);
        }
        for (std::size_t c = 0; c < kk; ++c) {
            if (counts[c] == 0) {
                // re-seed an empty cluster at the point farthest from its center
                std::size_t far = 0;
                double far_d2 = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const auto ci = static_cast<std::size_t>(assignment[i]);
                    const double d2 = squared_distance(features.row(i), centers.row(ci));
                    if (d2 > far_d2) {
                        far_d2 = d2;
                        far = i;
                    }
                }
                for (std::size_t j = 0; j < d; ++j) centers(c, j) = features(far, j);
            } else {
                for (std::size_t j = 0; j < d; ++j)
                    centers(c, j) = sums(c, j) / static_cast<double>(counts[c]);
            }
        }
    }
    // final assignment against the refined centers
    counts.assign(kk, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (std::size_t c = 0; c < kk; ++c) {
            const double d2 = squared_distance(features.row(i), centers.row(c));
            if (d2 < best) {
                best = d2;
                best_c = static_cast<int>(c);
            }
        }
        assignment[i] = best_c;
        ++counts[static_cast<std::size_t>(best_c)];
    }
    return {std::move(centers), std::move(assignment), std::move(counts)};
}

} // namespace

InitResult init_params(const FeatureMatrix& features, const ModelConfig& config,
                       std::uint64_t seed) {
    const std::size_t n = features.rows(), d = features.cols();
    const int k = config.n_classes;
    if (k < 1) throw std::invalid_argument("init_params: n_classes must be at least 1");
    if (static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("init_params: n_classes exceeds the number of sites");
    if (!features.all_finite())
        throw std::invalid_argument("init_params: non-finite feature entry");

    InitResult out;
    out.responsibilities = Matrix(n, static_cast<std::size_t>(k), 0.0);
    out.params.resize(static_cast<std::size_t>(k));

    if (config.init_mode == InitMode::paper) {
        for (int j = 0; j < k; ++j) {
            ClassParams& p = out.params[static_cast<std::size_t>(j)];
            p.mean.assign(d, 2.0 * j);
            p.covariance = Matrix::identity(d);
            p.prior = 1.0 / k;
        }
        return out;
    }

    Rng rng(seed);
    KmeansResult km = kmeans(features, k, rng);
    for (int j = 0; j < k; ++j) {
        const auto c = static_cast<std::size_t>(j);
        ClassParams& p = out.params[c];
        p.mean.assign(d, 0.0);
        for (std::size_t col = 0; col < d; ++col) p.mean[col] = km.centers(c, col);
        Matrix cov(d, d, 0.0);
        if (km.counts[c] > 0) {
            for (std::size_t i = 0; i < n; ++i) {
                if (static_cast<std::size_t>(km.assignment[i]) != c) continue;
                for (std::size_t col = 0; col < d; ++col) {
                    const double diff = features(i, col) - p.mean[col];
                    cov(col, col) += diff * diff;
                }
            }
            for (std::size_t col = 0; col < d; ++col)
                cov(col, col) /= static_cast<double>(km.counts[c]);
        }
        p.covariance = add_scaled_identity(cov, config.ridge);
        p.prior = static_cast<double>(km.counts[c]) / static_cast<double>(n);
    }
    for (std::size_t i = 0; i < n; ++i)
        out.responsibilities(i, static_cast<std::size_t>(km.assignment[i])) = 1.0;
    return out;
}

} // namespace meshseg
