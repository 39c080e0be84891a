#include "meshseg/em.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "meshseg/errors.hpp"

namespace meshseg {

namespace {

std::vector<GaussianDensity> make_evaluators(const std::vector<ClassParams>& params,
                                             DensityMode mode, double ridge) {
    std::vector<GaussianDensity> out;
    out.reserve(params.size());
    for (const ClassParams& p : params) out.push_back(GaussianDensity::make(p, mode, ridge));
    return out;
}

void check_features(const FeatureMatrix& features, const std::vector<ClassParams>& params) {
    if (features.rows() == 0) throw std::invalid_argument("empty feature set");
    if (params.empty()) throw std::invalid_argument("no class parameters");
    for (const ClassParams& p : params)
        if (p.mean.size() != features.cols())
            throw std::invalid_argument("feature dimension does not match class parameters");
}

int argmax_row(std::span<const double> row) {
    int best = 0;
    for (std::size_t j = 1; j < row.size(); ++j)
        if (row[j] > row[static_cast<std::size_t>(best)]) best = static_cast<int>(j);
    return best;
}

} // namespace

double log_likelihood(const FeatureMatrix& features, const std::vector<ClassParams>& params,
                      DensityMode mode, double ridge) {
    check_features(features, params);
    double prior_sum = 0.0;
    for (const ClassParams& p : params) prior_sum += p.prior;
    if (std::abs(prior_sum - 1.0) > 1e-9)
        throw std::invalid_argument("class priors must sum to 1");

    const auto evaluators = make_evaluators(params, mode, ridge);
    std::vector<double> terms(params.size());
    double total = 0.0;
    for (std::size_t i = 0; i < features.rows(); ++i) {
        for (std::size_t j = 0; j < params.size(); ++j)
            terms[j] = std::log(params[j].prior) + evaluators[j].log_density(features.row(i));
        total += log_sum_exp(terms);
    }
    if (!std::isfinite(total)) throw NumericError("log-likelihood is not finite");
    return total;
}

Matrix emission_costs(const FeatureMatrix& features, const std::vector<ClassParams>& params,
                      DensityMode mode, double ridge) {
    check_features(features, params);
    const auto evaluators = make_evaluators(params, mode, ridge);
    Matrix costs(features.rows(), params.size());
    for (std::size_t i = 0; i < features.rows(); ++i)
        for (std::size_t j = 0; j < params.size(); ++j)
            costs(i, j) = -evaluators[j].log_density(features.row(i));
    return costs;
}

Matrix e_step(const FeatureMatrix& features, const std::vector<ClassParams>& params,
              const LabelField& labels, const AdjacencyGraph& graph, double beta,
              DensityMode mode, double ridge) {
    check_features(features, params);
    if (!(beta >= 0.0)) throw std::invalid_argument("e_step: beta must be nonnegative");
    const bool coupled = beta > 0.0;
    if (coupled) {
        if (labels.labels.size() != features.rows() || graph.site_count != features.rows())
            throw std::invalid_argument("e_step: labels/graph do not match the feature rows");
    }

    const auto evaluators = make_evaluators(params, mode, ridge);
    const std::size_t k = params.size();
    Matrix resp(features.rows(), k);
    std::vector<double> t(k);
    for (std::size_t i = 0; i < features.rows(); ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            t[j] = std::log(params[j].prior) + evaluators[j].log_density(features.row(i));
            if (coupled) {
                std::size_t disagree = 0;
                for (int nb : graph.neighbors_of[i])
                    if (labels.labels[static_cast<std::size_t>(nb)] != static_cast<int>(j))
                        ++disagree;
                t[j] -= beta * static_cast<double>(disagree);
            }
        }
        double hi = -std::numeric_limits<double>::infinity();
        for (double v : t)
            if (v > hi) hi = v;
        if (!std::isfinite(hi))
            throw NumericError("e_step: every class underflowed at site " + std::to_string(i));
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            resp(i, j) = std::exp(t[j] - hi);
            sum += resp(i, j);
        }
        for (std::size_t j = 0; j < k; ++j) resp(i, j) /= sum;
    }
    return resp;
}

std::vector<ClassParams> m_step(const FeatureMatrix& features, const Matrix& responsibilities,
                                const ModelConfig& config) {
    const std::size_t n = features.rows(), d = features.cols();
    const std::size_t k = responsibilities.cols();
    if (n == 0) throw std::invalid_argument("empty feature set");
    if (responsibilities.rows() != n)
        throw std::invalid_argument("m_step: responsibility rows do not match feature rows");
    if (k != static_cast<std::size_t>(config.n_classes))
        throw std::invalid_argument("m_step: responsibility columns do not match n_classes");

    constexpr double kEmptyMass = 1e-12;
    std::vector<ClassParams> params(k);
    std::vector<double> mass(k, 0.0);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) mass[j] += responsibilities(i, j);

    bool rescued = false;
    for (std::size_t j = 0; j < k; ++j) {
        ClassParams& p = params[j];
        p.mean.assign(d, 0.0);
        if (mass[j] < kEmptyMass) {
            // re-seed a dead class at the point the current model explains worst
            std::size_t worst = 0;
            double worst_max = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                double row_max = 0.0;
                for (std::size_t c = 0; c < k; ++c) row_max = std::max(row_max, responsibilities(i, c));
                if (row_max < worst_max) {
                    worst_max = row_max;
                    worst = i;
                }
            }
            for (std::size_t col = 0; col < d; ++col) p.mean[col] = features(worst, col);
            p.covariance = Matrix::identity(d);
            p.prior = 1.0 / static_cast<double>(n);
            rescued = true;
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double w = responsibilities(i, j);
            for (std::size_t col = 0; col < d; ++col) p.mean[col] += w * features(i, col);
        }
        for (std::size_t col = 0; col < d; ++col) p.mean[col] /= mass[j];

        if (config.covariance_update == CovarianceUpdate::fixed_identity) {
            p.covariance = Matrix::identity(d);
        } else {
            Matrix scatter(d, d, 0.0);
            std::vector<double> diff(d);
            for (std::size_t i = 0; i < n; ++i) {
                const double w = responsibilities(i, j);
                for (std::size_t col = 0; col < d; ++col) diff[col] = features(i, col) - p.mean[col];
                for (std::size_t r = 0; r < d; ++r)
                    for (std::size_t c = 0; c <= r; ++c) scatter(r, c) += w * diff[r] * diff[c];
            }
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c <= r; ++c) {
                    scatter(r, c) /= mass[j];
                    scatter(c, r) = scatter(r, c);
                }
            p.covariance = add_scaled_identity(scatter, config.ridge);
        }
        p.prior = mass[j] / static_cast<double>(n);
    }
    if (rescued) {
        double total = 0.0;
        for (const ClassParams& p : params) total += p.prior;
        for (ClassParams& p : params) p.prior /= total;
    }
    return params;
}

double lower_bound(const FeatureMatrix& features, const Matrix& responsibilities,
                   const std::vector<ClassParams>& params, DensityMode mode, double ridge) {
    check_features(features, params);
    const std::size_t k = params.size();
    if (responsibilities.rows() != features.rows() || responsibilities.cols() != k)
        throw std::invalid_argument("lower_bound: responsibility shape mismatch");
    for (std::size_t i = 0; i < responsibilities.rows(); ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) row_sum += responsibilities(i, j);
        if (std::abs(row_sum - 1.0) > 1e-9)
            throw std::invalid_argument("lower_bound: responsibilities are not row-normalized");
    }

    const auto evaluators = make_evaluators(params, mode, ridge);
    double total = 0.0;
    for (std::size_t i = 0; i < features.rows(); ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double q = responsibilities(i, j);
            if (q <= 0.0) continue; // lim q->0 of q log(. / q) is 0
            total += q * (std::log(params[j].prior) + evaluators[j].log_density(features.row(i)) -
                          std::log(q));
        }
    }
    return total;
}

SegmentationResult run(const FeatureMatrix& features, const AdjacencyGraph& graph,
                       const RunConfig& config) {
    if (features.rows() != graph.site_count)
        throw std::invalid_argument("run: feature rows do not match graph sites");
    if (config.max_iterations < 1)
        throw std::invalid_argument("run: max_iterations must be at least 1");
    if (!(config.tolerance > 0.0)) throw std::invalid_argument("run: tolerance must be positive");
    if (!(config.beta >= 0.0)) throw std::invalid_argument("run: beta must be nonnegative");

    const DensityMode mode = config.model.density_mode;
    const double ridge = config.model.ridge;
    const bool coupled = config.beta > 0.0;

    InitResult init = init_params(features, config.model, config.seed);
    EmState state;
    state.params = std::move(init.params);
    state.responsibilities = std::move(init.responsibilities);
    state.labels.n_classes = config.model.n_classes;
    state.labels.labels.resize(features.rows(), 0);
    for (std::size_t i = 0; i < features.rows(); ++i)
        state.labels.labels[i] = argmax_row(state.responsibilities.row(i));

    bool converged = false;
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        state.iteration = iter;
        if (coupled) {
            const Matrix unaries = emission_costs(features, state.params, mode, ridge);
            state.labels = map_labels(state.labels, graph, unaries, config.beta,
                                      config.icm_sweeps_per_iteration);
        }
        state.responsibilities =
            e_step(features, state.params, state.labels, graph, config.beta, mode, ridge);
        state.params = m_step(features, state.responsibilities, config.model);
        const double bound = lower_bound(features, state.responsibilities, state.params, mode, ridge);
        if (!std::isfinite(bound))
            throw NumericError("lower bound became non-finite at iteration " +
                               std::to_string(iter));
        state.bound_trace.push_back(bound);
        if (iter >= 2 && std::abs(bound - previous) / (1.0 + std::abs(bound)) < config.tolerance) {
            converged = true;
            break;
        }
        previous = bound;
    }

    SegmentationResult result;
    result.params = state.params;
    result.bound_trace = state.bound_trace;
    result.converged = converged;
    result.iterations = state.iteration;
    result.labels.n_classes = config.model.n_classes;
    if (coupled) {
        result.labels.labels = state.labels.labels;
    } else {
        result.labels.labels.resize(features.rows());
        for (std::size_t i = 0; i < features.rows(); ++i)
            result.labels.labels[i] = argmax_row(state.responsibilities.row(i));
    }
    result.argmax_prior_class = 0;
    for (std::size_t j = 1; j < result.params.size(); ++j)
        if (result.params[j].prior > result.params[static_cast<std::size_t>(result.argmax_prior_class)].prior)
            result.argmax_prior_class = static_cast<int>(j);
    result.argmax_prior_value =
        result.params[static_cast<std::size_t>(result.argmax_prior_class)].prior;
    return result;
}

} // namespace meshseg
