#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "meshseg/em.hpp"
#include "meshseg/metrics.hpp"
#include "meshseg/model.hpp"

namespace meshseg {

// Field order in emitted documents is fixed, hence ordered_json.
using ojson = nlohmann::ordered_json;

/// {"means": [[...]], "covariances": [[[...]]], "priors": [...]}
ojson params_to_json(const std::vector<ClassParams>& params);
std::vector<ClassParams> params_from_json(const ojson& j);

/// {"labels", "params", "bound_trace", "converged", "iterations",
///  "argmax_prior_class": {"label", "prior"}}
ojson result_to_json(const SegmentationResult& result);
SegmentationResult result_from_json(const ojson& j);

/// {"accuracy", "boundary_smoothness" (null if absent), "confusion"}
ojson metrics_to_json(const MetricsReport& report);

/// One integer label per line.
std::string labels_to_csv(const std::vector<int>& labels);
std::vector<int> labels_from_csv(std::string_view text);

/// One comma-separated row per site, full round-trip precision.
std::string features_to_csv(const Matrix& features);
Matrix features_from_csv(std::string_view text);

} // namespace meshseg
