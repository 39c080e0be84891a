#include "meshseg/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "meshseg/errors.hpp"

namespace meshseg {

ojson params_to_json(const std::vector<ClassParams>& params) {
    ojson means = ojson::array();
    ojson covariances = ojson::array();
    ojson priors = ojson::array();
    for (const ClassParams& p : params) {
        means.push_back(p.mean);
        ojson cov = ojson::array();
        for (std::size_t r = 0; r < p.covariance.rows(); ++r) {
            ojson row = ojson::array();
            for (std::size_t c = 0; c < p.covariance.cols(); ++c) row.push_back(p.covariance(r, c));
            cov.push_back(std::move(row));
        }
        covariances.push_back(std::move(cov));
        priors.push_back(p.prior);
    }
    return ojson{{"means", std::move(means)},
                 {"covariances", std::move(covariances)},
                 {"priors", std::move(priors)}};
}

std::vector<ClassParams> params_from_json(const ojson& j) {
    const auto& means = j.at("means");
    const auto& covariances = j.at("covariances");
    const auto& priors = j.at("priors");
    if (means.size() != covariances.size() || means.size() != priors.size())
        throw std::invalid_argument("params_from_json: means/covariances/priors lengths differ");
    std::vector<ClassParams> params(means.size());
    for (std::size_t k = 0; k < params.size(); ++k) {
        ClassParams& p = params[k];
        p.mean = means[k].get<std::vector<double>>();
        const auto& cov = covariances[k];
        const std::size_t d = p.mean.size();
        if (cov.size() != d)
            throw std::invalid_argument("params_from_json: covariance rows do not match mean");
        p.covariance = Matrix(d, d);
        for (std::size_t r = 0; r < d; ++r) {
            if (cov[r].size() != d)
                throw std::invalid_argument("params_from_json: covariance is not square");
            for (std::size_t c = 0; c < d; ++c) p.covariance(r, c) = cov[r][c].get<double>();
        }
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < r; ++c) {
                const double gap = std::abs(p.covariance(r, c) - p.covariance(c, r));
                const double mag =
                    std::max(std::abs(p.covariance(r, c)), std::abs(p.covariance(c, r)));
                if (gap > 1e-9 * std::max(1.0, mag))
                    throw std::invalid_argument("params_from_json: covariance not symmetric");
            }
        p.prior = priors[k].get<double>();
        if (p.prior < 0.0 || p.prior > 1.0)
            throw std::invalid_argument("params_from_json: prior outside [0, 1]");
    }
    return params;
}

ojson result_to_json(const SegmentationResult& result) {
    return ojson{{"labels", result.labels.labels},
                 {"params", params_to_json(result.params)},
                 {"bound_trace", result.bound_trace},
                 {"converged", result.converged},
                 {"iterations", result.iterations},
                 {"argmax_prior_class",
                  ojson{{"label", result.argmax_prior_class}, {"prior", result.argmax_prior_value}}}};
}

SegmentationResult result_from_json(const ojson& j) {
    SegmentationResult result;
    result.labels.labels = j.at("labels").get<std::vector<int>>();
    result.params = params_from_json(j.at("params"));
    result.labels.n_classes = static_cast<int>(result.params.size());
    result.bound_trace = j.at("bound_trace").get<std::vector<double>>();
    result.converged = j.at("converged").get<bool>();
    result.iterations = j.at("iterations").get<int>();
    result.argmax_prior_class = j.at("argmax_prior_class").at("label").get<int>();
    result.argmax_prior_value = j.at("argmax_prior_class").at("prior").get<double>();
    return result;
}

ojson metrics_to_json(const MetricsReport& report) {
    ojson j;
    j["accuracy"] = report.accuracy;
    if (report.boundary_smoothness)
        j["boundary_smoothness"] = *report.boundary_smoothness;
    else
        j["boundary_smoothness"] = nullptr;
    j["confusion"] = report.confusion;
    return j;
}

std::string labels_to_csv(const std::vector<int>& labels) {
    std::string out;
    for (int l : labels) {
        out += std::to_string(l);
        out += '\n';
    }
    return out;
}

std::vector<int> labels_from_csv(std::string_view text) {
    std::vector<int> labels;
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        pos = end + 1;
        // trim
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
            line.remove_prefix(1);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
        if (line.empty()) continue;
        int value = 0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
        if (ec != std::errc{} || ptr != line.data() + line.size())
            throw ParseError("malformed label '" + std::string(line) + "'", line_no);
        labels.push_back(value);
    }
    return labels;
}

std::string features_to_csv(const Matrix& features) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < features.rows(); ++i) {
        for (std::size_t j = 0; j < features.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", features(i, j));
            if (j) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

Matrix features_from_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        pos = end + 1;
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t cell_start = 0;
        while (cell_start <= line.size()) {
            std::size_t cell_end = line.find(',', cell_start);
            if (cell_end == std::string_view::npos) cell_end = line.size();
            std::string_view cell = line.substr(cell_start, cell_end - cell_start);
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (ec != std::errc{} || ptr != cell.data() + cell.size())
                throw ParseError("malformed feature value '" + std::string(cell) + "'", line_no);
            row.push_back(value);
            if (cell_end == line.size()) break;
            cell_start = cell_end + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("ragged feature row", line_no);
        rows.push_back(std::move(row));
    }
    return Matrix::from_rows(rows);
}

} // namespace meshseg
