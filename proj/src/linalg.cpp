#include "meshseg/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace meshseg {

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw std::invalid_argument("ragged rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

std::optional<Matrix> cholesky(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
    const std::size_t n = a.rows();
    Matrix l(n, n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = j; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (!(s > 0.0)) return std::nullopt;
                l(j, j) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

double cholesky_quadratic(const Matrix& chol, std::span<const double> v) {
    const std::size_t n = chol.rows();
    if (v.size() != n) throw std::invalid_argument("cholesky_quadratic: size mismatch");
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = v[i];
        for (std::size_t k = 0; k < i; ++k) s -= chol(i, k) * z[k];
        z[i] = s / chol(i, i);
    }
    double q = 0.0;
    for (double zi : z) q += zi * zi;
    return q;
}

double cholesky_log_det(const Matrix& chol) {
    double s = 0.0;
    for (std::size_t i = 0; i < chol.rows(); ++i) s += std::log(chol(i, i));
    return 2.0 * s;
}

Matrix add_scaled_identity(const Matrix& a, double scale) {
    Matrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, i) += scale;
    return out;
}

double trace(const Matrix& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double log_sum_exp(std::span<const double> values) {
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : values)
        if (v > hi) hi = v;
    if (!std::isfinite(hi)) return hi; // all -inf (or an inf passed through)
    double s = 0.0;
    for (double v : values) s += std::exp(v - hi);
    return hi + std::log(s);
}

} // namespace meshseg
