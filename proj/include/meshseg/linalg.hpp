#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace meshseg {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(const Vec3& v);

/// Dense row-major matrix of doubles. One type serves feature rows,
/// responsibilities, unary costs and covariances.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool all_finite() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// A feature matrix has one row per site; cols() is the feature dimension.
using FeatureMatrix = Matrix;

/// Lower-triangular Cholesky factor of a symmetric matrix (reads the lower
/// triangle only), or nullopt if the matrix is not positive definite.
std::optional<Matrix> cholesky(const Matrix& a);

/// ||L^{-1} v||^2 by forward substitution against the Cholesky factor L.
double cholesky_quadratic(const Matrix& chol, std::span<const double> v);

/// log det(A) = 2 sum log L_ii.
double cholesky_log_det(const Matrix& chol);

/// a + scale * I.
Matrix add_scaled_identity(const Matrix& a, double scale);

double trace(const Matrix& a);

/// max + log sum exp(v - max); -inf for an all -inf input.
double log_sum_exp(std::span<const double> values);

} // namespace meshseg
