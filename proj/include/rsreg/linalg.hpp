#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rsreg {

using Vector = std::vector<double>;

/// Dense row-major matrix. Sized at construction; all entries owned.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t d) {
        Matrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool operator==(const Matrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm2_diff(std::span<const double> a, std::span<const double> b);

/// y = X b  (length rows)
Vector matvec(const Matrix& X, std::span<const double> b);
/// y = X^T r  (length cols)
Vector matvec_t(const Matrix& X, std::span<const double> r);

/// Quadratic form v^T S v for square S.
double quad_form(const Matrix& S, std::span<const double> v);

/// Largest eigenvalue of X^T X (= squared spectral norm of X), by power
/// iteration with a fixed deterministic start. Stops when the eigenvalue
/// estimate changes by less than rel_tol relatively.
double spectral_norm_sq(const Matrix& X, double rel_tol = 1e-8, int max_iters = 20000);

}  // namespace rsreg
