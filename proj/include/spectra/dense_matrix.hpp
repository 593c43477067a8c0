#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "spectra/error.hpp"

namespace spectra {

/// Row-major dense real matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const noexcept { return data_; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<double> multiply(std::span<const double> x) const {
    if (x.size() != cols_) throw dimension_error("DenseMatrix::multiply: size mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      const double* r = data_.data() + i * cols_;
      for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
      y[i] = s;
    }
    return y;
  }

  /// Upper-left k x k block.
  DenseMatrix top_left(std::size_t k) const {
    if (k > rows_ || k > cols_) throw dimension_error("DenseMatrix::top_left: block larger than matrix");
    DenseMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_squared() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return s;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double asymmetry() const {
    if (!square()) throw dimension_error("DenseMatrix::asymmetry: matrix not square");
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
    return m;
  }

  /// Largest absolute row sum; bounds the spectral radius of symmetric matrices.
  double gershgorin_bound() const {
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
      m = std::max(m, s);
    }
    return m;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

}  // namespace spectra
