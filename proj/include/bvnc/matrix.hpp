// Copyright 2026 The bvnc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "bvnc/errors.hpp"

namespace bvnc {

// Dense real matrix, row-major. The single numeric carrier of the library:
// inputs, stochastic forms, permutation matrices and simulated unitaries.
class DenseMatrix {
 public:
  DenseMatrix() : rows_(0), cols_(0) {}

  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged initializer rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  double* row_data(std::size_t r) { return data_.data() + r * cols_; }
  const double* row_data(std::size_t r) const {
    return data_.data() + r * cols_;
  }

  const std::vector<double>& data() const { return data_; }

  double row_sum(std::size_t r) const {
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c);
    return s;
  }

  double col_sum(std::size_t c) const {
    double s = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) s += (*this)(r, c);
    return s;
  }

  double min_entry() const {
    double m = data_.empty() ? 0.0 : data_[0];
    for (double v : data_) m = std::min(m, v);
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  DenseMatrix multiply(const DenseMatrix& other) const {
    if (cols_ != other.rows_)
      throw DimensionError("matrix product dimension mismatch");
    DenseMatrix out(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const double v = (*this)(r, k);
        if (v == 0.0) continue;
        for (std::size_t c = 0; c < other.cols_; ++c)
          out(r, c) += v * other(k, c);
      }
    }
    return out;
  }

  DenseMatrix scaled(double factor) const {
    DenseMatrix out = *this;
    for (double& v : out.data_) v *= factor;
    return out;
  }

  // Largest entrywise absolute difference; the metric used by every
  // verification tolerance in the library.
  double max_abs_diff(const DenseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
      throw DimensionError("max_abs_diff dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i)
      m = std::max(m, std::abs(data_[i] - other.data_[i]));
    return m;
  }

  bool operator==(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ &&
           data_ == other.data_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

// True iff every entry >= -tol and every row and column sum lies in
// [1-tol, 1+tol]. Non-square input is a dimension error, not `false`.
inline bool is_doubly_stochastic(const DenseMatrix& m, double tol) {
  if (!m.is_square())
    throw DimensionError("is_doubly_stochastic: matrix must be square");
  const std::size_t n = m.rows();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (m(r, c) < -tol) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(m.row_sum(i) - 1.0) > tol) return false;
    if (std::abs(m.col_sum(i) - 1.0) > tol) return false;
  }
  return true;
}

// Orthogonality defect max|M^T M - I|; zero for exact orthogonal matrices.
// The Gram matrix is accumulated into a packed upper triangle from small
// transposed row panels, so the extra footprint is one triangle rather
// than a transpose plus a full product, and the dots stay contiguous.
inline double orthogonality_defect(const DenseMatrix& m) {
  if (!m.is_square())
    throw DimensionError("orthogonality_defect: matrix must be square");
  const std::size_t dim = m.rows();
  std::vector<double> tri(dim * (dim + 1) / 2, 0.0);
  constexpr std::size_t kPanel = 64;
  std::vector<double> panel(kPanel * dim);
  for (std::size_t k0 = 0; k0 < dim; k0 += kPanel) {
    const std::size_t depth = std::min(kPanel, dim - k0);
    for (std::size_t k = 0; k < depth; ++k)
      for (std::size_t j = 0; j < dim; ++j)
        panel[j * kPanel + k] = m(k0 + k, j);
    double* t = tri.data();
    for (std::size_t i = 0; i < dim; ++i) {
      const double* pi = &panel[i * kPanel];
      for (std::size_t j = i; j < dim; ++j, ++t) {
        const double* pj = &panel[j * kPanel];
        double sum = 0.0;
        for (std::size_t k = 0; k < depth; ++k) sum += pi[k] * pj[k];
        *t += sum;
      }
    }
  }
  double defect = 0.0;
  const double* t = tri.data();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j, ++t)
      defect = std::max(defect, std::abs(*t - (i == j ? 1.0 : 0.0)));
  return defect;
}

}  // namespace bvnc
