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

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "bvnc/errors.hpp"
#include "bvnc/matrix.hpp"

namespace bvnc {

inline constexpr double kDefaultScalingTol = 1e-10;
inline constexpr std::size_t kDefaultScalingMaxIters = 10000;

// Multiplicative slack between the sweep-convergence tolerance and the
// doubly-stochastic certificate the scaled output is guaranteed to pass.
inline constexpr double kSinkhornCertTolFactor = 2.0;

// S = diag(d_left) . A . diag(d_right), doubly stochastic up to
// final_deviation (max |row or column sum - 1| after the last sweep).
struct ScalingResult {
  std::vector<double> d_left;
  std::vector<double> d_right;
  DenseMatrix scaled;
  std::size_t iterations = 0;
  double final_deviation = 0.0;
};

namespace detail {

inline double stochastic_deviation(const DenseMatrix& m) {
  double dev = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    dev = std::max(dev, std::abs(m.row_sum(i) - 1.0));
    dev = std::max(dev, std::abs(m.col_sum(i) - 1.0));
  }
  return dev;
}

inline DenseMatrix apply_diagonals(const DenseMatrix& a,
                                   const std::vector<double>& d_left,
                                   const std::vector<double>& d_right) {
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      out(r, c) = d_left[r] * a(r, c) * d_right[c];
  return out;
}

}  // namespace detail

// Alternating row/column normalization (rows first, then columns per full
// sweep) until the max row/column-sum deviation drops to `tol`. Requires
// strictly positive entries, the hypothesis under which convergence to
// diag(d_left) . A . diag(d_right) doubly stochastic is guaranteed. An input
// that is already doubly stochastic (which may contain zeros) is returned
// unchanged as the fixed point.
inline ScalingResult sinkhorn_scale(const DenseMatrix& a,
                                    double tol = kDefaultScalingTol,
                                    std::size_t max_iters =
                                        kDefaultScalingMaxIters) {
  if (!a.is_square()) throw DimensionError("sinkhorn_scale: matrix not square");
  if (tol <= 0.0) throw DomainError("sinkhorn_scale: tolerance must be > 0");
  const std::size_t n = a.rows();
  if (n == 0) throw DimensionError("sinkhorn_scale: empty matrix");

  ScalingResult result;
  result.d_left.assign(n, 1.0);
  result.d_right.assign(n, 1.0);

  if (is_doubly_stochastic(a, tol)) {
    result.scaled = a;
    result.iterations = 0;
    result.final_deviation = detail::stochastic_deviation(a);
    return result;
  }

  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (a(r, c) <= 0.0)
        throw DomainError("sinkhorn_scale: entries must be strictly positive");

  DenseMatrix s = a;
  for (std::size_t iter = 1; iter <= max_iters; ++iter) {
    for (std::size_t r = 0; r < n; ++r) {
      const double sum = s.row_sum(r);
      const double f = 1.0 / sum;
      result.d_left[r] *= f;
      for (std::size_t c = 0; c < n; ++c) s(r, c) *= f;
    }
    for (std::size_t c = 0; c < n; ++c) {
      const double sum = s.col_sum(c);
      const double f = 1.0 / sum;
      result.d_right[c] *= f;
      for (std::size_t r = 0; r < n; ++r) s(r, c) *= f;
    }
    const double dev = detail::stochastic_deviation(s);
    if (dev <= tol) {
      result.scaled = std::move(s);
      result.iterations = iter;
      result.final_deviation = dev;
      return result;
    }
  }
  throw ConvergenceError("sinkhorn_scale: tolerance not reached within "
                         "iteration limit",
                         detail::stochastic_deviation(s));
}

inline bool is_row_stochastic(const DenseMatrix& t, double tol = 1e-12) {
  if (!t.is_square()) return false;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c)
      if (t(r, c) < 0.0) return false;
    if (std::abs(t.row_sum(r) - 1.0) > tol) return false;
  }
  return true;
}

// Embeds a row-stochastic T into the doubly stochastic 2N x 2N matrix
//
//   [ T/alpha        (1 - 1/alpha) I ]
//   [ diag(s)        T^T/alpha       ]
//
// with alpha the maximum COLUMN sum of T and s_j = 1 - colsum_j(T)/alpha.
// Note: the construction is sometimes quoted with alpha as the maximum row
// sum; for row-stochastic T that value is identically 1 and the complement
// s turns negative whenever a column sum exceeds 1. The maximum column sum
// (the maximum row sum of T^T) is the choice under which all four blocks
// are nonnegative and every row and column sums to 1.
inline DenseMatrix embed_row_stochastic(const DenseMatrix& t) {
  if (!t.is_square())
    throw DimensionError("embed_row_stochastic: matrix not square");
  const std::size_t n = t.rows();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (t(r, c) < 0.0)
        throw DomainError("embed_row_stochastic: negative entry");
  if (!is_row_stochastic(t))
    throw DomainError("embed_row_stochastic: rows must sum to 1");

  double alpha = 0.0;
  std::vector<double> col_sums(n);
  for (std::size_t c = 0; c < n; ++c) {
    col_sums[c] = t.col_sum(c);
    alpha = std::max(alpha, col_sums[c]);
  }

  DenseMatrix s(2 * n, 2 * n);
  const double id_coeff = 1.0 - 1.0 / alpha;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      s(r, c) = t(r, c) / alpha;            // T/alpha
      s(n + r, n + c) = t(c, r) / alpha;    // T^T/alpha
    }
    s(r, n + r) = id_coeff;                 // (1 - 1/alpha) I
    s(n + r, r) = 1.0 - col_sums[r] / alpha;  // diag(s)
  }
  return s;
}

inline bool is_circulant(const DenseMatrix& c, double tol = 1e-12) {
  if (!c.is_square() || c.rows() == 0) return false;
  const std::size_t n = c.rows();
  for (std::size_t r = 1; r < n; ++r)
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(c(r, j) - c(0, (j + n - r) % n)) > tol) return false;
  return true;
}

// Divides a nonnegative circulant matrix by its common row sum c; the
// result is doubly stochastic and c is the block-encoding scale factor.
inline std::pair<DenseMatrix, double> circulant_scale(const DenseMatrix& c) {
  if (!c.is_square())
    throw DimensionError("circulant_scale: matrix not square");
  if (!is_circulant(c))
    throw StructureError("circulant_scale: matrix is not circulant");
  const std::size_t n = c.rows();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (c(0, j) < 0.0) throw DomainError("circulant_scale: negative entry");
    sum += c(0, j);
  }
  if (sum <= 0.0) throw DomainError("circulant_scale: zero row sum");
  return {c.scaled(1.0 / sum), sum};
}

}  // namespace bvnc
