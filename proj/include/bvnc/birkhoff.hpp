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
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "bvnc/errors.hpp"
#include "bvnc/matrix.hpp"
#include "bvnc/permutation.hpp"

namespace bvnc {

inline constexpr double kDefaultDecompositionTol = 1e-12;

// Smallest k guaranteed to suffice for some decomposition of an N x N
// doubly stochastic matrix into permutations: (N-1)^2 + 1.
inline std::size_t marcus_ree_bound(std::size_t n) {
  return n < 2 ? 1 : (n - 1) * (n - 1) + 1;
}

// Weighted sum of permutations approximating a doubly stochastic matrix:
// S ~ sum_i weight_i * matrix_of(perm_i), with residual_norm the Frobenius
// norm of what remains unexplained.
struct BirkhoffDecomposition {
  struct Term {
    double weight;
    Permutation perm;
  };

  std::size_t n = 0;
  std::vector<Term> terms;
  double residual_norm = 0.0;

  double weight_sum() const {
    double s = 0.0;
    for (const Term& t : terms) s += t.weight;
    return s;
  }
};

// The support of the matrix admits no column-to-row bijection.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Decomposition could not finish: the matching became infeasible mid-run or
// the term limit was hit with residual mass left. Carries what was found.
class DecompositionError : public Error {
 public:
  DecompositionError(const std::string& what, BirkhoffDecomposition partial)
      : Error(what), partial_(std::move(partial)) {}
  const BirkhoffDecomposition& partial() const { return partial_; }

 private:
  BirkhoffDecomposition partial_;
};

// Deterministic perfect matching on a boolean support matrix, returned as a
// permutation p with support[p(j)][j] true for every column j. When
// forced_edge = (r, c) is given, p(c) = r is fixed before the remaining
// rows are matched by augmenting paths (rows scanned in increasing index,
// candidate columns in increasing index).
inline Permutation perfect_matching(
    const std::vector<std::vector<bool>>& support,
    std::optional<std::pair<std::size_t, std::size_t>> forced_edge =
        std::nullopt) {
  const std::size_t n = support.size();
  if (n == 0) throw DimensionError("perfect_matching: empty support");
  for (const auto& row : support)
    if (row.size() != n)
      throw DimensionError("perfect_matching: support must be square");

  constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> owner(n, kUnmatched);  // column -> row
  std::vector<bool> row_done(n, false);

  std::size_t forced_col = kUnmatched;
  if (forced_edge) {
    const auto [r, c] = *forced_edge;
    if (r >= n || c >= n)
      throw RangeError("perfect_matching: forced edge out of range");
    if (!support[r][c])
      throw DomainError("perfect_matching: forced edge not in support");
    owner[c] = r;
    row_done[r] = true;
    forced_col = c;
  }

  std::vector<bool> visited(n, false);
  // Kuhn augmentation; the forced column is never revisited, so the forced
  // row can never be displaced.
  auto augment = [&](auto&& self, std::size_t row) -> bool {
    for (std::size_t c = 0; c < n; ++c) {
      if (!support[row][c] || visited[c] || c == forced_col) continue;
      visited[c] = true;
      if (owner[c] == kUnmatched || self(self, owner[c])) {
        owner[c] = row;
        return true;
      }
    }
    return false;
  };

  for (std::size_t r = 0; r < n; ++r) {
    if (row_done[r]) continue;
    std::fill(visited.begin(), visited.end(), false);
    if (!augment(augment, r))
      throw InfeasibleError("perfect_matching: no perfect matching exists");
  }

  std::vector<std::size_t> map(n);
  for (std::size_t c = 0; c < n; ++c) map[c] = owner[c];
  return Permutation(std::move(map));
}

// Greedy Birkhoff-von Neumann decomposition. Each step thresholds entries
// below `tol` out of the support, forces the cell of the minimum surviving
// entry into a perfect matching, subtracts the matching scaled by the
// minimum matched value, and repeats until the residual Frobenius norm
// drops to `tol` or `k_max` terms have been produced. k_max = 0 selects the
// Marcus-Ree bound (N-1)^2 + 1.
inline BirkhoffDecomposition birkhoff_decompose(
    const DenseMatrix& s, std::size_t k_max = 0,
    double tol = kDefaultDecompositionTol) {
  if (!is_doubly_stochastic(s, 1e-8))
    throw DomainError("birkhoff_decompose: input is not doubly stochastic");
  if (tol <= 0.0) throw DomainError("birkhoff_decompose: tol must be > 0");
  const std::size_t n = s.rows();
  if (k_max == 0) k_max = marcus_ree_bound(n);

  BirkhoffDecomposition d;
  d.n = n;

  DenseMatrix rest = s;
  while (true) {
    d.residual_norm = rest.frobenius_norm();
    if (d.residual_norm <= tol) return d;
    if (d.terms.size() >= k_max)
      throw DecompositionError(
          "birkhoff_decompose: term limit reached with residual mass left",
          std::move(d));

    std::vector<std::vector<bool>> support(n, std::vector<bool>(n, false));
    double min_val = std::numeric_limits<double>::infinity();
    std::size_t min_r = 0, min_c = 0;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (rest(r, c) >= tol) {
          support[r][c] = true;
          if (rest(r, c) < min_val) {
            min_val = rest(r, c);
            min_r = r;
            min_c = c;
          }
        }
      }
    }
    if (!std::isfinite(min_val))
      throw DecompositionError(
          "birkhoff_decompose: residual above tol but no entry survives "
          "thresholding",
          std::move(d));

    Permutation p = Permutation::identity(n);
    try {
      p = perfect_matching(support, std::make_pair(min_r, min_c));
    } catch (const InfeasibleError&) {
      throw DecompositionError(
          "birkhoff_decompose: support lost its perfect matching "
          "(numerically degraded input)",
          std::move(d));
    }

    // Weight from true values over the matched cells, not the thresholded
    // support, so reconstruction stays exact.
    double w = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n; ++c) w = std::min(w, rest(p(c), c));
    for (std::size_t c = 0; c < n; ++c) rest(p(c), c) -= w;

    // Min-element rule keeps the residual entrywise nonnegative; a
    // violation means the input was degraded beyond repair.
    if (rest.min_entry() < -1e-12)
      throw DecompositionError(
          "birkhoff_decompose: residual went negative", std::move(d));

    d.terms.push_back({w, std::move(p)});
  }
}

// sum_i w_i * matrix_of(P_i).
inline DenseMatrix reconstruct(const BirkhoffDecomposition& d) {
  DenseMatrix out(d.n, d.n);
  for (const auto& term : d.terms)
    for (std::size_t c = 0; c < d.n; ++c)
      out(term.perm(c), c) += term.weight;
  return out;
}

struct TruncationResult {
  BirkhoffDecomposition decomposition;
  // Sum of dropped weights; bounds the entrywise deviation between the
  // full and truncated reconstructions.
  double error_bound;
};

namespace detail {

inline TruncationResult keep_indices(const BirkhoffDecomposition& d,
                                     const std::vector<std::size_t>& kept) {
  BirkhoffDecomposition out;
  out.n = d.n;
  double kept_mass = 0.0;
  for (std::size_t i : kept) {
    out.terms.push_back(d.terms[i]);
    kept_mass += d.terms[i].weight;
  }
  const double dropped = d.weight_sum() - kept_mass;

  // Residual relative to the original matrix, bounded by triangle
  // inequality: whatever the full decomposition missed plus the Frobenius
  // norm of the dropped terms.
  DenseMatrix dropped_sum(d.n, d.n);
  std::vector<bool> is_kept(d.terms.size(), false);
  for (std::size_t i : kept) is_kept[i] = true;
  for (std::size_t i = 0; i < d.terms.size(); ++i) {
    if (is_kept[i]) continue;
    for (std::size_t c = 0; c < d.n; ++c)
      dropped_sum(d.terms[i].perm(c), c) += d.terms[i].weight;
  }
  out.residual_norm = d.residual_norm + dropped_sum.frobenius_norm();
  return {std::move(out), dropped};
}

// Term indices ordered by weight descending, stable in the original order.
inline std::vector<std::size_t> by_weight_desc(
    const BirkhoffDecomposition& d) {
  std::vector<std::size_t> idx(d.terms.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return d.terms[a].weight > d.terms[b].weight;
  });
  return idx;
}

}  // namespace detail

// Keeps the `keep` largest-weight terms (original term order preserved).
inline TruncationResult truncate_keep(const BirkhoffDecomposition& d,
                                      std::size_t keep) {
  if (keep == 0) throw DomainError("truncate_keep: keep must be >= 1");
  std::vector<std::size_t> idx = detail::by_weight_desc(d);
  if (keep < idx.size()) idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  return detail::keep_indices(d, idx);
}

// Keeps the terms with weight >= min_weight. If the threshold is above
// every weight, the maximum-weight term(s) are kept so the result is never
// empty.
inline TruncationResult truncate_min_weight(const BirkhoffDecomposition& d,
                                            double min_weight) {
  if (d.terms.empty()) return detail::keep_indices(d, {});
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < d.terms.size(); ++i)
    if (d.terms[i].weight >= min_weight) kept.push_back(i);
  if (kept.empty()) {
    double max_w = 0.0;
    for (const auto& t : d.terms) max_w = std::max(max_w, t.weight);
    for (std::size_t i = 0; i < d.terms.size(); ++i)
      if (d.terms[i].weight == max_w) kept.push_back(i);
  }
  return detail::keep_indices(d, kept);
}

}  // namespace bvnc
