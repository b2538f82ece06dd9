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

#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include "bvnc/bvnc.hpp"

namespace testutil {

inline bvnc::Permutation random_permutation(std::size_t n,
                                            std::mt19937_64& rng) {
  std::vector<std::size_t> map(n);
  std::iota(map.begin(), map.end(), 0);
  std::shuffle(map.begin(), map.end(), rng);
  return bvnc::Permutation(std::move(map));
}

// Convex combination of random permutation matrices: doubly stochastic by
// construction up to rounding.
inline bvnc::DenseMatrix random_doubly_stochastic(std::size_t n,
                                                  std::size_t max_terms,
                                                  std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> kd(1, max_terms);
  std::uniform_real_distribution<double> wd(0.1, 1.0);
  const std::size_t k = kd(rng);
  std::vector<double> w(k);
  double total = 0.0;
  for (double& v : w) total += v = wd(rng);
  bvnc::DenseMatrix s(n, n);
  for (std::size_t i = 0; i < k; ++i) {
    const bvnc::Permutation p = random_permutation(n, rng);
    for (std::size_t c = 0; c < n; ++c) s(p(c), c) += w[i] / total;
  }
  return s;
}

// Explicit full matrix of a single leaf gate, built column by column from
// the gate's definition. Independent of the simulator's row updates.
inline bvnc::DenseMatrix gate_matrix_oracle(const bvnc::Gate& g,
                                            std::size_t n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  std::size_t mask = 0, want = 0;
  for (const bvnc::ControlTerm& c : g.controls()) {
    mask |= std::size_t{1} << c.q;
    if (c.pol == bvnc::Polarity::Pos) want |= std::size_t{1} << c.q;
  }
  const std::size_t bit = std::size_t{1} << *g.target();

  bvnc::DenseMatrix m(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    if ((k & mask) != want) {
      m(k, k) = 1.0;
      continue;
    }
    if (g.is_mcx()) {
      m(k ^ bit, k) = 1.0;
      continue;
    }
    const double half = g.ry().angle / 2.0;
    if (k & bit) {
      m(k, k) = std::cos(half);
      m(k ^ bit, k) = -std::sin(half);
    } else {
      m(k, k) = std::cos(half);
      m(k ^ bit, k) = std::sin(half);
    }
  }
  return m;
}

// Composes per-gate oracle matrices with naive matrix products, leftmost
// gate applied first.
inline bvnc::DenseMatrix circuit_matrix_oracle(const bvnc::Circuit& c) {
  const std::size_t dim = std::size_t{1} << c.n_qubits;
  bvnc::DenseMatrix u = bvnc::DenseMatrix::identity(dim);
  for (const bvnc::Gate& g : bvnc::flatten(c).gates)
    u = gate_matrix_oracle(g, c.n_qubits).multiply(u);
  return u;
}

inline bvnc::Gate random_leaf_gate(std::size_t n_qubits, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> qd(0, n_qubits - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_real_distribution<double> ad(-3.0, 3.0);
  const std::size_t target = qd(rng);
  std::vector<bvnc::ControlTerm> controls;
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if (q == target || coin(rng)) continue;
    controls.push_back(
        {q, coin(rng) ? bvnc::Polarity::Pos : bvnc::Polarity::Neg});
  }
  if (coin(rng)) return bvnc::make_mcx(target, std::move(controls));
  return bvnc::make_ry(target, ad(rng), std::move(controls));
}

inline bvnc::Circuit random_circuit(std::size_t n_qubits, std::size_t n_gates,
                                    std::mt19937_64& rng) {
  bvnc::Circuit c;
  c.n_qubits = n_qubits;
  for (std::size_t i = 0; i < n_gates; ++i)
    c.gates.push_back(random_leaf_gate(n_qubits, rng));
  return c;
}

inline const bvnc::DenseMatrix& golden_s() {
  static const bvnc::DenseMatrix s{{1.0 / 6, 4.0 / 6, 0.0, 1.0 / 6},
                                   {2.0 / 6, 1.0 / 6, 3.0 / 6, 0.0},
                                   {2.0 / 6, 1.0 / 6, 1.0 / 6, 2.0 / 6},
                                   {1.0 / 6, 0.0, 2.0 / 6, 3.0 / 6}};
  return s;
}

// The published 4-term split of golden_s(): weights 1/6, 1/6, 1/3, 1/3 on
// the permutations below (one-line, column index -> row index).
inline bvnc::BirkhoffDecomposition golden_decomposition() {
  bvnc::BirkhoffDecomposition d;
  d.n = 4;
  d.terms.push_back({1.0 / 6, bvnc::Permutation({3, 2, 1, 0})});
  d.terms.push_back({1.0 / 6, bvnc::Permutation({0, 1, 2, 3})});
  d.terms.push_back({1.0 / 3, bvnc::Permutation({1, 0, 3, 2})});
  d.terms.push_back({1.0 / 3, bvnc::Permutation({2, 0, 1, 3})});
  d.residual_norm = 0.0;
  return d;
}

}  // namespace testutil
