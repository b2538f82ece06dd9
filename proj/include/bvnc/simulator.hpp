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
#include <string>

#include "bvnc/circuit.hpp"
#include "bvnc/errors.hpp"
#include "bvnc/matrix.hpp"

namespace bvnc {

// Dense simulation is quadratic in 2^n; past this width it is not worth
// attempting.
inline constexpr std::size_t kMaxSimQubits = 14;

namespace detail {

inline void apply_leaf(DenseMatrix& u, const Gate& g) {
  const std::size_t dim = u.rows();
  std::size_t mask = 0, want = 0;
  for (const ControlTerm& c : g.controls()) {
    mask |= std::size_t{1} << c.q;
    if (c.pol == Polarity::Pos) want |= std::size_t{1} << c.q;
  }
  const std::size_t t_bit = std::size_t{1} << *g.target();

  if (g.is_mcx()) {
    for (std::size_t k = 0; k < dim; ++k) {
      if ((k & mask) != want || (k & t_bit)) continue;
      std::swap_ranges(u.row_data(k), u.row_data(k) + dim,
                       u.row_data(k | t_bit));
    }
    return;
  }

  const double half = g.ry().angle / 2.0;
  const double cs = std::cos(half);
  const double sn = std::sin(half);
  for (std::size_t k = 0; k < dim; ++k) {
    if ((k & mask) != want || (k & t_bit)) continue;
    double* r0 = u.row_data(k);
    double* r1 = u.row_data(k | t_bit);
    for (std::size_t j = 0; j < dim; ++j) {
      const double a = r0[j];
      const double b = r1[j];
      r0[j] = cs * a - sn * b;
      r1[j] = sn * a + cs * b;
    }
  }
}

}  // namespace detail

// Full 2^n x 2^n matrix of the circuit. Gates act in list order, so the
// product is gates.back() * ... * gates.front(). All gate types here are
// real, so a real matrix is exact.
inline DenseMatrix unitary_of(const Circuit& c) {
  const std::vector<std::string> diags = validate(c);
  if (!diags.empty()) throw StructureError("unitary_of: " + diags.front());
  if (c.n_qubits > kMaxSimQubits)
    throw ResourceError("unitary_of: " + std::to_string(c.n_qubits) +
                        " qubits exceeds the simulation cap of " +
                        std::to_string(kMaxSimQubits));

  const std::size_t dim = std::size_t{1} << c.n_qubits;
  DenseMatrix u = DenseMatrix::identity(dim);
  const Circuit flat = flatten(c);
  for (const Gate& g : flat.gates) detail::apply_leaf(u, g);
  return u;
}

// Top-left block of u addressed by the ancillas (the highest n_ancilla
// qubits) being |0>.
inline DenseMatrix encoded_block(const DenseMatrix& u, std::size_t n_ancilla) {
  if (u.rows() != u.cols())
    throw DimensionError("encoded_block: matrix must be square");
  const std::size_t shrink = std::size_t{1} << n_ancilla;
  if (u.rows() % shrink != 0)
    throw DimensionError("encoded_block: too many ancillas for matrix size");
  const std::size_t bdim = u.rows() / shrink;
  DenseMatrix out(bdim, bdim);
  for (std::size_t r = 0; r < bdim; ++r)
    for (std::size_t c = 0; c < bdim; ++c) out(r, c) = u(r, c);
  return out;
}

struct VerificationReport {
  bool ok = false;
  double max_abs_error = 0.0;
  // Departure of the simulated full matrix from orthogonality; should sit
  // at rounding level for any well-formed circuit.
  double unitarity_defect = 0.0;
  std::size_t n_qubits = 0;
  std::size_t n_ancilla = 0;
};

// Simulates the circuit, extracts the ancilla-|0> block and compares it
// entrywise against `expected` at tolerance `tol`.
inline VerificationReport verify_block_encoding(const Circuit& c,
                                                std::size_t n_ancilla,
                                                const DenseMatrix& expected,
                                                double tol) {
  if (tol <= 0.0) throw DomainError("verify_block_encoding: tol must be > 0");
  const DenseMatrix u = unitary_of(c);
  const DenseMatrix block = encoded_block(u, n_ancilla);
  if (block.rows() != expected.rows() || block.cols() != expected.cols())
    throw DimensionError(
        "verify_block_encoding: expected matrix is " +
        std::to_string(expected.rows()) + "x" + std::to_string(expected.cols()) +
        " but the encoded block is " + std::to_string(block.rows()) + "x" +
        std::to_string(block.cols()));

  VerificationReport rep;
  rep.n_qubits = c.n_qubits;
  rep.n_ancilla = n_ancilla;
  rep.max_abs_error = block.max_abs_diff(expected);
  rep.unitarity_defect = orthogonality_defect(u);
  rep.ok = rep.max_abs_error <= tol;
  return rep;
}

}  // namespace bvnc
