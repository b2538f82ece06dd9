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

#include <bit>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "bvnc/birkhoff.hpp"
#include "bvnc/circuit.hpp"
#include "bvnc/errors.hpp"
#include "bvnc/permutation.hpp"

namespace bvnc {

// Relocates a gate upward by `offset` qubits.
inline Gate shifted(const Gate& g, std::size_t offset) {
  auto shift_controls = [offset](std::vector<ControlTerm> cs) {
    for (ControlTerm& c : cs) c.q += offset;
    return cs;
  };
  if (g.is_mcx())
    return Gate(MCXGate{g.mcx().target + offset, shift_controls(g.mcx().controls)});
  if (g.is_ry())
    return Gate(RyGate{g.ry().target + offset, g.ry().angle,
                       shift_controls(g.ry().controls)});
  std::vector<Gate> body;
  body.reserve(g.block().body.size());
  for (const Gate& inner : g.block().body) body.push_back(shifted(inner, offset));
  return Gate(ControlledBlock{shift_controls(g.block().controls), std::move(body)});
}

// Reversed order with each Ry angle negated; MCX gates are involutions.
inline std::vector<Gate> inverse_gates(const std::vector<Gate>& gates) {
  std::vector<Gate> out;
  out.reserve(gates.size());
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    if (it->is_ry()) {
      out.push_back(Gate(RyGate{it->ry().target, -it->ry().angle, it->ry().controls}));
    } else if (it->is_block()) {
      out.push_back(Gate(ControlledBlock{it->block().controls,
                                         inverse_gates(it->block().body)}));
    } else {
      out.push_back(*it);
    }
  }
  return out;
}

namespace detail {

// MCX swapping two basis states that differ in exactly one bit: the target
// is the differing bit, every other qubit becomes a control pinned to its
// shared value.
inline Gate adjacent_swap_gate(std::size_t a, std::size_t b,
                               std::size_t n_qubits) {
  const std::size_t diff = a ^ b;
  const std::size_t target = static_cast<std::size_t>(std::countr_zero(diff));
  std::vector<ControlTerm> controls;
  controls.reserve(n_qubits - 1);
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if (q == target) continue;
    controls.push_back(
        {q, (a >> q) & 1u ? Polarity::Pos : Polarity::Neg});
  }
  return Gate(MCXGate{target, std::move(controls)});
}

}  // namespace detail

// Circuit for the basis-state transposition (a b) on n_qubits. States at
// Hamming distance 1 need a single MCX. Otherwise the swap is conjugated
// along a bit-flip path a = v_0, v_1, ..., v_h = b (differing bits flipped
// in increasing index order), giving the palindrome
// (v_0 v_1) ... (v_{h-2} v_{h-1}) (v_{h-1} v_h) (v_{h-2} v_{h-1}) ... (v_0 v_1)
// of 2h-1 gates, each an adjacent swap.
inline std::vector<Gate> transposition_to_gates(const Transposition& t,
                                                std::size_t n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (t.a >= dim || t.b >= dim)
    throw RangeError("transposition_to_gates: state exceeds 2^n_qubits");

  const std::size_t diff = t.a ^ t.b;
  const int h = std::popcount(diff);
  if (h == 1) return {detail::adjacent_swap_gate(t.a, t.b, n_qubits)};

  std::vector<std::size_t> path{t.a};
  std::size_t v = t.a;
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if ((diff >> q) & 1u) {
      v ^= std::size_t{1} << q;
      path.push_back(v);
    }
  }

  std::vector<Gate> gates;
  gates.reserve(2 * static_cast<std::size_t>(h) - 1);
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    gates.push_back(detail::adjacent_swap_gate(path[i], path[i + 1], n_qubits));
  for (std::size_t i = path.size() - 2; i-- > 0;)
    gates.push_back(detail::adjacent_swap_gate(path[i], path[i + 1], n_qubits));
  return gates;
}

// Synthesizes a permutation of basis states as MCX gates: cycle
// decomposition, cycles to transpositions under the chosen scheme, then one
// adjacent-swap palindrome per transposition. The transposition product is
// applied rightmost first, so gates are emitted from the back of the list.
inline Circuit permutation_to_circuit(const Permutation& p,
                                      TranspositionScheme scheme) {
  const std::size_t n = p.size();
  if (n < 2 || !std::has_single_bit(n))
    throw DimensionError(
        "permutation_to_circuit: size must be a power of two >= 2");
  const std::size_t n_qubits = static_cast<std::size_t>(std::countr_zero(n));

  Circuit c;
  c.n_qubits = n_qubits;
  for (const Cycle& cyc : to_cycles(p)) {
    const std::vector<Transposition> prod = cycle_to_transpositions(cyc, scheme);
    for (auto it = prod.rbegin(); it != prod.rend(); ++it) {
      std::vector<Gate> gates = transposition_to_gates(*it, n_qubits);
      c.gates.insert(c.gates.end(), std::make_move_iterator(gates.begin()),
                     std::make_move_iterator(gates.end()));
    }
  }
  return c;
}

// Rotation tree preparing sum_i sqrt(w_i / sum w) |i> from |0...0> on
// n_qubits qubits. Nodes are emitted pre-order; the node at depth d rotates
// qubit n_qubits-1-d under controls pinning the already-fixed higher
// qubits. Zero-mass subtrees and zero rotations produce no gates.
inline std::vector<Gate> state_prep(const std::vector<double>& weights,
                                    std::size_t n_qubits) {
  if (weights.empty()) throw DomainError("state_prep: no weights");
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (weights.size() > dim)
    throw DimensionError("state_prep: more weights than basis states");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("state_prep: weights must be >= 0");
    total += w;
  }
  if (total <= 0.0) throw DomainError("state_prep: weights sum to zero");

  // prefix[i] = sum of weights below index i, over the padded range.
  std::vector<double> prefix(dim + 1, 0.0);
  for (std::size_t i = 0; i < dim; ++i)
    prefix[i + 1] = prefix[i] + (i < weights.size() ? weights[i] : 0.0);
  auto mass = [&prefix](std::size_t lo, std::size_t hi) {
    return prefix[hi] - prefix[lo];
  };

  std::vector<Gate> gates;
  auto emit = [&](auto&& self, std::size_t base, std::size_t width,
                  std::vector<ControlTerm> controls) -> void {
    if (width == 0) return;
    const std::size_t half = std::size_t{1} << (width - 1);
    const double left = mass(base, base + half);
    const double right = mass(base + half, base + 2 * half);
    if (left + right <= 0.0) return;
    const std::size_t q = width - 1;
    const double angle = 2.0 * std::atan2(std::sqrt(right), std::sqrt(left));
    if (angle != 0.0) gates.push_back(make_ry(q, angle, controls));
    if (left > 0.0) {
      std::vector<ControlTerm> next = controls;
      next.push_back({q, Polarity::Neg});
      self(self, base, width - 1, std::move(next));
    }
    if (right > 0.0) {
      std::vector<ControlTerm> next = controls;
      next.push_back({q, Polarity::Pos});
      self(self, base + half, width - 1, std::move(next));
    }
  };
  emit(emit, 0, n_qubits, {});
  return gates;
}

// A circuit whose top-left block, scaled by `scale`, reproduces the matrix
// it was built from. System qubits sit low, ancillas high, so the block is
// addressed by ancilla |0>.
struct BlockEncoding {
  Circuit circuit;
  std::size_t n_system = 0;
  std::size_t n_ancilla = 0;
  double scale = 1.0;
};

// Linear-combination-of-unitaries assembly: weight preparation on the
// ancillas, one ancilla-selected block per permutation term, then the
// inverse preparation. The encoded block equals reconstruct(d) / scale
// with scale = sum of weights.
inline BlockEncoding lcu_block_encoding(const BirkhoffDecomposition& d,
                                        TranspositionScheme scheme) {
  if (d.terms.empty()) throw DomainError("lcu_block_encoding: no terms");
  if (d.n < 2 || !std::has_single_bit(d.n))
    throw DimensionError(
        "lcu_block_encoding: matrix size must be a power of two >= 2");

  const std::size_t n_sys = static_cast<std::size_t>(std::countr_zero(d.n));
  const std::size_t k = d.terms.size();
  const std::size_t m = k == 1 ? 0 : static_cast<std::size_t>(std::bit_width(k - 1));

  BlockEncoding enc;
  enc.n_system = n_sys;
  enc.n_ancilla = m;
  enc.scale = d.weight_sum();
  enc.circuit.n_qubits = n_sys + m;

  std::vector<double> weights;
  weights.reserve(k);
  for (const auto& term : d.terms) weights.push_back(term.weight);

  std::vector<Gate> prep;
  for (const Gate& g : state_prep(weights, m)) prep.push_back(shifted(g, n_sys));

  enc.circuit.gates = prep;
  for (std::size_t i = 0; i < k; ++i) {
    Circuit pc = permutation_to_circuit(d.terms[i].perm, scheme);
    if (pc.gates.empty()) continue;
    std::vector<ControlTerm> sel;
    sel.reserve(m);
    for (std::size_t j = 0; j < m; ++j)
      sel.push_back({n_sys + j, (i >> j) & 1u ? Polarity::Pos : Polarity::Neg});
    enc.circuit.gates.push_back(make_block(std::move(sel), std::move(pc.gates)));
  }
  std::vector<Gate> unprep = inverse_gates(prep);
  enc.circuit.gates.insert(enc.circuit.gates.end(),
                           std::make_move_iterator(unprep.begin()),
                           std::make_move_iterator(unprep.end()));
  return enc;
}

}  // namespace bvnc
