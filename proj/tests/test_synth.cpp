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

#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "bvnc/simulator.hpp"
#include "bvnc/synth.hpp"
#include "helpers.hpp"

using namespace bvnc;

namespace {

Circuit wrap(std::size_t n_qubits, std::vector<Gate> gates) {
  Circuit c;
  c.n_qubits = n_qubits;
  c.gates = std::move(gates);
  return c;
}

DenseMatrix transposition_matrix(std::size_t a, std::size_t b, std::size_t n) {
  DenseMatrix m = DenseMatrix::identity(n);
  m(a, a) = m(b, b) = 0.0;
  m(a, b) = m(b, a) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("shifted relocates every qubit reference") {
  const Gate g = shifted(make_mcx(0, {{1, Polarity::Pos}}), 2);
  REQUIRE(g == make_mcx(2, {{3, Polarity::Pos}}));

  const Gate blk =
      shifted(make_block({{1, Polarity::Neg}}, {make_ry(0, 0.5, {})}), 3);
  REQUIRE(blk == make_block({{4, Polarity::Neg}}, {make_ry(3, 0.5, {})}));
}

TEST_CASE("inverse_gates reverses order and negates angles") {
  const std::vector<Gate> gates = {make_x(0), make_ry(1, 0.5, {})};
  const std::vector<Gate> inv = inverse_gates(gates);
  REQUIRE(inv.size() == 2);
  REQUIRE(inv[0] == make_ry(1, -0.5, {}));
  REQUIRE(inv[1] == make_x(0));
}

TEST_CASE("Hamming distance one gives a single multi-controlled X") {
  const std::vector<Gate> g = transposition_to_gates({0, 1}, 2);
  REQUIRE(g.size() == 1);
  REQUIRE(g[0] == make_mcx(0, {{1, Polarity::Neg}}));

  // 5 <-> 7 on three qubits: differ in bit 1, share bits {0: 1, 2: 1}.
  const std::vector<Gate> g2 = transposition_to_gates({5, 7}, 3);
  REQUIRE(g2.size() == 1);
  REQUIRE(g2[0] == make_mcx(1, {{0, Polarity::Pos}, {2, Polarity::Pos}}));
}

TEST_CASE("larger Hamming distance uses a palindrome of adjacent swaps") {
  const std::vector<Gate> g = transposition_to_gates({0, 3}, 2);
  REQUIRE(g.size() == 3);
  REQUIRE(g[0] == make_mcx(0, {{1, Polarity::Neg}}));
  REQUIRE(g[1] == make_mcx(1, {{0, Polarity::Pos}}));
  REQUIRE(g[2] == make_mcx(0, {{1, Polarity::Neg}}));

  const DenseMatrix u = unitary_of(wrap(2, g));
  REQUIRE(u.max_abs_diff(transposition_matrix(0, 3, 4)) == 0.0);
}

TEST_CASE("transposition gate counts and unitaries across all pairs") {
  for (std::size_t n : {2u, 3u, 4u}) {
    const std::size_t dim = std::size_t{1} << n;
    for (std::size_t a = 0; a < dim; ++a) {
      for (std::size_t b = a + 1; b < dim; ++b) {
        const std::size_t h =
            std::size_t(std::popcount(unsigned(a ^ b)));
        const std::vector<Gate> g = transposition_to_gates({a, b}, n);
        REQUIRE(g.size() == 2 * h - 1);
        const DenseMatrix u = unitary_of(wrap(n, g));
        REQUIRE(u.max_abs_diff(transposition_matrix(a, b, dim)) == 0.0);
      }
    }
  }
  REQUIRE_THROWS_AS(transposition_to_gates({0, 4}, 2), RangeError);
}

TEST_CASE("a bare swap chain realizes a cycle, not a transposition") {
  // Naively walking 0 -> 1 -> 3 without undoing the intermediate step
  // permutes three basis states instead of exchanging two.
  const std::vector<Gate> chain = {make_mcx(0, {{1, Polarity::Neg}}),
                                   make_mcx(1, {{0, Polarity::Pos}})};
  const DenseMatrix u = unitary_of(wrap(2, chain));
  const Permutation three_cycle = from_cycles({Cycle({0, 3, 1})}, 4);
  REQUIRE(u.max_abs_diff(matrix_of(three_cycle)) == 0.0);
  REQUIRE(u.max_abs_diff(transposition_matrix(0, 3, 4)) == 1.0);
}

TEST_CASE("permutation circuits reproduce the permutation matrix") {
  const Permutation p1({3, 2, 1, 0});
  const Circuit c1 = permutation_to_circuit(p1, TranspositionScheme::Star);
  REQUIRE(unitary_of(c1).max_abs_diff(matrix_of(p1)) == 0.0);

  const Permutation p3({1, 0, 3, 2});
  const Circuit c3 = permutation_to_circuit(p3, TranspositionScheme::Star);
  REQUIRE(unitary_of(c3).max_abs_diff(matrix_of(p3)) == 0.0);

  const Permutation p4({2, 0, 1, 3});
  const Circuit c4 = permutation_to_circuit(p4, TranspositionScheme::Star);
  REQUIRE(c4.gates.size() == 2);
  REQUIRE(c4.gates[0] == make_mcx(1, {{0, Polarity::Neg}}));
  REQUIRE(c4.gates[1] == make_mcx(0, {{1, Polarity::Neg}}));
  REQUIRE(unitary_of(c4).max_abs_diff(matrix_of(p4)) == 0.0);
}

TEST_CASE("identity permutation synthesizes an empty circuit") {
  const Circuit c = permutation_to_circuit(Permutation::identity(8),
                                           TranspositionScheme::Star);
  REQUIRE(c.gates.empty());
  REQUIRE(c.n_qubits == 3);
}

TEST_CASE("random permutations synthesize exactly under both schemes") {
  std::mt19937_64 rng(0x5711ull);
  const std::size_t sizes[] = {2, 4, 8, 16, 32};
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = sizes[trial % 5];
    const Permutation p = testutil::random_permutation(n, rng);
    for (TranspositionScheme scheme :
         {TranspositionScheme::Star, TranspositionScheme::Chain}) {
      const Circuit c = permutation_to_circuit(p, scheme);
      REQUIRE(unitary_of(c).max_abs_diff(matrix_of(p)) == 0.0);
    }
  }
}

TEST_CASE("permutation size must be a power of two") {
  REQUIRE_THROWS_AS(
      permutation_to_circuit(Permutation::identity(3), TranspositionScheme::Star),
      DimensionError);
  REQUIRE_THROWS_AS(
      permutation_to_circuit(Permutation::identity(1), TranspositionScheme::Star),
      DimensionError);
}

TEST_CASE("state_prep loads square roots of normalized weights") {
  const std::vector<Gate> prep = state_prep({0.25, 0.75}, 1);
  const DenseMatrix u = unitary_of(wrap(1, prep));
  REQUIRE(std::abs(u(0, 0) - 0.5) < 1e-15);
  REQUIRE(std::abs(u(1, 0) - std::sqrt(0.75)) < 1e-15);

  const std::vector<double> w = {1.0 / 6, 1.0 / 6, 1.0 / 3, 1.0 / 3};
  const DenseMatrix u2 = unitary_of(wrap(2, state_prep(w, 2)));
  for (std::size_t i = 0; i < 4; ++i)
    REQUIRE(std::abs(u2(i, 0) - std::sqrt(w[i])) < 1e-15);
}

TEST_CASE("state_prep skips zero-mass branches and pads short inputs") {
  const std::vector<Gate> prep = state_prep({0.5, 0.0, 0.5}, 2);
  REQUIRE(prep.size() == 1);
  const DenseMatrix u = unitary_of(wrap(2, prep));
  REQUIRE(std::abs(u(0, 0) - std::sqrt(0.5)) < 1e-15);
  REQUIRE(u(1, 0) == 0.0);
  REQUIRE(std::abs(u(2, 0) - std::sqrt(0.5)) < 1e-15);
  REQUIRE(u(3, 0) == 0.0);
}

TEST_CASE("state_prep normalizes unnormalized weights") {
  const DenseMatrix u = unitary_of(wrap(1, state_prep({2.0, 6.0}, 1)));
  REQUIRE(std::abs(u(0, 0) - std::sqrt(0.25)) < 1e-15);
  REQUIRE(std::abs(u(1, 0) - std::sqrt(0.75)) < 1e-15);
}

TEST_CASE("state_prep followed by its inverse is the identity") {
  std::mt19937_64 rng(0x93e0ull);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(5);
    for (double& x : w) x = unit(rng);
    std::vector<Gate> gates = state_prep(w, 3);
    const std::vector<Gate> inv = inverse_gates(gates);
    gates.insert(gates.end(), inv.begin(), inv.end());
    const DenseMatrix u = unitary_of(wrap(3, gates));
    REQUIRE(u.max_abs_diff(DenseMatrix::identity(8)) < 1e-14);
  }
}

TEST_CASE("state_prep input validation") {
  REQUIRE_THROWS_AS(state_prep({}, 1), DomainError);
  REQUIRE_THROWS_AS(state_prep({0.5, -0.1}, 1), DomainError);
  REQUIRE_THROWS_AS(state_prep({0.0, 0.0}, 1), DomainError);
  REQUIRE_THROWS_AS(state_prep({1, 2, 3}, 1), DimensionError);
}

TEST_CASE("LCU block encoding of the worked four by four example") {
  const DenseMatrix s = testutil::golden_s();
  const BirkhoffDecomposition d = testutil::golden_decomposition();

  const BlockEncoding enc = lcu_block_encoding(d, TranspositionScheme::Star);
  REQUIRE(enc.n_system == 2);
  REQUIRE(enc.n_ancilla == 2);
  REQUIRE(enc.circuit.n_qubits == 4);
  REQUIRE(std::abs(enc.scale - 1.0) < 1e-15);

  const DenseMatrix u = unitary_of(enc.circuit);
  const DenseMatrix block = encoded_block(u, enc.n_ancilla);
  REQUIRE(block.scaled(enc.scale).max_abs_diff(s) < 1e-12);

  const VerificationReport rep =
      verify_block_encoding(enc.circuit, enc.n_ancilla, s.scaled(1.0 / enc.scale),
                            1e-10);
  REQUIRE(rep.ok);
  REQUIRE(rep.unitarity_defect < 1e-12);
}

TEST_CASE("LCU block encoding of a two by two doubly stochastic matrix") {
  const DenseMatrix a{{0.5, 0.5}, {0.5, 0.5}};
  const BirkhoffDecomposition d = birkhoff_decompose(a);
  REQUIRE(d.terms.size() == 2);

  const BlockEncoding enc = lcu_block_encoding(d, TranspositionScheme::Star);
  REQUIRE(enc.circuit.n_qubits == 2);
  const DenseMatrix block = encoded_block(unitary_of(enc.circuit), 1);
  REQUIRE(block.scaled(enc.scale).max_abs_diff(a) < 1e-12);
}

TEST_CASE("single-term decompositions need no ancilla") {
  const Permutation p({1, 2, 3, 0});
  const BirkhoffDecomposition d = birkhoff_decompose(matrix_of(p));
  REQUIRE(d.terms.size() == 1);

  const BlockEncoding enc = lcu_block_encoding(d, TranspositionScheme::Star);
  REQUIRE(enc.n_ancilla == 0);
  REQUIRE(enc.circuit.n_qubits == 2);
  REQUIRE(unitary_of(enc.circuit).max_abs_diff(matrix_of(p)) == 0.0);
}

TEST_CASE("random doubly stochastic matrices verify end to end") {
  std::mt19937_64 rng(0x1c5ull);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n_sys = 1 + std::size_t(trial % 3);
    const std::size_t dim = std::size_t{1} << n_sys;
    const DenseMatrix s = testutil::random_doubly_stochastic(dim, 2 * dim, rng);
    const BirkhoffDecomposition d = birkhoff_decompose(s);

    const BlockEncoding enc = lcu_block_encoding(d, TranspositionScheme::Star);
    const std::size_t k = d.terms.size();
    const std::size_t m = k == 1 ? 0 : std::size_t(std::bit_width(k - 1));
    REQUIRE(enc.circuit.n_qubits == n_sys + m);

    const VerificationReport rep = verify_block_encoding(
        enc.circuit, enc.n_ancilla, s.scaled(1.0 / enc.scale), 1e-10);
    REQUIRE(rep.ok);
    REQUIRE(rep.unitarity_defect < 1e-12);
  }
}

TEST_CASE("LCU input validation") {
  BirkhoffDecomposition empty;
  empty.n = 4;
  REQUIRE_THROWS_AS(lcu_block_encoding(empty, TranspositionScheme::Star),
                    DomainError);

  BirkhoffDecomposition odd;
  odd.n = 3;
  odd.terms.push_back({1.0, Permutation::identity(3)});
  REQUIRE_THROWS_AS(lcu_block_encoding(odd, TranspositionScheme::Star),
                    DimensionError);
}
