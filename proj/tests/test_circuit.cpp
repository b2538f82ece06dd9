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

#include "bvnc/circuit.hpp"

using namespace bvnc;

TEST_CASE("factories normalize and validate controls") {
  const Gate g = make_mcx(0, {{3, Polarity::Neg}, {1, Polarity::Pos}});
  REQUIRE(g.mcx().controls[0].q == 1);
  REQUIRE(g.mcx().controls[1].q == 3);

  REQUIRE_THROWS_AS(make_mcx(0, {{1, Polarity::Pos}, {1, Polarity::Neg}}),
                    StructureError);
  REQUIRE_THROWS_AS(make_mcx(1, {{1, Polarity::Pos}}), StructureError);
  REQUIRE_THROWS_AS(make_ry(0, std::nan(""), {}), DomainError);
}

TEST_CASE("gate accessors") {
  const Gate x = make_x(2);
  REQUIRE(x.is_mcx());
  REQUIRE(x.target() == 2);
  REQUIRE(x.controls().empty());

  const Gate ry = make_ry(1, 0.5, {{0, Polarity::Neg}});
  REQUIRE(ry.is_ry());
  REQUIRE(ry.ry().angle == 0.5);

  const Gate blk = make_block({{2, Polarity::Pos}}, {make_x(0), make_x(1)});
  REQUIRE(blk.is_block());
  REQUIRE_FALSE(blk.target().has_value());
  REQUIRE(blk.block().body.size() == 2);
}

TEST_CASE("validate finds structural problems") {
  Circuit c;
  c.n_qubits = 2;
  c.gates.push_back(make_x(0));
  REQUIRE(validate(c).empty());

  c.gates.push_back(Gate(MCXGate{5, {}}));
  REQUIRE_FALSE(validate(c).empty());

  Circuit bad_block;
  bad_block.n_qubits = 3;
  // Body gate targets the block's own control qubit.
  bad_block.gates.push_back(
      Gate(ControlledBlock{{{2, Polarity::Pos}}, {make_x(2)}}));
  REQUIRE_FALSE(validate(bad_block).empty());

  Circuit unsorted;
  unsorted.n_qubits = 3;
  unsorted.gates.push_back(
      Gate(MCXGate{0, {{2, Polarity::Pos}, {1, Polarity::Neg}}}));
  REQUIRE_FALSE(validate(unsorted).empty());

  Circuit bad_angle;
  bad_angle.n_qubits = 1;
  bad_angle.gates.push_back(Gate(RyGate{0, std::nan(""), {}}));
  REQUIRE_FALSE(validate(bad_angle).empty());

  Circuit empty;
  empty.n_qubits = 0;
  REQUIRE_FALSE(validate(empty).empty());
}

TEST_CASE("flatten folds block controls into body gates") {
  Circuit c;
  c.n_qubits = 4;
  c.gates.push_back(make_block(
      {{3, Polarity::Neg}},
      {make_x(0),
       make_block({{2, Polarity::Pos}}, {make_ry(1, 0.25, {{0, Polarity::Pos}})})}));

  const Circuit flat = flatten(c);
  REQUIRE(flat.gates.size() == 2);
  REQUIRE(flat.gates[0] ==
          make_mcx(0, {{3, Polarity::Neg}}));
  REQUIRE(flat.gates[1] ==
          make_ry(1, 0.25,
                  {{0, Polarity::Pos}, {2, Polarity::Pos}, {3, Polarity::Neg}}));
  REQUIRE(validate(flat).empty());
}

TEST_CASE("qubit support") {
  const Gate g = make_mcx(0, {{2, Polarity::Pos}});
  REQUIRE(gate_qubits(g) == std::vector<std::size_t>{0, 2});

  const Gate blk = make_block({{3, Polarity::Neg}}, {make_x(1)});
  REQUIRE(gate_qubits(blk) == std::vector<std::size_t>{1, 3});

  REQUIRE(disjoint_qubits(make_x(0), make_x(1)));
  REQUIRE_FALSE(disjoint_qubits(make_x(0), make_mcx(1, {{0, Polarity::Pos}})));
}

TEST_CASE("gate_count counts leaves through blocks") {
  Circuit c;
  c.n_qubits = 3;
  c.gates.push_back(make_x(0));
  c.gates.push_back(
      make_block({{2, Polarity::Pos}}, {make_x(0), make_x(1)}));
  REQUIRE(gate_count(c) == 3);
}

TEST_CASE("polarity characters") {
  REQUIRE(polarity_char(Polarity::Pos) == '+');
  REQUIRE(polarity_char(Polarity::Neg) == '-');
  REQUIRE(polarity_from_char('+') == Polarity::Pos);
  REQUIRE(polarity_from_char('-') == Polarity::Neg);
  REQUIRE_THROWS_AS(polarity_from_char('x'), DomainError);
}
