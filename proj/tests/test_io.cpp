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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "bvnc/io.hpp"
#include "helpers.hpp"

using namespace bvnc;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "bvnc_io_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  REQUIRE(format_double(0.5) == "0.5");
  REQUIRE(format_double(1.0 / 3.0) == "0.33333333333333331");

  std::mt19937_64 rng(0xf10a7ull);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int trial = 0; trial < 200; ++trial) {
    const double v = dist(rng);
    REQUIRE(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("csv write then read is exact") {
  const DenseMatrix s = testutil::golden_s();
  std::stringstream ss;
  write_matrix_csv(ss, s);
  const DenseMatrix back = read_matrix_csv(ss);
  REQUIRE(back == s);
}

TEST_CASE("csv reader skips comments and rejects bad input") {
  std::stringstream good("# header\n\n1, 2\n3,4\n");
  const DenseMatrix m = read_matrix_csv(good);
  REQUIRE(m == DenseMatrix{{1, 2}, {3, 4}});

  std::stringstream ragged("1,2\n3\n");
  REQUIRE_THROWS_AS(read_matrix_csv(ragged), ParseError);

  std::stringstream junk("1,two\n");
  REQUIRE_THROWS_AS(read_matrix_csv(junk), ParseError);

  std::stringstream empty("# only a comment\n");
  REQUIRE_THROWS_AS(read_matrix_csv(empty), ParseError);
}

TEST_CASE("matrix market reader is column major") {
  std::stringstream ss(
      "%%MatrixMarket matrix array real general\n"
      "% dense two by two\n"
      "2 2\n"
      "1\n3\n2\n4\n");
  const DenseMatrix m = read_matrix_mm(ss);
  REQUIRE(m == DenseMatrix{{1, 2}, {3, 4}});
}

TEST_CASE("matrix market reader rejects malformed input") {
  std::stringstream bad_banner("%%MatrixMarket matrix coordinate real general\n2 2\n");
  REQUIRE_THROWS_AS(read_matrix_mm(bad_banner), ParseError);

  std::stringstream no_banner("2 2\n1\n2\n3\n4\n");
  REQUIRE_THROWS_AS(read_matrix_mm(no_banner), ParseError);

  std::stringstream short_data(
      "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n");
  REQUIRE_THROWS_AS(read_matrix_mm(short_data), ParseError);

  std::stringstream long_data(
      "%%MatrixMarket matrix array real general\n1 1\n1 2\n");
  REQUIRE_THROWS_AS(read_matrix_mm(long_data), ParseError);
}

TEST_CASE("read_matrix dispatches on extension") {
  const auto csv = temp_file("m.csv");
  write_file(csv, "0.5,0.5\n0.5,0.5\n");
  REQUIRE(read_matrix(csv.string()) == DenseMatrix{{0.5, 0.5}, {0.5, 0.5}});

  const auto mtx = temp_file("m.mtx");
  write_file(mtx, "%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n");
  REQUIRE(read_matrix(mtx.string()) == DenseMatrix::identity(2));

  REQUIRE_THROWS_AS(read_matrix(temp_file("missing.csv").string()), ParseError);
}

TEST_CASE("decomposition json round trip") {
  const BirkhoffDecomposition d = testutil::golden_decomposition();
  const nlohmann::json j = to_json(d);
  REQUIRE(j.at("n") == 4);
  REQUIRE(j.at("terms").size() == 4);
  REQUIRE(j.at("terms")[0].at("w").get<double>() == d.terms[0].weight);
  REQUIRE(j.at("terms")[0].at("perm").get<std::vector<std::size_t>>() ==
          std::vector<std::size_t>{3, 2, 1, 0});

  const BirkhoffDecomposition back = decomposition_from_json(j);
  REQUIRE(back.n == d.n);
  REQUIRE(back.residual_norm == d.residual_norm);
  REQUIRE(back.terms.size() == d.terms.size());
  for (std::size_t i = 0; i < d.terms.size(); ++i) {
    REQUIRE(back.terms[i].weight == d.terms[i].weight);
    REQUIRE(back.terms[i].perm == d.terms[i].perm);
  }
}

TEST_CASE("decomposition json rejects malformed documents") {
  REQUIRE_THROWS_AS(decomposition_from_json({{"n", 2}}), ParseError);

  nlohmann::json wrong_len = {
      {"n", 3},
      {"residual", 0.0},
      {"terms", {{{"w", 1.0}, {"perm", {0, 1}}}}}};
  REQUIRE_THROWS_AS(decomposition_from_json(wrong_len), ParseError);
}

TEST_CASE("circuit json round trip covers every gate kind") {
  Circuit c;
  c.n_qubits = 3;
  c.gates.push_back(make_mcx(0, {{1, Polarity::Neg}, {2, Polarity::Pos}}));
  c.gates.push_back(make_ry(2, -1.25, {}));
  c.gates.push_back(make_block({{2, Polarity::Neg}},
                               {make_x(0), make_ry(1, 0.125, {})}));

  const nlohmann::json j = to_json(c);
  REQUIRE(j.at("n_qubits") == 3);
  REQUIRE(j.at("gates")[0].at("kind") == "mcx");
  REQUIRE(j.at("gates")[0].at("controls")[0].at("pol") == "-");
  REQUIRE(j.at("gates")[1].at("kind") == "ry");
  REQUIRE(j.at("gates")[1].at("angle").get<double>() == -1.25);
  REQUIRE(j.at("gates")[2].at("kind") == "block");
  REQUIRE(j.at("gates")[2].at("body").size() == 2);

  const Circuit back = circuit_from_json(j);
  REQUIRE(back == c);
}

TEST_CASE("circuit json rejects malformed documents") {
  REQUIRE_THROWS_AS(circuit_from_json({{"gates", nlohmann::json::array()}}),
                    ParseError);

  nlohmann::json bad_kind = {
      {"n_qubits", 1},
      {"gates", {{{"kind", "h"}, {"target", 0}, {"controls", nlohmann::json::array()}}}}};
  REQUIRE_THROWS_AS(circuit_from_json(bad_kind), ParseError);
}

TEST_CASE("qasm emission matches the golden text") {
  Circuit c;
  c.n_qubits = 3;
  c.gates.push_back(make_mcx(0, {{1, Polarity::Neg}, {2, Polarity::Pos}}));
  c.gates.push_back(make_ry(2, 0.5, {}));
  c.gates.push_back(make_block({{2, Polarity::Pos}}, {make_x(0)}));

  const std::string expected =
      "OPENQASM 3.0;\n"
      "include \"stdgates.inc\";\n"
      "qubit[3] q;\n"
      "ctrl @ negctrl @ x q[2], q[1], q[0];\n"
      "ry(0.5) q[2];\n"
      "ctrl @ x q[2], q[0];\n";
  REQUIRE(qasm_string(c) == expected);
}

TEST_CASE("qasm reader accepts exactly what the writer emits") {
  std::mt19937_64 rng(0x9a5ull);
  for (int trial = 0; trial < 50; ++trial) {
    const Circuit c = testutil::random_circuit(4, 10, rng);
    std::istringstream in(qasm_string(c));
    const Circuit back = read_qasm(in);
    REQUIRE(back.n_qubits == c.n_qubits);
    REQUIRE(back == flatten(c));
  }
}

TEST_CASE("qasm reader rejects statements outside the subset") {
  std::istringstream missing_at(
      "OPENQASM 3.0;\nqubit[1] q;\nctrl x q[0];\n");
  REQUIRE_THROWS_AS(read_qasm(missing_at), ParseError);

  std::istringstream unknown_gate(
      "OPENQASM 3.0;\nqubit[1] q;\nh q[0];\n");
  REQUIRE_THROWS_AS(read_qasm(unknown_gate), ParseError);

  std::istringstream no_register("OPENQASM 3.0;\nx q[0];\n");
  REQUIRE_THROWS_AS(read_qasm(no_register), ParseError);

  std::istringstream no_header("qubit[1] q;\nx q[0];\n");
  REQUIRE_THROWS_AS(read_qasm(no_header), ParseError);
}

TEST_CASE("read_circuit dispatches on extension") {
  Circuit c;
  c.n_qubits = 2;
  c.gates.push_back(make_mcx(0, {{1, Polarity::Pos}}));

  const auto qasm = temp_file("c.qasm");
  write_file(qasm, qasm_string(c));
  REQUIRE(read_circuit(qasm.string()) == c);

  const auto json = temp_file("c.json");
  write_file(json, to_json(c).dump(2));
  REQUIRE(read_circuit(json.string()) == c);

  const auto garbage = temp_file("c2.json");
  write_file(garbage, "not json");
  REQUIRE_THROWS_AS(read_circuit(garbage.string()), ParseError);
}
