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
#include <cctype>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bvnc/birkhoff.hpp"
#include "bvnc/circuit.hpp"
#include "bvnc/errors.hpp"
#include "bvnc/matrix.hpp"
#include "bvnc/permutation.hpp"

namespace bvnc {

class ParseError : public Error {
 public:
  using Error::Error;
};

// Shortest text that round-trips the double exactly.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline double parse_double(const std::string& tok, const std::string& what) {
  const char* s = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  while (end && *end == ' ') ++end;
  if (end == s || (end && *end != '\0'))
    throw ParseError(what + ": not a number: '" + tok + "'");
  return v;
}

inline std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

// One row per line, values comma separated. Blank lines and lines starting
// with '#' are skipped.
inline DenseMatrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = detail::trimmed(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<double> row;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ','))
      row.push_back(detail::parse_double(detail::trimmed(cell), "csv"));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("csv: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("csv: no data");
  DenseMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  return m;
}

// Matrix Market dense ("array") format, real general, column major.
inline DenseMatrix read_matrix_mm(std::istream& in) {
  std::string banner;
  if (!std::getline(in, banner))
    throw ParseError("matrix market: empty input");
  std::stringstream hs(banner);
  std::string tag, object, fmt, field, symmetry;
  hs >> tag >> object >> fmt >> field >> symmetry;
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
  };
  if (tag != "%%MatrixMarket" || lower(object) != "matrix")
    throw ParseError("matrix market: bad banner");
  if (lower(fmt) != "array" || lower(field) != "real" ||
      lower(symmetry) != "general")
    throw ParseError("matrix market: only 'array real general' is supported");

  std::string line;
  std::size_t nr = 0, nc = 0;
  while (std::getline(in, line)) {
    const std::string t = detail::trimmed(line);
    if (t.empty() || t.front() == '%') continue;
    std::stringstream ds(t);
    if (!(ds >> nr >> nc) || nr == 0 || nc == 0)
      throw ParseError("matrix market: bad size line");
    break;
  }
  if (nr == 0) throw ParseError("matrix market: missing size line");

  DenseMatrix m(nr, nc);
  std::size_t count = 0;
  while (count < nr * nc && std::getline(in, line)) {
    const std::string t = detail::trimmed(line);
    if (t.empty() || t.front() == '%') continue;
    std::stringstream vs(t);
    std::string tok;
    while (vs >> tok) {
      if (count >= nr * nc)
        throw ParseError("matrix market: too many values");
      const double v = detail::parse_double(tok, "matrix market");
      m(count % nr, count / nr) = v;
      ++count;
    }
  }
  if (count != nr * nc) throw ParseError("matrix market: too few values");
  return m;
}

// Dispatches on extension: .mtx / .mm read as Matrix Market, anything else
// as CSV.
inline DenseMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".mtx" || ext == ".mm") return read_matrix_mm(in);
  return read_matrix_csv(in);
}

inline void write_matrix_csv(std::ostream& out, const DenseMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
}

// --- JSON -----------------------------------------------------------------

inline nlohmann::json to_json(const BirkhoffDecomposition& d) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : d.terms) {
    nlohmann::json perm = nlohmann::json::array();
    for (std::size_t i = 0; i < t.perm.size(); ++i) perm.push_back(t.perm(i));
    terms.push_back({{"w", t.weight}, {"perm", std::move(perm)}});
  }
  return {{"n", d.n}, {"residual", d.residual_norm}, {"terms", std::move(terms)}};
}

inline BirkhoffDecomposition decomposition_from_json(const nlohmann::json& j) {
  try {
    BirkhoffDecomposition d;
    d.n = j.at("n").get<std::size_t>();
    d.residual_norm = j.at("residual").get<double>();
    for (const auto& jt : j.at("terms")) {
      std::vector<std::size_t> map = jt.at("perm").get<std::vector<std::size_t>>();
      if (map.size() != d.n)
        throw ParseError("decomposition: perm length does not match n");
      d.terms.push_back({jt.at("w").get<double>(), Permutation(std::move(map))});
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("decomposition: ") + e.what());
  }
}

inline nlohmann::json controls_to_json(const std::vector<ControlTerm>& cs) {
  nlohmann::json out = nlohmann::json::array();
  for (const ControlTerm& c : cs)
    out.push_back({{"q", c.q}, {"pol", std::string(1, polarity_char(c.pol))}});
  return out;
}

inline nlohmann::json to_json(const Gate& g) {
  if (g.is_mcx())
    return {{"kind", "mcx"},
            {"target", g.mcx().target},
            {"controls", controls_to_json(g.mcx().controls)}};
  if (g.is_ry())
    return {{"kind", "ry"},
            {"target", g.ry().target},
            {"angle", g.ry().angle},
            {"controls", controls_to_json(g.ry().controls)}};
  nlohmann::json body = nlohmann::json::array();
  for (const Gate& inner : g.block().body) body.push_back(to_json(inner));
  return {{"kind", "block"},
          {"controls", controls_to_json(g.block().controls)},
          {"body", std::move(body)}};
}

inline nlohmann::json to_json(const Circuit& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const Gate& g : c.gates) gates.push_back(to_json(g));
  return {{"n_qubits", c.n_qubits}, {"gates", std::move(gates)}};
}

inline std::vector<ControlTerm> controls_from_json(const nlohmann::json& j) {
  std::vector<ControlTerm> cs;
  for (const auto& jc : j) {
    const std::string pol = jc.at("pol").get<std::string>();
    if (pol.size() != 1) throw ParseError("circuit: bad polarity");
    cs.push_back({jc.at("q").get<std::size_t>(), polarity_from_char(pol[0])});
  }
  return cs;
}

inline Gate gate_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "mcx")
      return make_mcx(j.at("target").get<std::size_t>(),
                      controls_from_json(j.at("controls")));
    if (kind == "ry")
      return make_ry(j.at("target").get<std::size_t>(),
                     j.at("angle").get<double>(),
                     controls_from_json(j.at("controls")));
    if (kind == "block") {
      std::vector<Gate> body;
      for (const auto& jb : j.at("body")) body.push_back(gate_from_json(jb));
      return make_block(controls_from_json(j.at("controls")), std::move(body));
    }
    throw ParseError("circuit: unknown gate kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("circuit: ") + e.what());
  }
}

inline Circuit circuit_from_json(const nlohmann::json& j) {
  try {
    Circuit c;
    c.n_qubits = j.at("n_qubits").get<std::size_t>();
    for (const auto& jg : j.at("gates")) c.gates.push_back(gate_from_json(jg));
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("circuit: ") + e.what());
  }
}

// --- OpenQASM 3 -----------------------------------------------------------

namespace detail {

inline void emit_qasm_gate(std::ostream& out, const Gate& g) {
  std::vector<ControlTerm> cs = g.controls();
  std::sort(cs.begin(), cs.end(),
            [](const ControlTerm& a, const ControlTerm& b) { return a.q > b.q; });
  for (const ControlTerm& c : cs)
    out << (c.pol == Polarity::Pos ? "ctrl @ " : "negctrl @ ");
  if (g.is_mcx()) {
    out << "x ";
  } else {
    out << "ry(" << format_double(g.ry().angle) << ") ";
  }
  for (const ControlTerm& c : cs) out << "q[" << c.q << "], ";
  out << "q[" << *g.target() << "];\n";
}

}  // namespace detail

// Flat OpenQASM 3 listing; blocks are expanded. Control modifiers and their
// operands appear in descending qubit order, target last.
inline void write_qasm(std::ostream& out, const Circuit& c) {
  out << "OPENQASM 3.0;\n";
  out << "include \"stdgates.inc\";\n";
  out << "qubit[" << c.n_qubits << "] q;\n";
  const Circuit flat = flatten(c);
  for (const Gate& g : flat.gates) detail::emit_qasm_gate(out, g);
}

inline std::string qasm_string(const Circuit& c) {
  std::ostringstream ss;
  write_qasm(ss, c);
  return ss.str();
}

namespace detail {

inline Gate parse_qasm_statement(const std::string& stmt) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < stmt.size() && (stmt[pos] == ' ' || stmt[pos] == '\t')) ++pos;
  };
  auto eat = [&](const std::string& word) {
    skip_ws();
    if (stmt.compare(pos, word.size(), word) == 0) {
      pos += word.size();
      return true;
    }
    return false;
  };

  std::vector<Polarity> mods;
  while (true) {
    if (eat("negctrl")) {
      mods.push_back(Polarity::Neg);
    } else if (eat("ctrl")) {
      mods.push_back(Polarity::Pos);
    } else {
      break;
    }
    if (!eat("@")) throw ParseError("qasm: expected '@' after control modifier");
  }

  bool is_x = false;
  double angle = 0.0;
  if (eat("ry")) {
    if (!eat("(")) throw ParseError("qasm: expected '(' after ry");
    const std::size_t close = stmt.find(')', pos);
    if (close == std::string::npos) throw ParseError("qasm: unterminated ry angle");
    angle = parse_double(trimmed(stmt.substr(pos, close - pos)), "qasm angle");
    pos = close + 1;
  } else if (eat("x")) {
    is_x = true;
  } else {
    throw ParseError("qasm: unsupported statement: " + stmt);
  }

  std::vector<std::size_t> operands;
  while (true) {
    skip_ws();
    if (!eat("q[")) throw ParseError("qasm: expected qubit operand in: " + stmt);
    std::size_t q = 0;
    bool any = false;
    while (pos < stmt.size() && stmt[pos] >= '0' && stmt[pos] <= '9') {
      q = q * 10 + static_cast<std::size_t>(stmt[pos] - '0');
      ++pos;
      any = true;
    }
    if (!any || !eat("]")) throw ParseError("qasm: bad qubit operand in: " + stmt);
    operands.push_back(q);
    skip_ws();
    if (eat(",")) continue;
    if (eat(";")) break;
    throw ParseError("qasm: expected ',' or ';' in: " + stmt);
  }
  if (operands.size() != mods.size() + 1)
    throw ParseError("qasm: control modifier count does not match operands");

  std::vector<ControlTerm> controls;
  for (std::size_t i = 0; i < mods.size(); ++i)
    controls.push_back({operands[i], mods[i]});
  const std::size_t target = operands.back();
  return is_x ? make_mcx(target, std::move(controls))
              : make_ry(target, angle, std::move(controls));
}

}  // namespace detail

// Reads exactly the subset write_qasm emits: the version line, the
// stdgates include, one qubit register named q, and ctrl/negctrl-modified
// x and ry statements.
inline Circuit read_qasm(std::istream& in) {
  Circuit c;
  bool saw_version = false;
  bool saw_register = false;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = detail::trimmed(line);
    if (t.empty() || t.rfind("//", 0) == 0) continue;
    if (t == "OPENQASM 3.0;") {
      saw_version = true;
      continue;
    }
    if (t == "include \"stdgates.inc\";") continue;
    if (t.rfind("qubit[", 0) == 0) {
      const std::size_t close = t.find(']');
      if (close == std::string::npos || detail::trimmed(t.substr(close + 1)) != "q;")
        throw ParseError("qasm: bad qubit declaration: " + t);
      c.n_qubits = static_cast<std::size_t>(
          std::stoul(t.substr(6, close - 6)));
      saw_register = true;
      continue;
    }
    if (!saw_version) throw ParseError("qasm: missing OPENQASM 3.0 header");
    if (!saw_register) throw ParseError("qasm: gate before qubit declaration");
    c.gates.push_back(detail::parse_qasm_statement(t));
  }
  if (!saw_version || !saw_register)
    throw ParseError("qasm: missing header or qubit declaration");
  return c;
}

// Dispatches on extension: .qasm parses the emitted subset, anything else
// is treated as circuit JSON.
inline Circuit read_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".qasm")
    return read_qasm(in);
  try {
    return circuit_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("circuit json: ") + e.what());
  }
}

}  // namespace bvnc
