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
#include <iterator>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bvnc/errors.hpp"

namespace bvnc {

// Control polarity: Pos fires on |1>, Neg fires on |0>.
enum class Polarity { Pos, Neg };

inline char polarity_char(Polarity p) { return p == Polarity::Pos ? '+' : '-'; }

inline Polarity polarity_from_char(char c) {
  if (c == '+') return Polarity::Pos;
  if (c == '-') return Polarity::Neg;
  throw DomainError("polarity: expected '+' or '-'");
}

struct ControlTerm {
  std::size_t q;
  Polarity pol;

  bool operator==(const ControlTerm&) const = default;
};

// Sorts controls by qubit ascending and rejects duplicate qubits.
inline void normalize_controls(std::vector<ControlTerm>& controls) {
  std::sort(controls.begin(), controls.end(),
            [](const ControlTerm& a, const ControlTerm& b) { return a.q < b.q; });
  for (std::size_t i = 1; i < controls.size(); ++i)
    if (controls[i].q == controls[i - 1].q)
      throw StructureError("controls: duplicate control qubit");
}

inline std::optional<Polarity> control_on(const std::vector<ControlTerm>& controls,
                                          std::size_t q) {
  for (const ControlTerm& c : controls)
    if (c.q == q) return c.pol;
  return std::nullopt;
}

// Multi-controlled X; no controls means a plain X.
struct MCXGate {
  std::size_t target;
  std::vector<ControlTerm> controls;

  bool operator==(const MCXGate&) const = default;
};

// Multi-controlled Ry(angle) rotation.
struct RyGate {
  std::size_t target;
  double angle;
  std::vector<ControlTerm> controls;

  bool operator==(const RyGate&) const = default;
};

class Gate;

// Subcircuit executed under a shared set of controls. Body gates must not
// touch the block's control qubits.
struct ControlledBlock {
  std::vector<ControlTerm> controls;
  std::vector<Gate> body;

  bool operator==(const ControlledBlock&) const;
};

class Gate {
 public:
  using Node = std::variant<MCXGate, RyGate, ControlledBlock>;

  Gate(MCXGate g) : node_(std::move(g)) {}
  Gate(RyGate g) : node_(std::move(g)) {}
  Gate(ControlledBlock b) : node_(std::move(b)) {}

  bool is_mcx() const { return std::holds_alternative<MCXGate>(node_); }
  bool is_ry() const { return std::holds_alternative<RyGate>(node_); }
  bool is_block() const { return std::holds_alternative<ControlledBlock>(node_); }

  const MCXGate& mcx() const { return std::get<MCXGate>(node_); }
  MCXGate& mcx() { return std::get<MCXGate>(node_); }
  const RyGate& ry() const { return std::get<RyGate>(node_); }
  RyGate& ry() { return std::get<RyGate>(node_); }
  const ControlledBlock& block() const { return std::get<ControlledBlock>(node_); }
  ControlledBlock& block() { return std::get<ControlledBlock>(node_); }

  const Node& node() const { return node_; }

  const std::vector<ControlTerm>& controls() const {
    if (is_mcx()) return mcx().controls;
    if (is_ry()) return ry().controls;
    return block().controls;
  }
  std::vector<ControlTerm>& controls() {
    if (is_mcx()) return mcx().controls;
    if (is_ry()) return ry().controls;
    return block().controls;
  }

  // Target qubit for leaf gates; blocks have none.
  std::optional<std::size_t> target() const {
    if (is_mcx()) return mcx().target;
    if (is_ry()) return ry().target;
    return std::nullopt;
  }

  bool operator==(const Gate& other) const { return node_ == other.node_; }

 private:
  Node node_;
};

inline bool ControlledBlock::operator==(const ControlledBlock& other) const {
  return controls == other.controls && body == other.body;
}

// Gates listed left to right in time: gates[0] acts first.
struct Circuit {
  std::size_t n_qubits = 0;
  std::vector<Gate> gates;

  bool operator==(const Circuit&) const = default;
};

inline Gate make_x(std::size_t target) { return Gate(MCXGate{target, {}}); }

inline Gate make_mcx(std::size_t target, std::vector<ControlTerm> controls) {
  normalize_controls(controls);
  if (control_on(controls, target))
    throw StructureError("mcx: target listed among controls");
  return Gate(MCXGate{target, std::move(controls)});
}

inline Gate make_ry(std::size_t target, double angle,
                    std::vector<ControlTerm> controls = {}) {
  if (!std::isfinite(angle)) throw DomainError("ry: angle must be finite");
  normalize_controls(controls);
  if (control_on(controls, target))
    throw StructureError("ry: target listed among controls");
  return Gate(RyGate{target, angle, std::move(controls)});
}

inline Gate make_block(std::vector<ControlTerm> controls, std::vector<Gate> body) {
  normalize_controls(controls);
  return Gate(ControlledBlock{std::move(controls), std::move(body)});
}

// All qubits a gate reads or writes, sorted ascending, duplicates removed.
inline std::vector<std::size_t> gate_qubits(const Gate& g) {
  std::vector<std::size_t> qs;
  auto add_controls = [&qs](const std::vector<ControlTerm>& cs) {
    for (const ControlTerm& c : cs) qs.push_back(c.q);
  };
  if (g.is_block()) {
    add_controls(g.block().controls);
    for (const Gate& inner : g.block().body) {
      std::vector<std::size_t> sub = gate_qubits(inner);
      qs.insert(qs.end(), sub.begin(), sub.end());
    }
  } else {
    qs.push_back(*g.target());
    add_controls(g.controls());
  }
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  return qs;
}

inline bool disjoint_qubits(const Gate& a, const Gate& b) {
  std::vector<std::size_t> qa = gate_qubits(a);
  std::vector<std::size_t> qb = gate_qubits(b);
  std::vector<std::size_t> both;
  std::set_intersection(qa.begin(), qa.end(), qb.begin(), qb.end(),
                        std::back_inserter(both));
  return both.empty();
}

// Leaf gates, with blocks counted by content.
inline std::size_t gate_count(const std::vector<Gate>& gates) {
  std::size_t n = 0;
  for (const Gate& g : gates)
    n += g.is_block() ? gate_count(g.block().body) : 1;
  return n;
}

inline std::size_t gate_count(const Circuit& c) { return gate_count(c.gates); }

namespace detail {

inline void validate_gates(const std::vector<Gate>& gates, std::size_t n_qubits,
                           const std::vector<ControlTerm>& outer,
                           const std::string& where,
                           std::vector<std::string>& diags) {
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    const std::string at = where + "gate " + std::to_string(i);
    const std::vector<ControlTerm>& cs = g.controls();
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (cs[k].q >= n_qubits)
        diags.push_back(at + ": control qubit " + std::to_string(cs[k].q) +
                        " out of range");
      if (k > 0 && cs[k].q <= cs[k - 1].q)
        diags.push_back(at + ": controls not sorted strictly ascending");
      if (control_on(outer, cs[k].q))
        diags.push_back(at + ": reuses enclosing block control qubit " +
                        std::to_string(cs[k].q));
    }
    if (g.is_block()) {
      std::vector<ControlTerm> inherited = outer;
      inherited.insert(inherited.end(), g.block().controls.begin(),
                       g.block().controls.end());
      validate_gates(g.block().body, n_qubits, inherited, at + " > ", diags);
      continue;
    }
    const std::size_t t = *g.target();
    if (t >= n_qubits)
      diags.push_back(at + ": target qubit " + std::to_string(t) +
                      " out of range");
    if (control_on(cs, t))
      diags.push_back(at + ": target listed among controls");
    if (control_on(outer, t))
      diags.push_back(at + ": target is an enclosing block control qubit");
    if (g.is_ry() && !std::isfinite(g.ry().angle))
      diags.push_back(at + ": angle is not finite");
  }
}

}  // namespace detail

// Structural checks; returns human-readable diagnostics, empty when valid.
inline std::vector<std::string> validate(const Circuit& c) {
  std::vector<std::string> diags;
  if (c.n_qubits == 0) diags.push_back("circuit: n_qubits must be >= 1");
  detail::validate_gates(c.gates, c.n_qubits, {}, "", diags);
  return diags;
}

namespace detail {

inline void flatten_into(const std::vector<Gate>& gates,
                         const std::vector<ControlTerm>& outer,
                         std::vector<Gate>& out) {
  for (const Gate& g : gates) {
    if (g.is_block()) {
      std::vector<ControlTerm> merged = outer;
      merged.insert(merged.end(), g.block().controls.begin(),
                    g.block().controls.end());
      flatten_into(g.block().body, merged, out);
      continue;
    }
    std::vector<ControlTerm> cs = g.controls();
    cs.insert(cs.end(), outer.begin(), outer.end());
    if (g.is_mcx()) {
      out.push_back(make_mcx(g.mcx().target, std::move(cs)));
    } else {
      out.push_back(make_ry(g.ry().target, g.ry().angle, std::move(cs)));
    }
  }
}

}  // namespace detail

// Expands every block by folding its controls into each body gate. The
// result contains only MCX and Ry leaves and is unitarily equivalent.
inline Circuit flatten(const Circuit& c) {
  Circuit out;
  out.n_qubits = c.n_qubits;
  detail::flatten_into(c.gates, {}, out.gates);
  return out;
}

}  // namespace bvnc
