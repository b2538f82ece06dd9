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
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "bvnc/circuit.hpp"

namespace bvnc {

// True when swapping adjacent gates a and b is provably safe:
//  - their qubit supports are disjoint, or
//  - both carry a control on some shared qubit with opposite polarity
//    (each gate is the identity wherever the other acts), or
//  - same kind, same target and identical control lists (same-axis
//    rotations, or literally equal X-type gates).
inline bool commutes(const Gate& a, const Gate& b) {
  if (disjoint_qubits(a, b)) return true;
  for (const ControlTerm& ca : a.controls()) {
    const std::optional<Polarity> pb = control_on(b.controls(), ca.q);
    if (pb && *pb != ca.pol) return true;
  }
  if (!a.is_block() && !b.is_block() && a.node().index() == b.node().index() &&
      *a.target() == *b.target() && a.controls() == b.controls())
    return true;
  return false;
}

namespace detail {

// Controls equal except for exactly one qubit present in both with
// opposite polarity; returns that qubit.
inline std::optional<std::size_t> single_polarity_clash(
    const std::vector<ControlTerm>& a, const std::vector<ControlTerm>& b) {
  if (a.size() != b.size()) return std::nullopt;
  std::optional<std::size_t> clash;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].q != b[i].q) return std::nullopt;
    if (a[i].pol == b[i].pol) continue;
    if (clash) return std::nullopt;
    clash = a[i].q;
  }
  return clash;
}

inline std::vector<ControlTerm> without_control(std::vector<ControlTerm> cs,
                                                std::size_t q) {
  std::erase_if(cs, [q](const ControlTerm& c) { return c.q == q; });
  return cs;
}

inline bool is_plain_x(const Gate& g) {
  return g.is_mcx() && g.mcx().controls.empty();
}

// Rewrites the adjacent pair (gates[i], gates[i+1]) if a rule applies.
inline bool rewrite_pair(std::vector<Gate>& gates, std::size_t i) {
  Gate& a = gates[i];
  Gate& b = gates[i + 1];

  // Cancellation: adjacent equal X-type gates are the identity.
  if (a.is_mcx() && b.is_mcx() && a.mcx() == b.mcx()) {
    gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(i),
                gates.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    return true;
  }

  // Same-axis rotations under identical controls add their angles.
  if (a.is_ry() && b.is_ry() && a.ry().target == b.ry().target &&
      a.ry().controls == b.ry().controls) {
    const double sum = a.ry().angle + b.ry().angle;
    if (sum == 0.0) {
      gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(i),
                  gates.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else {
      a.ry().angle = sum;
      gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    }
    return true;
  }

  // Polarity merge: twin gates differing in one control's polarity fire on
  // complementary subspaces and fuse into one gate without that control.
  if (a.is_mcx() && b.is_mcx() && a.mcx().target == b.mcx().target) {
    if (auto q = single_polarity_clash(a.mcx().controls, b.mcx().controls)) {
      a.mcx().controls = without_control(std::move(a.mcx().controls), *q);
      gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      return true;
    }
  }
  if (a.is_ry() && b.is_ry() && a.ry().target == b.ry().target &&
      a.ry().angle == b.ry().angle) {
    if (auto q = single_polarity_clash(a.ry().controls, b.ry().controls)) {
      a.ry().controls = without_control(std::move(a.ry().controls), *q);
      gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      return true;
    }
  }

  // X propagation: an uncontrolled X on q slides right through any gate
  // controlling on q by flipping that control, exposing new adjacencies.
  if (is_plain_x(a)) {
    const std::size_t q = a.mcx().target;
    if (control_on(b.controls(), q)) {
      Gate moved = b;
      for (ControlTerm& c : moved.controls())
        if (c.q == q) c.pol = c.pol == Polarity::Pos ? Polarity::Neg : Polarity::Pos;
      b = a;
      a = std::move(moved);
      return true;
    }
  }

  return false;
}

}  // namespace detail

// One local-rewrite sweep to fixpoint; returns the number of rewrites.
// Block bodies are reduced recursively, then treated as opaque units.
// Gates settle onto an output stack whose top pair is re-examined after
// every rewrite, which matches rescanning from the rewrite site leftward
// but keeps the pass linear in gates plus rewrites. X gates displaced
// rightward by propagation are parked and re-fed once the stack settles.
inline std::size_t reduce_pass(std::vector<Gate>& gates) {
  std::size_t rewrites = 0;
  for (Gate& g : gates)
    if (g.is_block()) rewrites += reduce_pass(g.block().body);

  std::vector<Gate> out;
  out.reserve(gates.size());
  std::vector<Gate> parked;
  std::size_t i = 0;
  while (!parked.empty() || i < gates.size()) {
    if (parked.empty()) {
      out.push_back(std::move(gates[i++]));
    } else {
      out.push_back(std::move(parked.back()));
      parked.pop_back();
    }
    while (out.size() >= 2) {
      const std::size_t before = out.size();
      if (!detail::rewrite_pair(out, out.size() - 2)) break;
      ++rewrites;
      if (out.size() == before) {
        parked.push_back(std::move(out.back()));
        out.pop_back();
      }
    }
  }
  gates = std::move(out);
  return rewrites;
}

namespace detail {

// Sort key: per-qubit control code from the highest qubit down (untouched
// 0, negative control 1, positive 2), then the target index. Gates with
// equal control patterns end up adjacent, which feeds the merge rules and
// the grouping pass; untouched-first keeps lightly controlled gates at run
// boundaries instead of threading them through unrelated runs.
inline void write_reorder_key(const Gate& g, std::size_t n_qubits,
                              std::uint8_t* key) {
  std::fill(key, key + n_qubits + 1, std::uint8_t{0});
  for (const ControlTerm& c : g.controls())
    key[n_qubits - 1 - c.q] = c.pol == Polarity::Neg ? 1 : 2;
  key[n_qubits] =
      static_cast<std::uint8_t>(g.target() ? *g.target() : n_qubits);
}

}  // namespace detail

// Deterministic bubble pass: adjacent gates swap when they commute and the
// right gate's key is strictly smaller. Reaches the same fixpoint, via the
// same swap sequence, as repeated full left-to-right sweeps: a pair can
// only become swappable when a neighbouring swap disturbs it, so sweeps
// after the first revisit just the disturbed neighbourhoods. Returns the
// number of swaps.
inline std::size_t reorder_pass(std::vector<Gate>& gates,
                                std::size_t n_qubits) {
  const std::size_t n = gates.size();
  if (n < 2) return 0;
  const std::size_t w = n_qubits + 1;
  std::vector<std::uint8_t> keys(n * w);
  for (std::size_t i = 0; i < n; ++i)
    detail::write_reorder_key(gates[i], n_qubits, keys.data() + i * w);

  std::size_t swaps = 0;
  std::vector<std::size_t> cur(n - 1);
  std::iota(cur.begin(), cur.end(), std::size_t{0});
  std::vector<std::size_t> nxt;
  const std::size_t none = n;
  while (!cur.empty()) {
    nxt.clear();
    std::size_t t = 0;
    std::size_t cascade = none;
    std::size_t last = none;
    while (cascade != none || t < cur.size()) {
      std::size_t i;
      if (cascade != none && (t >= cur.size() || cascade <= cur[t])) {
        i = cascade;
        cascade = none;
      } else {
        i = cur[t++];
      }
      if (i == last || i + 1 >= n) continue;
      last = i;
      if (std::memcmp(keys.data() + (i + 1) * w, keys.data() + i * w, w) < 0 &&
          commutes(gates[i], gates[i + 1])) {
        std::swap(gates[i], gates[i + 1]);
        std::swap_ranges(keys.begin() + static_cast<std::ptrdiff_t>(i * w),
                         keys.begin() + static_cast<std::ptrdiff_t>((i + 1) * w),
                         keys.begin() + static_cast<std::ptrdiff_t>((i + 1) * w));
        ++swaps;
        if (i > 0) nxt.push_back(i - 1);
        nxt.push_back(i);
        nxt.push_back(i + 1);
        cascade = i + 1;
      }
    }
    std::sort(nxt.begin(), nxt.end());
    nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
    cur.swap(nxt);
  }
  return swaps;
}

// Wraps maximal runs of >= 2 consecutive gates sharing a control term into
// a ControlledBlock carrying that term, stripping it from the members, and
// groups recursively inside the new block.
inline void group_pass(std::vector<Gate>& gates) {
  for (Gate& g : gates)
    if (g.is_block()) group_pass(g.block().body);

  std::vector<Gate> out;
  out.reserve(gates.size());
  std::size_t i = 0;
  while (i < gates.size()) {
    std::size_t best_len = 1;
    std::optional<ControlTerm> best_ct;
    for (const ControlTerm& ct : gates[i].controls()) {
      std::size_t len = 1;
      while (i + len < gates.size()) {
        const std::optional<Polarity> pol = control_on(gates[i + len].controls(), ct.q);
        if (!pol || *pol != ct.pol) break;
        ++len;
      }
      if (len > best_len) {
        best_len = len;
        best_ct = ct;
      }
    }
    if (!best_ct) {
      out.push_back(std::move(gates[i]));
      ++i;
      continue;
    }

    std::vector<Gate> body;
    body.reserve(best_len);
    for (std::size_t j = 0; j < best_len; ++j) {
      Gate member = std::move(gates[i + j]);
      member.controls() = detail::without_control(std::move(member.controls()),
                                                  best_ct->q);
      body.push_back(std::move(member));
    }
    group_pass(body);
    out.push_back(make_block({*best_ct}, std::move(body)));
    i += best_len;
  }
  gates = std::move(out);
}

struct OptimizeOptions {
  bool reorder = true;
  bool reduce = true;
  bool group = true;
  std::size_t max_rounds = 32;
};

struct OptimizeStats {
  std::size_t gates_before = 0;
  std::size_t gates_after = 0;
  std::size_t rounds = 0;
  std::size_t rewrites = 0;
};

struct OptimizeResult {
  Circuit circuit;
  OptimizeStats stats;
};

// Flattens, alternates canonical reordering with local rewrites until
// neither changes anything (or the round cap is hit), then regroups shared
// controls into blocks.
inline OptimizeResult optimize(const Circuit& c,
                               const OptimizeOptions& opts = {}) {
  OptimizeResult res;
  res.stats.gates_before = gate_count(c);
  res.circuit = flatten(c);

  while (res.stats.rounds < opts.max_rounds) {
    ++res.stats.rounds;
    std::size_t changed = 0;
    if (opts.reorder) changed += reorder_pass(res.circuit.gates, res.circuit.n_qubits);
    if (opts.reduce) {
      const std::size_t r = reduce_pass(res.circuit.gates);
      changed += r;
      res.stats.rewrites += r;
    }
    if (changed == 0) break;
  }
  if (opts.group) group_pass(res.circuit.gates);

  res.stats.gates_after = gate_count(res.circuit);
  return res;
}

}  // namespace bvnc
