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
#include <sstream>
#include <string>
#include <vector>

#include "bvnc/errors.hpp"
#include "bvnc/matrix.hpp"

namespace bvnc {

// Bijection on {0..N-1} in one-line notation: position j stores the image
// p(j). Conventions fixed once for the whole library:
//   - compose(t, s) applies s first: i -> t(s(i)).
//   - matrix_of(p) acts on basis columns: M e_j = e_{p(j)}.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
    std::vector<bool> seen(map_.size(), false);
    for (std::size_t v : map_) {
      if (v >= map_.size())
        throw RangeError("Permutation: image element out of range");
      if (seen[v])
        throw DomainError("Permutation: map is not a bijection on {0..N-1}");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = i;
    return Permutation(std::move(m));
  }

  std::size_t size() const { return map_.size(); }
  std::size_t operator()(std::size_t i) const { return map_[i]; }
  const std::vector<std::size_t>& map() const { return map_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < map_.size(); ++i)
      if (map_[i] != i) return false;
    return true;
  }

  bool operator==(const Permutation& other) const {
    return map_ == other.map_;
  }

 private:
  std::vector<std::size_t> map_;
};

// Cyclic orbit (a_0 ... a_m), length >= 2, stored in canonical rotation:
// smallest element first, so (0 1 2), (1 2 0) and (2 0 1) compare equal.
class Cycle {
 public:
  explicit Cycle(std::vector<std::size_t> elements)
      : elements_(std::move(elements)) {
    if (elements_.size() < 2)
      throw DomainError("Cycle: needs at least two elements");
    auto smallest = std::min_element(elements_.begin(), elements_.end());
    std::rotate(elements_.begin(), smallest, elements_.end());
    std::vector<std::size_t> sorted = elements_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw DomainError("Cycle: elements must be pairwise distinct");
  }

  const std::vector<std::size_t>& elements() const { return elements_; }
  std::size_t length() const { return elements_.size(); }

  bool operator==(const Cycle& other) const {
    return elements_ == other.elements_;
  }

 private:
  std::vector<std::size_t> elements_;
};

// 2-cycle, stored with a < b.
struct Transposition {
  std::size_t a;
  std::size_t b;

  Transposition(std::size_t x, std::size_t y)
      : a(std::min(x, y)), b(std::max(x, y)) {
    if (x == y) throw DomainError("Transposition: elements must differ");
  }

  bool operator==(const Transposition& other) const {
    return a == other.a && b == other.b;
  }
};

enum class TranspositionScheme {
  // (a0 ... am) = (a0 a1)(a1 a2)...(a_{m-1} am), applied right to left.
  Chain,
  // (a0 ... am) = (a0 am)(a0 a_{m-1})...(a0 a1), applied right to left.
  Star,
};

// t o s: apply s first, then t.
inline Permutation compose(const Permutation& t, const Permutation& s) {
  if (t.size() != s.size())
    throw DimensionError("compose: permutation lengths differ");
  std::vector<std::size_t> m(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) m[i] = t(s(i));
  return Permutation(std::move(m));
}

inline Permutation inverse(const Permutation& p) {
  std::vector<std::size_t> m(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m[p(i)] = i;
  return Permutation(std::move(m));
}

// Disjoint cycles covering all non-fixed points, each in canonical
// rotation, sorted by smallest element. Fixed points are omitted.
inline std::vector<Cycle> to_cycles(const Permutation& p) {
  std::vector<Cycle> cycles;
  std::vector<bool> visited(p.size(), false);
  for (std::size_t start = 0; start < p.size(); ++start) {
    if (visited[start] || p(start) == start) continue;
    std::vector<std::size_t> orbit;
    std::size_t j = start;
    while (!visited[j]) {
      visited[j] = true;
      orbit.push_back(j);
      j = p(j);
    }
    cycles.emplace_back(std::move(orbit));
  }
  return cycles;
}

// The unique permutation of length n acting as each (disjoint) cycle on its
// elements and fixing everything else.
inline Permutation from_cycles(const std::vector<Cycle>& cycles,
                               std::size_t n) {
  std::vector<std::size_t> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = i;
  std::vector<bool> used(n, false);
  for (const Cycle& c : cycles) {
    const auto& e = c.elements();
    for (std::size_t v : e) {
      if (v >= n) throw RangeError("from_cycles: element out of range");
      if (used[v]) throw DomainError("from_cycles: cycles overlap");
      used[v] = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i)
      m[e[i]] = e[(i + 1) % e.size()];
  }
  return Permutation(std::move(m));
}

// Product of m transpositions equal to the (m+1)-cycle; the list is in
// product order, i.e. the LAST list element is applied first.
inline std::vector<Transposition> cycle_to_transpositions(
    const Cycle& c, TranspositionScheme scheme) {
  const auto& e = c.elements();
  std::vector<Transposition> out;
  out.reserve(e.size() - 1);
  switch (scheme) {
    case TranspositionScheme::Chain:
      for (std::size_t i = 0; i + 1 < e.size(); ++i)
        out.emplace_back(e[i], e[i + 1]);
      break;
    case TranspositionScheme::Star:
      for (std::size_t i = e.size() - 1; i >= 1; --i)
        out.emplace_back(e[0], e[i]);
      break;
  }
  return out;
}

// Column-action permutation matrix: M[i][j] = 1 iff i = p(j), so that
// M e_j = e_{p(j)}. Orthogonal by construction.
inline DenseMatrix matrix_of(const Permutation& p) {
  DenseMatrix m(p.size(), p.size());
  for (std::size_t j = 0; j < p.size(); ++j) m(p(j), j) = 1.0;
  return m;
}

// "(0 1 2)(4 5)" style; fixed points omitted, identity prints as "()".
inline std::string format_cycles(const Permutation& p) {
  const std::vector<Cycle> cycles = to_cycles(p);
  if (cycles.empty()) return "()";
  std::ostringstream out;
  for (const Cycle& c : cycles) {
    out << '(';
    const auto& e = c.elements();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i) out << ' ';
      out << e[i];
    }
    out << ')';
  }
  return out.str();
}

// Parses "(0 1 2)(3)" style cycle notation; singleton groups are accepted
// and ignored. `n` fixes the permutation length; pass 0 to infer
// max element + 1. Elements must be whitespace-separated decimal integers,
// which keeps multi-digit elements unambiguous.
inline Permutation parse_cycles(const std::string& text, std::size_t n = 0) {
  std::vector<Cycle> cycles;
  std::size_t max_elem = 0;
  bool any_elem = false;
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(') throw DomainError("parse_cycles: expected '('");
    ++i;
    std::vector<std::size_t> elems;
    skip_ws();
    while (i < text.size() && text[i] != ')') {
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw DomainError("parse_cycles: expected element or ')'");
      std::size_t v = 0;
      while (i < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + static_cast<std::size_t>(text[i] - '0');
        ++i;
      }
      elems.push_back(v);
      max_elem = std::max(max_elem, v);
      any_elem = true;
      skip_ws();
    }
    if (i >= text.size()) throw DomainError("parse_cycles: missing ')'");
    ++i;  // consume ')'
    if (elems.size() >= 2) cycles.emplace_back(std::move(elems));
    skip_ws();
  }
  if (n == 0) n = any_elem ? max_elem + 1 : 0;
  return from_cycles(cycles, n);
}

}  // namespace bvnc
