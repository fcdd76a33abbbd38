// Copyright 2026 The UlamLab Authors
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

/// \file groups.hpp
/// Finite groups as validated Cayley tables, and truncated balls in free
/// groups. Elements are dense indices 0..n-1.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ulamlab/errors.hpp"

namespace ulamlab {

using Element = std::size_t;

inline constexpr std::size_t kMaxGroupOrder = 4096;

class FiniteGroup {
 public:
  using Table = std::vector<std::vector<Element>>;

  std::size_t order() const { return inv_.size(); }
  Element identity() const { return identity_; }
  Element mul(Element a, Element b) const { return mul_[a * order() + b]; }
  Element inv(Element a) const { return inv_[a]; }
  const std::string& label() const { return label_; }

  Table table() const {
    Table t(order(), std::vector<Element>(order()));
    for (Element a = 0; a < order(); ++a)
      for (Element b = 0; b < order(); ++b) t[a][b] = mul(a, b);
    return t;
  }

  bool is_abelian() const {
    for (Element a = 0; a < order(); ++a)
      for (Element b = a + 1; b < order(); ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  /// True when the table is literally Z_n: mul(a, b) = (a + b) mod n.
  bool is_standard_cyclic() const {
    const std::size_t n = order();
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        if (mul(a, b) != (a + b) % n) return false;
    return true;
  }

  FiniteGroup relabeled(std::string label) const {
    FiniteGroup g = *this;
    g.label_ = std::move(label);
    return g;
  }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.mul_ == b.mul_;
  }

  /// Validates every group axiom, then derives the identity and inverses.
  static FiniteGroup from_table(const Table& mul, std::string label);

 private:
  friend FiniteGroup make_group_unchecked(std::size_t, std::vector<Element>, std::string);

  std::vector<Element> mul_;
  std::vector<Element> inv_;
  Element identity_ = 0;
  std::string label_;
};

namespace detail {

inline void check_order(std::size_t n, const char* what) {
  if (n < 1 || n > kMaxGroupOrder)
    throw ParameterError(std::string(what) + ": group order " + std::to_string(n) +
                         " outside [1, " + std::to_string(kMaxGroupOrder) + "]");
}

}  // namespace detail

/// Builds a group from a flat table known to be correct; derives identity and
/// inverses but skips the O(n^3) axiom checks.
inline FiniteGroup make_group_unchecked(std::size_t n, std::vector<Element> flat,
                                        std::string label) {
  FiniteGroup g;
  g.mul_ = std::move(flat);
  g.inv_.assign(n, 0);
  g.label_ = std::move(label);
  for (Element e = 0; e < n; ++e) {
    bool ok = true;
    for (Element a = 0; a < n && ok; ++a) ok = g.mul_[e * n + a] == a;
    if (ok) {
      g.identity_ = e;
      break;
    }
  }
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      if (g.mul_[a * n + b] == g.identity_) g.inv_[a] = b;
  return g;
}

inline FiniteGroup FiniteGroup::from_table(const Table& mul, std::string label) {
  const std::size_t n = mul.size();
  if (n == 0) throw NotAGroup(NotAGroup::Reason::kShape, "from_table: empty table");
  if (n > kMaxGroupOrder)
    throw ParameterError("from_table: order " + std::to_string(n) + " exceeds cap");
  std::vector<Element> flat(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    if (mul[a].size() != n)
      throw NotAGroup(NotAGroup::Reason::kShape,
                      "from_table: row " + std::to_string(a) + " has length " +
                          std::to_string(mul[a].size()) + ", expected " + std::to_string(n));
    for (std::size_t b = 0; b < n; ++b) {
      if (mul[a][b] >= n)
        throw NotAGroup(NotAGroup::Reason::kShape,
                        "from_table: entry (" + std::to_string(a) + "," + std::to_string(b) +
                            ") out of range");
      flat[a * n + b] = mul[a][b];
    }
  }
  std::vector<char> seen(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t b = 0; b < n; ++b) {
      if (seen[flat[a * n + b]])
        throw NotAGroup(NotAGroup::Reason::kLatin,
                        "from_table: row " + std::to_string(a) + " repeats " +
                            std::to_string(flat[a * n + b]));
      seen[flat[a * n + b]] = 1;
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t a = 0; a < n; ++a) {
      if (seen[flat[a * n + b]])
        throw NotAGroup(NotAGroup::Reason::kLatin,
                        "from_table: column " + std::to_string(b) + " repeats " +
                            std::to_string(flat[a * n + b]));
      seen[flat[a * n + b]] = 1;
    }
  }
  bool found = false;
  for (Element e = 0; e < n && !found; ++e) {
    bool left = true, right = true;
    for (Element a = 0; a < n && (left || right); ++a) {
      left = left && flat[e * n + a] == a;
      right = right && flat[a * n + e] == a;
    }
    found = left && right;
  }
  if (!found) throw NotAGroup(NotAGroup::Reason::kIdentity, "from_table: no two-sided identity");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (flat[flat[a * n + b] * n + c] != flat[a * n + flat[b * n + c]])
          throw NotAGroup(NotAGroup::Reason::kAssociativity,
                          "from_table: associativity fails at (" + std::to_string(a) + "," +
                              std::to_string(b) + "," + std::to_string(c) + ")");
  // Latin square + identity: every row contains the identity, so inverses exist.
  return make_group_unchecked(n, std::move(flat), std::move(label));
}

inline FiniteGroup cyclic(std::size_t n) {
  detail::check_order(n, "cyclic");
  std::vector<Element> flat(n * n);
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) flat[a * n + b] = (a + b) % n;
  return make_group_unchecked(n, std::move(flat), "cyclic:" + std::to_string(n));
}

/// Dihedral group of order 2n. Index k < n is r^k, index n + k is s r^k.
inline FiniteGroup dihedral(std::size_t n) {
  if (n < 2 || n > 512)
    throw ParameterError("dihedral: n = " + std::to_string(n) + " outside [2, 512]");
  const std::size_t order = 2 * n;
  std::vector<Element> flat(order * order);
  for (Element x = 0; x < order; ++x) {
    for (Element y = 0; y < order; ++y) {
      const bool xs = x >= n, ys = y >= n;
      const std::size_t a = x % n, b = y % n;
      // r^a r^b = r^(a+b); r^a s r^b = s r^(b-a); s r^a r^b = s r^(a+b);
      // s r^a s r^b = r^(b-a).
      const std::size_t sum = (a + b) % n, diff = (b + n - a) % n;
      Element z;
      if (!xs && !ys)
        z = sum;
      else if (!xs && ys)
        z = n + diff;
      else if (xs && !ys)
        z = n + sum;
      else
        z = diff;
      flat[x * order + y] = z;
    }
  }
  return make_group_unchecked(order, std::move(flat), "dihedral:" + std::to_string(n));
}

/// S_n with elements in lexicographic order of their one-line notation and
/// mul(a, b) = a o b, i.e. (a o b)(i) = a(b(i)).
inline FiniteGroup symmetric(std::size_t n) {
  if (n < 1 || n > 6)
    throw ParameterError("symmetric: n = " + std::to_string(n) + " outside [1, 6]");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<std::size_t>, Element> index;
  for (Element i = 0; i < perms.size(); ++i) index.emplace(perms[i], i);
  const std::size_t order = perms.size();
  std::vector<Element> flat(order * order);
  std::vector<std::size_t> c(n);
  for (Element a = 0; a < order; ++a)
    for (Element b = 0; b < order; ++b) {
      for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
      flat[a * order + b] = index.at(c);
    }
  return make_group_unchecked(order, std::move(flat), "symmetric:" + std::to_string(n));
}

/// G x H with (g, h) encoded as g * |H| + h.
inline FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const std::size_t ng = g.order(), nh = h.order();
  if (ng * nh > kMaxGroupOrder)
    throw ParameterError("direct_product: order " + std::to_string(ng * nh) + " exceeds cap " +
                         std::to_string(kMaxGroupOrder));
  const std::size_t n = ng * nh;
  std::vector<Element> flat(n * n);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      flat[x * n + y] = g.mul(x / nh, y / nh) * nh + h.mul(x % nh, y % nh);
  return make_group_unchecked(n, std::move(flat), "product:" + g.label() + "," + h.label());
}

/// Order of `a` by repeated multiplication.
inline std::size_t element_order(const FiniteGroup& g, Element a) {
  std::size_t k = 1;
  for (Element x = a; x != g.identity(); x = g.mul(x, a)) ++k;
  return k;
}

// ---------------------------------------------------------------------------
// Free-group balls

/// Letter 2g is generator g, letter 2g+1 its inverse.
using Letter = unsigned char;
using Word = std::vector<Letter>;

inline constexpr Letter inverse_letter(Letter l) { return static_cast<Letter>(l ^ 1u); }

/// Free reduction of a word.
inline Word reduce_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    if (!out.empty() && out.back() == inverse_letter(l))
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

inline bool is_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == inverse_letter(w[i - 1])) return false;
  return true;
}

inline Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (Letter& l : out) l = inverse_letter(l);
  return out;
}

inline constexpr std::size_t kMaxBallWords = 20000;

/// Reduced words of length <= radius in the free group of the given rank,
/// with multiplication recorded only for pairs whose product stays inside.
class FreeBall {
 public:
  struct Pair {
    Element x;
    Element y;
    Element xy;
  };

  static FreeBall make(std::size_t rank, std::size_t radius) {
    if (rank != 2 && rank != 3)
      throw ParameterError("free_ball: rank must be 2 or 3, got " + std::to_string(rank));
    if (radius < 1) throw ParameterError("free_ball: radius must be >= 1");
    // |ball| = 1 + 2r((2r-1)^R - 1)/(2r-2); check before enumerating.
    std::size_t size = 1, layer = 2 * rank;
    for (std::size_t len = 1; len <= radius; ++len) {
      size += layer;
      if (size > kMaxBallWords)
        throw ParameterError("free_ball: ball exceeds " + std::to_string(kMaxBallWords) +
                             " words");
      layer *= 2 * rank - 1;
    }
    FreeBall b;
    b.rank_ = rank;
    b.radius_ = radius;
    b.words_.push_back({});
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= radius; ++len) {
      const std::size_t end = b.words_.size();
      for (std::size_t i = begin; i < end; ++i) {
        for (Letter l = 0; l < 2 * rank; ++l) {
          const Word& w = b.words_[i];
          if (!w.empty() && w.back() == inverse_letter(l)) continue;
          Word next = w;
          next.push_back(l);
          b.words_.push_back(std::move(next));
        }
      }
      begin = end;
    }
    for (Element i = 0; i < b.words_.size(); ++i) b.index_.emplace(b.words_[i], i);
    b.inv_.resize(b.words_.size());
    for (Element i = 0; i < b.words_.size(); ++i)
      b.inv_[i] = b.index_.at(inverse_word(b.words_[i]));
    b.build_pairs();
    return b;
  }

  std::size_t rank() const { return rank_; }
  std::size_t radius() const { return radius_; }
  std::size_t size() const { return words_.size(); }
  Element identity() const { return 0; }
  Element inv(Element a) const { return inv_[a]; }
  const Word& word(Element a) const { return words_[a]; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  std::string label() const {
    return "freeball:" + std::to_string(rank_) + ":" + std::to_string(radius_);
  }

  /// Index of a reduced word, or size() if it lies outside the ball.
  Element find(const Word& w) const {
    auto it = index_.find(w);
    return it == index_.end() ? size() : it->second;
  }

  /// Product index, or size() if the product leaves the ball.
  Element mul(Element x, Element y) const {
    const Word& a = words_[x];
    const Word& b = words_[y];
    std::size_t c = 0;
    while (c < a.size() && c < b.size() && a[a.size() - 1 - c] == inverse_letter(b[c])) ++c;
    if (a.size() + b.size() - 2 * c > radius_) return size();
    Word w(a.begin(), a.end() - static_cast<std::ptrdiff_t>(c));
    w.insert(w.end(), b.begin() + static_cast<std::ptrdiff_t>(c), b.end());
    return find(w);
  }

 private:
  void build_pairs() {
    const std::size_t n = words_.size();
    for (Element x = 0; x < n; ++x) {
      const std::size_t lx = words_[x].size();
      for (Element y = 0; y < n; ++y) {
        const std::size_t ly = words_[y].size();
        // Even full cancellation of the shorter word leaves |lx - ly| letters.
        if ((lx > ly ? lx - ly : ly - lx) > radius_) continue;
        const Element xy = mul(x, y);
        if (xy != n) pairs_.push_back({x, y, xy});
      }
    }
  }

  std::size_t rank_ = 2;
  std::size_t radius_ = 1;
  std::vector<Word> words_;
  std::map<Word, Element> index_;
  std::vector<Element> inv_;
  std::vector<Pair> pairs_;
};

inline FreeBall free_ball(std::size_t rank, std::size_t radius) {
  return FreeBall::make(rank, radius);
}

}  // namespace ulamlab
