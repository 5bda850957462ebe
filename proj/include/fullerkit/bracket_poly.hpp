/*
 * Copyright 2026 The fullerkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "fullerkit/vecfield.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fullerkit {

/// Packed generator key. A bracket generator h_D stores the normalized word D;
/// an opaque generator ad_{w1}∘…∘ad_{wk}(X_s) stores the symbol s and the ad-word w.
/// Words hold at most 17 indices from {0,…,7}.
using GenKey = std::uint64_t;

struct GenInfo {
  bool opaque = false;
  int symbol = -1;
  MultiIndex word;
};

inline constexpr std::size_t kMaxWordLength = 17;

GenKey encode_bracket(const MultiIndex& D);
GenKey encode_opaque(int symbol, const MultiIndex& word);
GenInfo decode(GenKey key);
std::string gen_name(GenKey key);

/// Canonical form of h_D: h_{…ij} with i>j becomes −h_{…ji}, h_{…ii} vanishes.
std::optional<std::pair<GenKey, double>> normalize_bracket(const MultiIndex& D);

struct SymbolicOptions {
  std::size_t term_budget = 1'000'000;
  /// Optional oracle marking words D with f_D ≡ 0 for a fixed system.
  std::function<bool(const MultiIndex&)> vanishes;
};

/// Real polynomial in Hamiltonian generators.
class BracketPoly {
 public:
  using Term = std::vector<std::pair<GenKey, int>>;  // sorted by key, exponents ≥ 1

  BracketPoly() = default;
  static BracketPoly constant(double c);
  static BracketPoly h(const MultiIndex& D, double c = 1.0);
  static BracketPoly h(const MultiIndex& D, const SymbolicOptions& opts);
  static BracketPoly opaque(int symbol, const MultiIndex& word = {});
  static BracketPoly monomial(const Term& t, double c);

  const std::map<Term, double>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  void add(const Term& t, double c);
  BracketPoly& operator+=(const BracketPoly& o);
  BracketPoly& operator-=(const BracketPoly& o);
  BracketPoly operator+(const BracketPoly& o) const;
  BracketPoly operator-(const BracketPoly& o) const;
  BracketPoly operator-() const;
  BracketPoly operator*(const BracketPoly& o) const;
  BracketPoly operator*(double s) const;
  bool operator==(const BracketPoly& o) const = default;

  /// True if some monomial contains generator `key`.
  bool contains_generator(GenKey key) const;
  std::vector<GenKey> generators() const;
  std::string to_string() const;

 private:
  std::map<Term, double> terms_;
};

/// Throws BudgetExceeded if `p` has more terms than allowed.
void enforce_budget(const BracketPoly& p, const SymbolicOptions& opts, const char* what);

/// Determinant of a polynomial matrix; throws BudgetExceeded as soon as an
/// intermediate minor or a pending product outgrows the term budget.
BracketPoly budgeted_determinant(const std::vector<std::vector<BracketPoly>>& a,
                                 const SymbolicOptions& opts, const char* what);

/// {h_i, ·}: a derivation with {h_i, h_D} = h_{iD}.
BracketPoly poisson_ad(int i, const BracketPoly& p, const SymbolicOptions& opts = {});

/// ad_{w1}∘…∘ad_{wk}(p).
BracketPoly ad_word(const MultiIndex& word, const BracketPoly& p, const SymbolicOptions& opts = {});

/// Flat definitions for opaque symbols, with memoized ad-word expansions.
/// Not thread-safe.
class OpaqueDefinitions {
 public:
  explicit OpaqueDefinitions(SymbolicOptions opts = {}) : opts_(std::move(opts)) {}
  void define(int symbol, BracketPoly flat);
  bool defined(int symbol) const { return defs_.count(symbol) > 0; }
  const BracketPoly& expand(GenKey opaque_key);
  BracketPoly flatten(const BracketPoly& p);

 private:
  SymbolicOptions opts_;
  std::map<int, BracketPoly> defs_;
  std::map<GenKey, BracketPoly> expansions_;
};

/// Substitutes generator values; `value(key)` is queried once per distinct key.
double evaluate_poly(const BracketPoly& p, const std::function<double(GenKey)>& value);

}  // namespace fullerkit
