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

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fullerkit {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

class UnsupportedOverlap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Placement of the copies of a cascade branch. Copy i (i ≥ 1) sits at
/// offsets [pos(i+1) + Δ_i·lo, pos(i+1) + Δ_i·hi] from the target, with
/// Δ_i = pos(i) − pos(i+1); pos(i) = scale/i (harmonic) or scale·ratio^(i−1).
struct CopyLayout {
  enum class Kind { Harmonic, Geometric };
  Kind kind = Kind::Harmonic;
  Rational scale{1};
  Rational ratio{1, 2};
  Rational lo{1, 2};
  Rational hi{1};

  Rational pos(std::int64_t i) const;
  /// Offset of child coordinate y ∈ [0,1] inside copy i.
  Rational offset(std::int64_t i, const Rational& y) const;
  /// Copy index and child coordinate of an offset, if it lies in a copy.
  std::optional<std::pair<std::int64_t, Rational>> locate(const Rational& offset) const;
  /// Copy index i with pos(i+1) < s ≤ pos(i); 0 if s > pos(1).
  std::int64_t slot(const Rational& s) const;
  void validate() const;
  bool operator==(const CopyLayout& o) const = default;
};

class CascadeSet;

struct Branch {
  int side = 1;  // +1: copies above the target, −1: below
  CopyLayout layout;
  std::shared_ptr<const CascadeSet> child;  // generic copy content, ⊂ [0,1]
  std::map<std::int64_t, CascadeSet> exceptions;
};

/// Exact finitely-described scattered subset of ℝ: a finite point set, a
/// cascade (target plus infinitely many scaled copies of a child accumulating
/// at it, with finitely many copies overridden), or a separated union.
class CascadeSet {
 public:
  struct Points {
    std::vector<Rational> pts;  // sorted, unique
  };
  struct Cascade {
    Rational target;
    bool has_target = true;
    std::vector<Branch> branches;  // at most one per side
  };
  struct Union {
    std::vector<CascadeSet> members;  // pairwise separated cascades
    std::vector<Rational> points;     // isolated from every member
  };

  CascadeSet();  // empty
  static CascadeSet points(std::vector<Rational> pts);
  static CascadeSet cascade(Rational target, bool has_target, std::vector<Branch> branches);
  /// Normalizing union; throws UnsupportedOverlap for configurations outside the model.
  static CascadeSet unite(const std::vector<CascadeSet>& parts);

  bool is_points() const;
  bool is_cascade() const;
  bool is_union() const;
  const Points& as_points() const;
  const Cascade& as_cascade() const;
  const Union& as_union() const;

  bool empty() const;
  bool contains(const Rational& x) const;
  /// Conservative closed hull of the closure, or nothing for the empty set.
  std::optional<std::pair<Rational, Rational>> hull() const;
  /// Image under x ↦ shift + scale·x (scale ≠ 0).
  CascadeSet affine(const Rational& shift, const Rational& scale) const;
  /// Structural size (number of nodes), for depth guards.
  int depth() const;

 private:
  using Node = std::variant<Points, Cascade, Union>;
  explicit CascadeSet(Node node);
  std::shared_ptr<const Node> node_;
};

/// Copy i of a branch as a set in absolute coordinates.
CascadeSet copy_content(const Rational& target, const Branch& b, std::int64_t i);
const CascadeSet& copy_child(const Branch& b, std::int64_t i);

CascadeSet derived(const CascadeSet& s);
/// S ∩ S′: the points of S that are not isolated.
CascadeSet core(const CascadeSet& s);
/// Σ_j for j = 0..order.
std::vector<CascadeSet> strata(const CascadeSet& s, int depth_bound = 64);
int fuller_order(const CascadeSet& s, int depth_bound = 64);
/// Order computed by iterating the derived-set operator (independent route).
int fuller_order_by_derivation(const CascadeSet& s, int depth_bound = 64);
CascadeSet difference(const CascadeSet& s, const CascadeSet& t);
CascadeSet difference_points(const CascadeSet& s, const std::vector<Rational>& pts);

/// Random set of exact Fuller order k inside [0,1].
CascadeSet make_cascade(int k, std::uint64_t seed, int depth_bound = 5);

/// Rational probe points near the structure (targets, copy endpoints, gaps).
std::vector<Rational> probe_points(const CascadeSet& s, int copies_per_branch = 3);

struct SampleStrata {
  std::vector<int> labels;
  int rounds = 0;
};

/// Single-scale ε peeling of a finite list of times.
SampleStrata sample_strata(const std::vector<double>& times, double eps);

}  // namespace fullerkit
