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

#include "fullerkit/fuller.hpp"

#include "fullerkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace fullerkit {


namespace {

// Decimal only: GMP's base autodetection would read "0125" as octal.
Integer parse_decimal_integer(const std::string& text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
  if (i == text.size()) throw ValidationError("missing digits");
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') throw ValidationError("non-decimal digit");
  }
  while (i + 1 < text.size() && text[i] == '0') ++i;
  Integer v(text.substr(i));
  return negative ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      const auto dot = text.find('.');
      if (dot == std::string::npos) return Rational(parse_decimal_integer(text));
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      Integer den = 1;
      for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
      return Rational(parse_decimal_integer(digits), den);
    }
    const Integer num = parse_decimal_integer(text.substr(0, slash));
    const Integer den = parse_decimal_integer(text.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse rational '" + text + "'");
  }
}

std::string format_rational(const Rational& r) {
  const Integer num = numerator(r);
  const Integer den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

Integer floor_div(const Rational& x) {
  const Integer num = numerator(x);
  const Integer den = denominator(x);
  Integer q = num / den;
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

constexpr std::int64_t kMaxGeometricSlot = 100000;

}  // namespace

Rational CopyLayout::pos(std::int64_t i) const {
  if (kind == Kind::Harmonic) return scale / Rational(i);
  Rational p = scale;
  for (std::int64_t k = 1; k < i; ++k) p *= ratio;
  return p;
}

Rational CopyLayout::offset(std::int64_t i, const Rational& y) const {
  const Rational below = pos(i + 1);
  const Rational delta = pos(i) - below;
  return below + delta * (lo + (hi - lo) * y);
}

std::int64_t CopyLayout::slot(const Rational& s) const {
  if (s <= 0) throw ValidationError("slot() needs a positive offset");
  if (s > scale) return 0;
  if (kind == Kind::Harmonic) {
    const Integer i = floor_div(scale / s);
    if (i > Integer(std::numeric_limits<std::int64_t>::max() / 2)) {
      throw BudgetExceeded("offset too close to the target");
    }
    return static_cast<std::int64_t>(i);
  }
  std::int64_t i = 1;
  Rational next = scale * ratio;
  while (next >= s) {
    next *= ratio;
    if (++i > kMaxGeometricSlot) throw BudgetExceeded("offset too close to the target");
  }
  return i;
}

std::optional<std::pair<std::int64_t, Rational>> CopyLayout::locate(const Rational& s) const {
  if (s <= 0) return std::nullopt;
  const std::int64_t i = slot(s);
  if (i == 0) return std::nullopt;
  const Rational below = pos(i + 1);
  const Rational rel = (s - below) / (pos(i) - below);
  if (rel < lo || rel > hi) return std::nullopt;
  return std::make_pair(i, (rel - lo) / (hi - lo));
}

void CopyLayout::validate() const {
  if (scale <= 0) throw ValidationError("layout scale must be positive");
  if (kind == Kind::Geometric && (ratio <= 0 || ratio >= 1)) {
    throw ValidationError("geometric ratio must lie in (0,1)");
  }
  if (!(lo > 0 && lo < hi && hi <= 1)) throw ValidationError("layout needs 0 < lo < hi <= 1");
}

CascadeSet::CascadeSet() : node_(std::make_shared<const Node>(Points{})) {}
CascadeSet::CascadeSet(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

CascadeSet CascadeSet::points(std::vector<Rational> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return CascadeSet(Node(Points{std::move(pts)}));
}

CascadeSet CascadeSet::cascade(Rational target, bool has_target, std::vector<Branch> branches) {
  bool sides[2] = {false, false};
  for (const Branch& b : branches) {
    if (b.side != 1 && b.side != -1) throw ValidationError("branch side must be +1 or -1");
    bool& seen = sides[b.side > 0 ? 1 : 0];
    if (seen) throw ValidationError("two branches on the same side");
    seen = true;
    b.layout.validate();
    if (!b.child) throw ValidationError("branch without child");
    auto check_unit = [](const CascadeSet& c) {
      if (auto h = c.hull(); h && (h->first < 0 || h->second > 1)) {
        throw ValidationError("copy content must lie in [0,1]");
      }
    };
    check_unit(*b.child);
    for (const auto& [i, c] : b.exceptions) {
      if (i < 1) throw ValidationError("exception index must be >= 1");
      check_unit(c);
    }
  }
  std::sort(branches.begin(), branches.end(),
            [](const Branch& a, const Branch& b) { return a.side < b.side; });
  return CascadeSet(Node(Cascade{std::move(target), has_target, std::move(branches)}));
}

bool CascadeSet::is_points() const { return std::holds_alternative<Points>(*node_); }
bool CascadeSet::is_cascade() const { return std::holds_alternative<Cascade>(*node_); }
bool CascadeSet::is_union() const { return std::holds_alternative<Union>(*node_); }
const CascadeSet::Points& CascadeSet::as_points() const { return std::get<Points>(*node_); }
const CascadeSet::Cascade& CascadeSet::as_cascade() const { return std::get<Cascade>(*node_); }
const CascadeSet::Union& CascadeSet::as_union() const { return std::get<Union>(*node_); }

const CascadeSet& copy_child(const Branch& b, std::int64_t i) {
  if (auto it = b.exceptions.find(i); it != b.exceptions.end()) return it->second;
  return *b.child;
}

namespace {

// Absolute coordinate x = A + B·z of child coordinate z in copy i.
std::pair<Rational, Rational> copy_map(const Rational& t, const Branch& b, std::int64_t i) {
  const Rational below = b.layout.pos(i + 1);
  const Rational delta = b.layout.pos(i) - below;
  const Rational A = t + Rational(b.side) * (below + delta * b.layout.lo);
  const Rational B = Rational(b.side) * delta * (b.layout.hi - b.layout.lo);
  return {A, B};
}

const Branch* branch_on(const CascadeSet::Cascade& c, int side) {
  for (const Branch& b : c.branches) {
    if (b.side == side) return &b;
  }
  return nullptr;
}

}  // namespace

CascadeSet copy_content(const Rational& target, const Branch& b, std::int64_t i) {
  const auto [A, B] = copy_map(target, b, i);
  return copy_child(b, i).affine(A, B);
}

bool CascadeSet::empty() const {
  if (is_points()) return as_points().pts.empty();
  if (is_union()) {
    const Union& u = as_union();
    return u.points.empty() &&
           std::all_of(u.members.begin(), u.members.end(), [](const CascadeSet& m) { return m.empty(); });
  }
  const Cascade& c = as_cascade();
  if (c.has_target) return false;
  for (const Branch& b : c.branches) {
    if (!b.child->empty()) return false;
    for (const auto& [i, e] : b.exceptions) {
      if (!e.empty()) return false;
    }
  }
  return true;
}

bool CascadeSet::contains(const Rational& x) const {
  if (is_points()) {
    const auto& p = as_points().pts;
    return std::binary_search(p.begin(), p.end(), x);
  }
  if (is_union()) {
    const Union& u = as_union();
    if (std::binary_search(u.points.begin(), u.points.end(), x)) return true;
    return std::any_of(u.members.begin(), u.members.end(), [&](const CascadeSet& m) { return m.contains(x); });
  }
  const Cascade& c = as_cascade();
  if (x == c.target) return c.has_target;
  const int side = x > c.target ? 1 : -1;
  const Branch* b = branch_on(c, side);
  if (b == nullptr) return false;
  const Rational s = Rational(side) * (x - c.target);
  const auto loc = b->layout.locate(s);
  if (!loc) return false;
  return copy_child(*b, loc->first).contains(loc->second);
}

std::optional<std::pair<Rational, Rational>> CascadeSet::hull() const {
  if (empty()) return std::nullopt;
  if (is_points()) return std::make_pair(as_points().pts.front(), as_points().pts.back());
  if (is_union()) {
    std::optional<std::pair<Rational, Rational>> h;
    auto grow = [&](const Rational& a, const Rational& b) {
      if (!h) {
        h = std::make_pair(a, b);
      } else {
        h->first = std::min(h->first, a);
        h->second = std::max(h->second, b);
      }
    };
    for (const auto& p : as_union().points) grow(p, p);
    for (const auto& m : as_union().members) {
      if (auto mh = m.hull()) grow(mh->first, mh->second);
    }
    return h;
  }
  const Cascade& c = as_cascade();
  Rational lo = c.target, hi = c.target;
  for (const Branch& b : c.branches) {
    const Rational reach = b.layout.offset(1, Rational(1));
    if (b.side > 0) {
      hi = c.target + reach;
    } else {
      lo = c.target - reach;
    }
  }
  return std::make_pair(lo, hi);
}

CascadeSet CascadeSet::affine(const Rational& shift, const Rational& scale) const {
  if (scale == 0) throw ValidationError("affine map needs a nonzero scale");
  if (is_points()) {
    std::vector<Rational> pts;
    for (const auto& p : as_points().pts) pts.push_back(shift + scale * p);
    return points(std::move(pts));
  }
  if (is_union()) {
    Union u;
    for (const auto& m : as_union().members) u.members.push_back(m.affine(shift, scale));
    for (const auto& p : as_union().points) u.points.push_back(shift + scale * p);
    std::sort(u.points.begin(), u.points.end());
    std::sort(u.members.begin(), u.members.end(), [](const CascadeSet& a, const CascadeSet& b) {
      return a.hull()->first < b.hull()->first;
    });
    return CascadeSet(Node(std::move(u)));
  }
  const Cascade& c = as_cascade();
  const int flip = scale > 0 ? 1 : -1;
  const Rational mag = scale > 0 ? scale : Rational(-scale);
  std::vector<Branch> branches;
  for (const Branch& b : c.branches) {
    Branch nb = b;
    nb.side = b.side * flip;
    nb.layout.scale = b.layout.scale * mag;
    branches.push_back(std::move(nb));
  }
  return cascade(shift + scale * c.target, c.has_target, std::move(branches));
}

int CascadeSet::depth() const {
  if (is_points()) return 1;
  int d = 0;
  if (is_union()) {
    for (const auto& m : as_union().members) d = std::max(d, m.depth());
    return d + 1;
  }
  for (const Branch& b : as_cascade().branches) {
    d = std::max(d, b.child->depth());
    for (const auto& [i, e] : b.exceptions) d = std::max(d, e.depth());
  }
  return d + 1;
}

namespace {

enum class Relation { Disjoint, InGap, InCopy, SameTarget, Overlap };

struct Placement {
  Relation rel = Relation::Overlap;
  const Branch* branch = nullptr;
  std::int64_t index = 0;
};

// Region of a positive offset: copy index (>0) or gap below copy g (encoded −g; gap 0 is above copy 1).
std::pair<bool, std::int64_t> region(const CopyLayout& L, const Rational& s) {
  const std::int64_t i = L.slot(s);
  if (i == 0) return {false, 0};
  const Rational below = L.pos(i + 1);
  const Rational rel = (s - below) / (L.pos(i) - below);
  if (rel < L.lo) return {false, i};   // between copy i+1 and copy i
  if (rel > L.hi) return {false, i - 1};  // between copy i and copy i−1
  return {true, i};
}

// Where does `t` sit relative to the cascade `s`?
Placement place(const CascadeSet& s, const CascadeSet& t) {
  Placement out;
  const auto hs = s.hull();
  const auto ht = t.hull();
  if (!hs || !ht || ht->second < hs->first || ht->first > hs->second) {
    out.rel = Relation::Disjoint;
    return out;
  }
  if (!s.is_cascade()) return out;
  const auto& c = s.as_cascade();
  if (ht->first <= c.target && ht->second >= c.target) {
    if (t.is_cascade() && t.as_cascade().target == c.target) out.rel = Relation::SameTarget;
    return out;
  }
  const int side = ht->first > c.target ? 1 : -1;
  const Branch* b = branch_on(c, side);
  if (b == nullptr) {
    out.rel = Relation::InGap;
    return out;
  }
  Rational sa = Rational(side) * (ht->first - c.target);
  Rational sb = Rational(side) * (ht->second - c.target);
  if (sa > sb) std::swap(sa, sb);
  const auto ra = region(b->layout, sa);
  const auto rb = region(b->layout, sb);
  if (ra == rb) {
    out.rel = ra.first ? Relation::InCopy : Relation::InGap;
    out.branch = b;
    out.index = ra.second;
  }
  return out;
}

CascadeSet with_exception(const CascadeSet& s, const Branch* target_branch, std::int64_t i,
                          CascadeSet content) {
  const auto& c = s.as_cascade();
  std::vector<Branch> branches = c.branches;
  for (Branch& b : branches) {
    if (b.side == target_branch->side) b.exceptions[i] = std::move(content);
  }
  return CascadeSet::cascade(c.target, c.has_target, std::move(branches));
}

CascadeSet to_child_coords(const CascadeSet& x, const Rational& target, const Branch& b,
                           std::int64_t i) {
  const auto [A, B] = copy_map(target, b, i);
  return x.affine(-A / B, Rational(1) / B);
}

CascadeSet merge_same_target(const CascadeSet& a, const CascadeSet& b) {
  const auto& ca = a.as_cascade();
  const auto& cb = b.as_cascade();
  std::vector<Branch> branches;
  for (int side : {-1, 1}) {
    const Branch* ba = branch_on(ca, side);
    const Branch* bb = branch_on(cb, side);
    if (ba && bb) {
      if (!(ba->layout == bb->layout)) {
        throw UnsupportedOverlap("branches accumulating at the same target with different layouts");
      }
      Branch m = *ba;
      m.child = std::make_shared<const CascadeSet>(CascadeSet::unite({*ba->child, *bb->child}));
      std::set<std::int64_t> keys;
      for (const auto& [i, e] : ba->exceptions) keys.insert(i);
      for (const auto& [i, e] : bb->exceptions) keys.insert(i);
      m.exceptions.clear();
      for (std::int64_t i : keys) m.exceptions[i] = CascadeSet::unite({copy_child(*ba, i), copy_child(*bb, i)});
      branches.push_back(std::move(m));
    } else if (ba) {
      branches.push_back(*ba);
    } else if (bb) {
      branches.push_back(*bb);
    }
  }
  return CascadeSet::cascade(ca.target, ca.has_target || cb.has_target, std::move(branches));
}

// Inserts a point into a cascade if it lands on its target or inside a copy.
std::optional<CascadeSet> absorb_point(const CascadeSet& s, const Rational& p) {
  const auto& c = s.as_cascade();
  if (p == c.target) {
    if (c.has_target) return s;
    return CascadeSet::cascade(c.target, true, c.branches);
  }
  const int side = p > c.target ? 1 : -1;
  const Branch* b = branch_on(c, side);
  if (b == nullptr) return std::nullopt;
  const auto loc = b->layout.locate(Rational(side) * (p - c.target));
  if (!loc) return std::nullopt;
  const CascadeSet content = CascadeSet::unite({copy_child(*b, loc->first), CascadeSet::points({loc->second})});
  return with_exception(s, b, loc->first, content);
}

}  // namespace

CascadeSet CascadeSet::unite(const std::vector<CascadeSet>& parts) {
  std::vector<CascadeSet> pending;
  std::set<Rational> pts;
  std::vector<CascadeSet> stack(parts.rbegin(), parts.rend());
  while (!stack.empty()) {
    CascadeSet x = std::move(stack.back());
    stack.pop_back();
    if (x.empty()) continue;
    if (x.is_points()) {
      pts.insert(x.as_points().pts.begin(), x.as_points().pts.end());
    } else if (x.is_union()) {
      pts.insert(x.as_union().points.begin(), x.as_union().points.end());
      for (auto it = x.as_union().members.rbegin(); it != x.as_union().members.rend(); ++it) stack.push_back(*it);
    } else {
      pending.push_back(std::move(x));
    }
  }

  std::vector<CascadeSet> members;
  while (!pending.empty()) {
    CascadeSet c = std::move(pending.back());
    pending.pop_back();
    bool placed = false;
    for (std::size_t k = 0; k < members.size() && !placed; ++k) {
      const CascadeSet& e = members[k];
      const Placement pe = place(e, c);
      switch (pe.rel) {
        case Relation::Disjoint:
        case Relation::InGap:
          break;
        case Relation::InCopy:
          members[k] = with_exception(
              e, pe.branch, pe.index,
              unite({copy_child(*pe.branch, pe.index),
                     to_child_coords(c, e.as_cascade().target, *pe.branch, pe.index)}));
          placed = true;
          break;
        case Relation::SameTarget:
          pending.push_back(merge_same_target(e, c));
          members.erase(members.begin() + static_cast<std::ptrdiff_t>(k));
          placed = true;
          break;
        case Relation::Overlap: {
          const Placement pc = place(c, e);
          if (pc.rel == Relation::InGap || pc.rel == Relation::Disjoint) break;
          if (pc.rel == Relation::InCopy) {
            pending.push_back(with_exception(
                c, pc.branch, pc.index,
                unite({copy_child(*pc.branch, pc.index),
                       to_child_coords(e, c.as_cascade().target, *pc.branch, pc.index)})));
            members.erase(members.begin() + static_cast<std::ptrdiff_t>(k));
            placed = true;
            break;
          }
          throw UnsupportedOverlap("union members overlap outside the supported configurations");
        }
      }
    }
    if (!placed) members.push_back(std::move(c));
  }

  std::vector<Rational> free;
  for (const Rational& p : pts) {
    bool absorbed = false;
    for (auto& e : members) {
      const auto h = e.hull();
      if (p < h->first || p > h->second) continue;
      if (auto r = absorb_point(e, p)) {
        e = *r;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) free.push_back(p);
  }

  if (members.empty()) return points(std::move(free));
  if (members.size() == 1 && free.empty()) return members.front();
  std::sort(members.begin(), members.end(), [](const CascadeSet& a, const CascadeSet& b) {
    return a.hull()->first < b.hull()->first;
  });
  return CascadeSet(Node(Union{std::move(members), std::move(free)}));
}

namespace {

template <class F>
CascadeSet map_cascade(const CascadeSet::Cascade& c, bool has_target, F&& f) {
  std::vector<Branch> branches;
  for (const Branch& b : c.branches) {
    Branch nb = b;
    nb.child = std::make_shared<const CascadeSet>(f(*b.child));
    for (auto& [i, e] : nb.exceptions) e = f(e);
    branches.push_back(std::move(nb));
  }
  CascadeSet out = CascadeSet::cascade(c.target, has_target, std::move(branches));
  return out.empty() ? CascadeSet() : out;
}

bool accumulates(const CascadeSet::Cascade& c) {
  return std::any_of(c.branches.begin(), c.branches.end(),
                     [](const Branch& b) { return !b.child->empty(); });
}

void guard(int depth_bound) {
  if (depth_bound < 0) throw BudgetExceeded("structural depth bound exceeded: order >= bound");
}

}  // namespace

CascadeSet derived(const CascadeSet& s) {
  if (s.is_points()) return {};
  if (s.is_union()) {
    std::vector<CascadeSet> parts;
    for (const auto& m : s.as_union().members) parts.push_back(derived(m));
    return CascadeSet::unite(parts);
  }
  const auto& c = s.as_cascade();
  return map_cascade(c, accumulates(c), [](const CascadeSet& x) { return derived(x); });
}

CascadeSet core(const CascadeSet& s) {
  if (s.is_points()) return {};
  if (s.is_union()) {
    std::vector<CascadeSet> parts;
    for (const auto& m : s.as_union().members) parts.push_back(core(m));
    return CascadeSet::unite(parts);
  }
  const auto& c = s.as_cascade();
  return map_cascade(c, c.has_target && accumulates(c), [](const CascadeSet& x) { return core(x); });
}

int fuller_order(const CascadeSet& s, int depth_bound) {
  guard(depth_bound);
  if (s.empty()) return -1;
  if (s.is_points()) return 0;
  if (s.is_union()) {
    int o = s.as_union().points.empty() ? -1 : 0;
    for (const auto& m : s.as_union().members) o = std::max(o, fuller_order(m, depth_bound - 1));
    return o;
  }
  const auto& c = s.as_cascade();
  int o = -1;
  int limit = -1;
  for (const Branch& b : c.branches) {
    const int child = fuller_order(*b.child, depth_bound - 1);
    o = std::max(o, child);
    limit = std::max(limit, child);
    for (const auto& [i, e] : b.exceptions) o = std::max(o, fuller_order(e, depth_bound - 1));
  }
  if (c.has_target) o = std::max(o, limit + 1);
  return o;
}

int fuller_order_by_derivation(const CascadeSet& s, int depth_bound) {
  int order = -1;
  CascadeSet cur = s;
  while (!cur.empty()) {
    if (++order > depth_bound) throw BudgetExceeded("structural depth bound exceeded: order >= bound");
    cur = core(cur);
  }
  return order;
}

namespace {

CascadeSet stratum(const CascadeSet& s, int j, int depth_bound) {
  guard(depth_bound);
  if (s.is_points()) return j == 0 ? s : CascadeSet();
  if (s.is_union()) {
    std::vector<CascadeSet> parts;
    if (j == 0) parts.push_back(CascadeSet::points(s.as_union().points));
    for (const auto& m : s.as_union().members) parts.push_back(stratum(m, j, depth_bound - 1));
    return CascadeSet::unite(parts);
  }
  const auto& c = s.as_cascade();
  int limit = -1;
  for (const Branch& b : c.branches) limit = std::max(limit, fuller_order(*b.child, depth_bound - 1));
  const bool target_here = c.has_target && limit + 1 == j;
  return map_cascade(c, target_here, [&](const CascadeSet& x) { return stratum(x, j, depth_bound - 1); });
}

}  // namespace

std::vector<CascadeSet> strata(const CascadeSet& s, int depth_bound) {
  const int order = fuller_order(s, depth_bound);
  std::vector<CascadeSet> out;
  for (int j = 0; j <= order; ++j) out.push_back(stratum(s, j, depth_bound));
  return out;
}

CascadeSet difference_points(const CascadeSet& s, const std::vector<Rational>& pts) {
  CascadeSet cur = s;
  for (const Rational& p : pts) {
    if (!cur.contains(p)) continue;
    if (cur.is_points()) {
      std::vector<Rational> keep;
      for (const auto& x : cur.as_points().pts) {
        if (x != p) keep.push_back(x);
      }
      cur = CascadeSet::points(std::move(keep));
    } else if (cur.is_union()) {
      std::vector<CascadeSet> parts;
      std::vector<Rational> keep;
      for (const auto& x : cur.as_union().points) {
        if (x != p) keep.push_back(x);
      }
      parts.push_back(CascadeSet::points(std::move(keep)));
      for (const auto& m : cur.as_union().members) parts.push_back(difference_points(m, {p}));
      cur = CascadeSet::unite(parts);
    } else {
      const auto& c = cur.as_cascade();
      if (p == c.target) {
        cur = CascadeSet::cascade(c.target, false, c.branches);
      } else {
        const int side = p > c.target ? 1 : -1;
        const Branch* b = branch_on(c, side);
        const auto loc = b->layout.locate(Rational(side) * (p - c.target));
        cur = with_exception(cur, b, loc->first, difference_points(copy_child(*b, loc->first), {loc->second}));
      }
      if (cur.empty()) cur = CascadeSet();
    }
  }
  return cur;
}

CascadeSet difference(const CascadeSet& s, const CascadeSet& t) {
  if (t.empty() || s.empty()) return s;
  if (t.is_points()) return difference_points(s, t.as_points().pts);
  if (t.is_union()) {
    CascadeSet cur = difference_points(s, t.as_union().points);
    for (const auto& m : t.as_union().members) cur = difference(cur, m);
    return cur;
  }
  if (s.is_points()) {
    std::vector<Rational> keep;
    for (const auto& x : s.as_points().pts) {
      if (!t.contains(x)) keep.push_back(x);
    }
    return CascadeSet::points(std::move(keep));
  }
  if (s.is_union()) {
    std::vector<CascadeSet> parts;
    std::vector<Rational> keep;
    for (const auto& x : s.as_union().points) {
      if (!t.contains(x)) keep.push_back(x);
    }
    parts.push_back(CascadeSet::points(std::move(keep)));
    for (const auto& m : s.as_union().members) parts.push_back(difference(m, t));
    return CascadeSet::unite(parts);
  }
  const Placement pt = place(s, t);
  switch (pt.rel) {
    case Relation::Disjoint:
    case Relation::InGap:
      return s;
    case Relation::InCopy: {
      const auto& c = s.as_cascade();
      const CascadeSet local = to_child_coords(t, c.target, *pt.branch, pt.index);
      CascadeSet r = with_exception(s, pt.branch, pt.index,
                                    difference(copy_child(*pt.branch, pt.index), local));
      return r.empty() ? CascadeSet() : r;
    }
    case Relation::SameTarget: {
      const auto& cs = s.as_cascade();
      const auto& ct = t.as_cascade();
      std::vector<Branch> branches;
      for (const Branch& b : cs.branches) {
        const Branch* bt = branch_on(ct, b.side);
        if (bt == nullptr) {
          branches.push_back(b);
          continue;
        }
        if (!(bt->layout == b.layout)) {
          throw UnsupportedOverlap("difference of cascades with different layouts at one target");
        }
        Branch nb = b;
        nb.child = std::make_shared<const CascadeSet>(difference(*b.child, *bt->child));
        std::set<std::int64_t> keys;
        for (const auto& [i, e] : b.exceptions) keys.insert(i);
        for (const auto& [i, e] : bt->exceptions) keys.insert(i);
        nb.exceptions.clear();
        for (std::int64_t i : keys) nb.exceptions[i] = difference(copy_child(b, i), copy_child(*bt, i));
        branches.push_back(std::move(nb));
      }
      CascadeSet r = CascadeSet::cascade(cs.target, cs.has_target && !ct.has_target, std::move(branches));
      return r.empty() ? CascadeSet() : r;
    }
    case Relation::Overlap:
      break;
  }
  const Placement ps = place(t, s);
  if (ps.rel == Relation::InGap || ps.rel == Relation::Disjoint) return s;
  if (ps.rel == Relation::InCopy) {
    return difference(s, copy_content(t.as_cascade().target, *ps.branch, ps.index));
  }
  throw UnsupportedOverlap("difference of overlapping cascades outside the supported configurations");
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CascadeSet make_rec(int k, std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  if (k == 0) {
    std::vector<Rational> pts;
    const int count = pick(1, 3);
    for (int i = 0; i < count; ++i) pts.emplace_back(pick(0, 64), 64);
    return CascadeSet::points(std::move(pts));
  }
  const Rational t(pick(4, 12), 16);
  const int sides = pick(0, 2);  // 0: above, 1: below, 2: both
  std::vector<Branch> branches;
  static const Rational ratios[] = {Rational(1, 2), Rational(1, 3), Rational(2, 3), Rational(1, 4)};
  static const Rational los[] = {Rational(1, 8), Rational(1, 4), Rational(1, 3), Rational(1, 2)};
  static const Rational his[] = {Rational(5, 8), Rational(3, 4), Rational(7, 8), Rational(1)};
  for (int side : {1, -1}) {
    if ((side == 1 && sides == 1) || (side == -1 && sides == 0)) continue;
    Branch b;
    b.side = side;
    const Rational room = side > 0 ? Rational(1) - t : t;
    b.layout.kind = pick(0, 1) == 0 ? CopyLayout::Kind::Harmonic : CopyLayout::Kind::Geometric;
    b.layout.ratio = ratios[pick(0, 3)];
    b.layout.scale = room * Rational(pick(1, 3), 4);
    b.layout.lo = los[pick(0, 3)];
    b.layout.hi = his[pick(0, 3)];
    b.child = std::make_shared<const CascadeSet>(make_rec(k - 1, rng));
    const int exceptions = pick(0, 2);
    for (int e = 0; e < exceptions; ++e) {
      const int idx = pick(1, 6);
      const int kind = pick(0, 3);
      b.exceptions[idx] = kind == 0 ? CascadeSet() : make_rec(pick(0, k - 1), rng);
    }
    branches.push_back(std::move(b));
  }
  CascadeSet c = CascadeSet::cascade(t, true, std::move(branches));
  if (pick(0, 2) == 0) {
    std::vector<Rational> extra;
    for (int i = 0, n = pick(1, 3); i < n; ++i) extra.emplace_back(pick(0, 256), 256);
    c = CascadeSet::unite({c, CascadeSet::points(std::move(extra))});
  }
  return c;
}

void probe_rec(const CascadeSet& s, int copies, int budget, std::vector<Rational>& out) {
  if (budget <= 0) return;
  const Rational eps(1, 1 << 20);
  if (s.is_points()) {
    for (const auto& p : s.as_points().pts) {
      out.push_back(p);
      out.push_back(p + eps);
    }
    return;
  }
  if (s.is_union()) {
    for (const auto& p : s.as_union().points) out.push_back(p);
    for (const auto& m : s.as_union().members) probe_rec(m, copies, budget - 1, out);
    return;
  }
  const auto& c = s.as_cascade();
  out.push_back(c.target);
  for (const Branch& b : c.branches) {
    std::vector<std::int64_t> picks;
    for (std::int64_t i = 1; i <= copies; ++i) picks.push_back(i);
    for (const auto& [i, e] : b.exceptions) {
      if (i > copies) picks.push_back(i);
    }
    picks.push_back(40);
    for (std::int64_t i : picks) {
      out.push_back(c.target + Rational(b.side) * b.layout.pos(i + 1));  // gap point
      const auto [A, B] = copy_map(c.target, b, i);
      std::vector<Rational> local;
      probe_rec(copy_child(b, i), i == 40 ? 1 : copies, budget - 1, local);
      for (const Rational& x : local) out.push_back(A + B * x);
    }
  }
}

}  // namespace

CascadeSet make_cascade(int k, std::uint64_t seed, int depth_bound) {
  if (k < 0) throw ValidationError("order must be non-negative");
  if (k > depth_bound) throw BudgetExceeded("requested order exceeds depth bound");
  std::mt19937_64 rng(splitmix(seed ^ (static_cast<std::uint64_t>(k) << 56)));
  return make_rec(k, rng);
}

std::vector<Rational> probe_points(const CascadeSet& s, int copies_per_branch) {
  std::vector<Rational> out;
  probe_rec(s, copies_per_branch, 8, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SampleStrata sample_strata(const std::vector<double>& times, double eps) {
  if (!(eps > 0.0)) throw ValidationError("isolation scale must be positive");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw ValidationError("non-finite time");
    if (i > 0 && !(times[i] > times[i - 1])) throw ValidationError("times must be strictly increasing");
  }
  SampleStrata out;
  out.labels.assign(times.size(), -1);
  std::vector<std::size_t> alive(times.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
  int level = 0;
  while (!alive.empty()) {
    std::vector<std::size_t> survivors;
    std::size_t start = 0;
    while (start < alive.size()) {
      std::size_t end = start + 1;
      while (end < alive.size() && times[alive[end]] - times[alive[end - 1]] <= eps) ++end;
      if (end - start == 1) {
        out.labels[alive[start]] = level;
      } else {
        std::vector<double> gaps;
        for (std::size_t i = start + 1; i < end; ++i) gaps.push_back(times[alive[i]] - times[alive[i - 1]]);
        const std::size_t half = gaps.size() / 2;
        auto median = [](std::vector<double> g) {
          if (g.empty()) return std::numeric_limits<double>::infinity();
          std::nth_element(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(g.size() / 2), g.end());
          return g[g.size() / 2];
        };
        const double left = median({gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(half, 1))});
        const double right = median({gaps.end() - static_cast<std::ptrdiff_t>(std::max<std::size_t>(half, 1)), gaps.end()});
        const std::size_t rep = left <= right ? start : end - 1;
        for (std::size_t i = start; i < end; ++i) {
          if (i != rep) out.labels[alive[i]] = level;
        }
        survivors.push_back(alive[rep]);
      }
      start = end;
    }
    alive = std::move(survivors);
    ++level;
    ++out.rounds;
  }
  return out;
}

}  // namespace fullerkit
