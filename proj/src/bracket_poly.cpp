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

#include "fullerkit/bracket_poly.hpp"

#include "fullerkit/errors.hpp"
#include "fullerkit/ring_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace fullerkit {

BracketPoly budgeted_determinant(const std::vector<std::vector<BracketPoly>>& a,
                                 const SymbolicOptions& opts, const char* what) {
  struct Guard {
    const SymbolicOptions& opts;
    const char* what;
    void operator()(const BracketPoly& x, const BracketPoly& y) const {
      const double pairs = static_cast<double>(x.size()) * static_cast<double>(y.size());
      if (pairs > 16.0 * static_cast<double>(opts.term_budget)) {
        throw BudgetExceeded(std::string(what) + ": product of " + std::to_string(x.size()) + " and " +
                             std::to_string(y.size()) + " terms exceeds budget " +
                             std::to_string(opts.term_budget));
      }
    }
    void operator()(const BracketPoly& z) const { enforce_budget(z, opts, what); }
  };
  return determinant_generic(a, BracketPoly::constant(1.0), Guard{opts, what});
}

namespace {

constexpr int kTagShift = 56;
constexpr int kLenShift = 51;

GenKey encode(std::uint64_t tag, const MultiIndex& word) {
  if (word.size() > kMaxWordLength) {
    throw BudgetExceeded("generator word longer than " + std::to_string(kMaxWordLength));
  }
  GenKey key = (tag << kTagShift) | (static_cast<std::uint64_t>(word.size()) << kLenShift);
  for (std::size_t t = 0; t < word.size(); ++t) {
    const int idx = word[t];
    if (idx < 0 || idx > 7) throw ValidationError("generator index outside {0,...,7}");
    key |= static_cast<std::uint64_t>(idx) << (3 * (kMaxWordLength - 1 - t));
  }
  return key;
}

void mul_into(std::map<BracketPoly::Term, double>& out, const BracketPoly::Term& a,
              const BracketPoly::Term& b, double c) {
  BracketPoly::Term t;
  t.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      t.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      t.push_back(b[j++]);
    } else {
      t.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  auto [it, inserted] = out.emplace(std::move(t), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) out.erase(it);
  }
}

}  // namespace

GenKey encode_bracket(const MultiIndex& D) {
  if (D.empty()) throw ValidationError("empty multi-index");
  return encode(0, D);
}

GenKey encode_opaque(int symbol, const MultiIndex& word) {
  if (symbol < 0 || symbol > 254) throw ValidationError("opaque symbol out of range");
  return encode(static_cast<std::uint64_t>(symbol) + 1, word);
}

GenInfo decode(GenKey key) {
  GenInfo info;
  const std::uint64_t tag = key >> kTagShift;
  info.opaque = tag != 0;
  info.symbol = info.opaque ? static_cast<int>(tag) - 1 : -1;
  const std::size_t len = (key >> kLenShift) & 0x1f;
  for (std::size_t t = 0; t < len; ++t) {
    info.word.push_back(static_cast<int>((key >> (3 * (kMaxWordLength - 1 - t))) & 0x7));
  }
  return info;
}

std::string gen_name(GenKey key) {
  const GenInfo g = decode(key);
  std::ostringstream os;
  if (!g.opaque) {
    os << "h";
    for (int i : g.word) os << i;
    return os.str();
  }
  if (!g.word.empty()) {
    os << "ad";
    for (int i : g.word) os << i;
    os << "(";
  }
  os << "X" << g.symbol;
  if (!g.word.empty()) os << ")";
  return os.str();
}

std::optional<std::pair<GenKey, double>> normalize_bracket(const MultiIndex& D) {
  if (D.empty()) throw ValidationError("empty multi-index");
  MultiIndex w = D;
  double sign = 1.0;
  if (w.size() >= 2) {
    int& a = w[w.size() - 2];
    int& b = w[w.size() - 1];
    if (a == b) return std::nullopt;
    if (a > b) {
      std::swap(a, b);
      sign = -1.0;
    }
  }
  return std::make_pair(encode_bracket(w), sign);
}

BracketPoly BracketPoly::constant(double c) {
  BracketPoly p;
  p.add({}, c);
  return p;
}

BracketPoly BracketPoly::h(const MultiIndex& D, double c) {
  BracketPoly p;
  if (auto n = normalize_bracket(D)) p.add({{n->first, 1}}, c * n->second);
  return p;
}

BracketPoly BracketPoly::h(const MultiIndex& D, const SymbolicOptions& opts) {
  if (opts.vanishes && opts.vanishes(D)) return {};
  return h(D, 1.0);
}

BracketPoly BracketPoly::opaque(int symbol, const MultiIndex& word) {
  BracketPoly p;
  p.add({{encode_opaque(symbol, word), 1}}, 1.0);
  return p;
}

BracketPoly BracketPoly::monomial(const Term& t, double c) {
  BracketPoly p;
  p.add(t, c);
  return p;
}

int BracketPoly::degree() const {
  int d = -1;
  for (const auto& [t, c] : terms_) {
    int s = 0;
    for (const auto& [k, e] : t) s += e;
    d = std::max(d, s);
  }
  return d;
}

void BracketPoly::add(const Term& t, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(t, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

BracketPoly& BracketPoly::operator+=(const BracketPoly& o) {
  for (const auto& [t, c] : o.terms_) add(t, c);
  return *this;
}

BracketPoly& BracketPoly::operator-=(const BracketPoly& o) {
  for (const auto& [t, c] : o.terms_) add(t, -c);
  return *this;
}

BracketPoly BracketPoly::operator+(const BracketPoly& o) const {
  BracketPoly r = *this;
  r += o;
  return r;
}

BracketPoly BracketPoly::operator-(const BracketPoly& o) const {
  BracketPoly r = *this;
  r -= o;
  return r;
}

BracketPoly BracketPoly::operator-() const {
  BracketPoly r = *this;
  for (auto& [t, c] : r.terms_) c = -c;
  return r;
}

BracketPoly BracketPoly::operator*(const BracketPoly& o) const {
  constexpr double kHardProductCap = 2e8;
  if (static_cast<double>(size()) * static_cast<double>(o.size()) > kHardProductCap) {
    throw BudgetExceeded("symbolic product too large");
  }
  BracketPoly r;
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : o.terms_) mul_into(r.terms_, a, b, ca * cb);
  }
  return r;
}

BracketPoly BracketPoly::operator*(double s) const {
  if (s == 0.0) return {};
  BracketPoly r = *this;
  for (auto& [t, c] : r.terms_) c *= s;
  return r;
}

bool BracketPoly::contains_generator(GenKey key) const {
  for (const auto& [t, c] : terms_) {
    for (const auto& [k, e] : t) {
      if (k == key) return true;
    }
  }
  return false;
}

std::vector<GenKey> BracketPoly::generators() const {
  std::set<GenKey> keys;
  for (const auto& [t, c] : terms_) {
    for (const auto& [k, e] : t) keys.insert(k);
  }
  return {keys.begin(), keys.end()};
}

std::string BracketPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [t, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const double a = std::abs(c);
    if (a != 1.0 || t.empty()) {
      os << a;
      if (!t.empty()) os << "*";
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) os << "*";
      os << gen_name(t[i].first);
      if (t[i].second != 1) os << "^" << t[i].second;
    }
  }
  return os.str();
}

void enforce_budget(const BracketPoly& p, const SymbolicOptions& opts, const char* what) {
  if (p.size() > opts.term_budget) {
    throw BudgetExceeded(std::string(what) + ": " + std::to_string(p.size()) +
                         " terms exceed budget " + std::to_string(opts.term_budget));
  }
}

namespace {

// ad_i applied to one generator: returns (key, sign) or nothing when zero.
std::optional<std::pair<GenKey, double>> ad_generator(int i, GenKey key,
                                                      const SymbolicOptions& opts) {
  GenInfo g = decode(key);
  g.word.insert(g.word.begin(), i);
  if (g.opaque) return std::make_pair(encode_opaque(g.symbol, g.word), 1.0);
  auto n = normalize_bracket(g.word);
  if (!n) return std::nullopt;
  if (opts.vanishes && opts.vanishes(decode(n->first).word)) return std::nullopt;
  return n;
}

}  // namespace

BracketPoly poisson_ad(int i, const BracketPoly& p, const SymbolicOptions& opts) {
  if (i < 0 || i > 7) throw ValidationError("ad index outside {0,...,7}");
  std::map<GenKey, std::optional<std::pair<GenKey, double>>> memo;
  BracketPoly out;
  for (const auto& [t, c] : p.terms()) {
    for (std::size_t k = 0; k < t.size(); ++k) {
      auto it = memo.find(t[k].first);
      if (it == memo.end()) it = memo.emplace(t[k].first, ad_generator(i, t[k].first, opts)).first;
      if (!it->second) continue;
      const auto [nk, sign] = *it->second;
      BracketPoly::Term rest;
      rest.reserve(t.size());
      for (std::size_t l = 0; l < t.size(); ++l) {
        if (l != k) {
          rest.push_back(t[l]);
        } else if (t[l].second > 1) {
          rest.emplace_back(t[l].first, t[l].second - 1);
        }
      }
      auto pos = std::lower_bound(rest.begin(), rest.end(), nk,
                                  [](const auto& e, GenKey key) { return e.first < key; });
      if (pos != rest.end() && pos->first == nk) {
        ++pos->second;
      } else {
        rest.insert(pos, {nk, 1});
      }
      out.add(rest, c * t[k].second * sign);
    }
  }
  enforce_budget(out, opts, "poisson_ad");
  return out;
}

BracketPoly ad_word(const MultiIndex& word, const BracketPoly& p, const SymbolicOptions& opts) {
  BracketPoly r = p;
  for (auto it = word.rbegin(); it != word.rend(); ++it) r = poisson_ad(*it, r, opts);
  return r;
}

void OpaqueDefinitions::define(int symbol, BracketPoly flat) {
  for (GenKey k : flat.generators()) {
    if (decode(k).opaque) throw ValidationError("opaque definitions must be flat");
  }
  defs_[symbol] = std::move(flat);
  expansions_.clear();
}

const BracketPoly& OpaqueDefinitions::expand(GenKey key) {
  if (auto it = expansions_.find(key); it != expansions_.end()) return it->second;
  const GenInfo g = decode(key);
  if (!g.opaque) throw ValidationError("expand() needs an opaque generator");
  auto d = defs_.find(g.symbol);
  if (d == defs_.end()) throw ValidationError("opaque symbol X" + std::to_string(g.symbol) + " undefined");
  BracketPoly value;
  if (g.word.empty()) {
    value = d->second;
  } else {
    const MultiIndex tail(g.word.begin() + 1, g.word.end());
    value = poisson_ad(g.word.front(), expand(encode_opaque(g.symbol, tail)), opts_);
  }
  return expansions_.emplace(key, std::move(value)).first->second;
}

BracketPoly OpaqueDefinitions::flatten(const BracketPoly& p) {
  BracketPoly out;
  for (const auto& [t, c] : p.terms()) {
    BracketPoly prod = BracketPoly::constant(c);
    BracketPoly::Term flat_part;
    for (const auto& [k, e] : t) {
      if (!decode(k).opaque) {
        flat_part.emplace_back(k, e);
        continue;
      }
      const BracketPoly& x = expand(k);
      for (int r = 0; r < e; ++r) prod = prod * x;
    }
    out += prod * BracketPoly::monomial(flat_part, 1.0);
    enforce_budget(out, opts_, "flatten");
  }
  return out;
}

double evaluate_poly(const BracketPoly& p, const std::function<double(GenKey)>& value) {
  std::map<GenKey, double> vals;
  double total = 0.0;
  for (const auto& [t, c] : p.terms()) {
    double v = c;
    for (const auto& [k, e] : t) {
      auto it = vals.find(k);
      if (it == vals.end()) it = vals.emplace(k, value(k)).first;
      for (int r = 0; r < e; ++r) v *= it->second;
    }
    total += v;
  }
  return total;
}

}  // namespace fullerkit
