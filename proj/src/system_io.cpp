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

#include "fullerkit/system_io.hpp"

#include "fullerkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace fullerkit {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError((path.empty() ? std::string("<root>") : path) + ": " + what);
}

const Json& member(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

void only_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) fail(path, "unknown field '" + it.key() + "'");
  }
}

int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

Vector as_vector(const Json& j, const std::string& path, int n) {
  if (!j.is_array()) fail(path, "expected an array");
  if (static_cast<int>(j.size()) != n) {
    fail(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  }
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = as_number(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  return v;
}

Rational as_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ValidationError& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected a rational as \"p/q\" string or integer");
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

void dump_rec(const Json& j, int indent, int level, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (level + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * level), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        dump_rec(it.value(), indent, level + 1, out);
      }
      out += nl;
      out += close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_rec(j[i], indent, level + 1, out);
        }
        out += "]";
        return;
      }
      out += "[";
      out += nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) {
          out += ",";
          out += nl;
        }
        out += pad;
        dump_rec(j[i], indent, level + 1, out);
      }
      out += nl;
      out += close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  if (x == 0.0) return "0.0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  return out;
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": JSON syntax error");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

ControlAffineSystem parse_system(const Json& j) {
  only_keys(j, "", {"n", "m", "fields"});
  const int n = as_int(member(j, "", "n"), "n");
  const int m = as_int(member(j, "", "m"), "m");
  if (n < 1) fail("n", "must be positive");
  if (m < 1) fail("m", "must be positive");
  if (2 * m + 1 > n) fail("m", "needs 2m+1 <= n");
  const Json& fields = member(j, "", "fields");
  if (!fields.is_array()) fail("fields", "expected an array");
  if (static_cast<int>(fields.size()) != 2 * m + 1) {
    fail("fields", "expected 2m+1 = " + std::to_string(2 * m + 1) + " fields, got " +
                       std::to_string(fields.size()));
  }
  std::vector<PolyVectorField> out;
  for (std::size_t f = 0; f < fields.size(); ++f) {
    const std::string fp = index_path("fields", f);
    const Json& comps = fields[f];
    if (!comps.is_array()) fail(fp, "expected an array of components");
    if (static_cast<int>(comps.size()) != n) {
      fail(fp, "expected n = " + std::to_string(n) + " components, got " + std::to_string(comps.size()));
    }
    std::vector<std::vector<Monomial>> monos(static_cast<std::size_t>(n));
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const std::string cp = index_path(fp, c);
      if (!comps[c].is_array()) fail(cp, "expected an array of monomials");
      for (std::size_t k = 0; k < comps[c].size(); ++k) {
        const std::string mp = index_path(cp, k);
        const Json& mono = comps[c][k];
        only_keys(mono, mp, {"coef", "exp"});
        Monomial mo;
        mo.coefficient = as_number(member(mono, mp, "coef"), mp + ".coef");
        const Json& e = member(mono, mp, "exp");
        if (!e.is_array() || static_cast<int>(e.size()) != n) {
          fail(mp + ".exp", "expected " + std::to_string(n) + " exponents");
        }
        for (std::size_t v = 0; v < e.size(); ++v) {
          const int ex = as_int(e[v], index_path(mp + ".exp", v));
          if (ex < 0) fail(index_path(mp + ".exp", v), "exponent must be non-negative");
          mo.exponents.push_back(ex);
        }
        monos[c].push_back(std::move(mo));
      }
    }
    out.push_back(PolyVectorField::from_monomials(static_cast<std::size_t>(n), monos));
  }
  return ControlAffineSystem(n, m, std::move(out));
}

Json system_to_json(const ControlAffineSystem& sys) {
  Json fields = Json::array();
  for (const auto& f : sys.fields()) {
    Json comps = Json::array();
    for (const auto& c : f.components()) {
      Json monos = Json::array();
      for (const auto& [e, coef] : c.terms()) monos.push_back(Json{{"coef", coef}, {"exp", e}});
      comps.push_back(std::move(monos));
    }
    fields.push_back(std::move(comps));
  }
  return Json{{"n", sys.n()}, {"m", sys.m()}, {"fields", std::move(fields)}};
}

ExtremalState parse_state(const Json& j, int n) {
  only_keys(j, "state", {"q", "p"});
  ExtremalState lam{as_vector(member(j, "state", "q"), "state.q", n),
                    as_vector(member(j, "state", "p"), "state.p", n)};
  if (lam.p.norm() == 0.0) fail("state.p", "covector must be nonzero");
  return lam;
}

Json state_to_json(const ExtremalState& lam) {
  return Json{{"q", std::vector<double>(lam.q.data(), lam.q.data() + lam.q.size())},
              {"p", std::vector<double>(lam.p.data(), lam.p.data() + lam.p.size())}};
}

FlowConfig parse_flow_config(const Json& j) {
  FlowConfig c;
  if (j.is_null()) return c;
  only_keys(j, "flow", {"horizon", "abs_tol", "rel_tol", "switch_threshold", "rank_tol", "max_step",
                        "initial_step", "event_time_tol", "singular_gain", "normalize_covector",
                        "max_events"});
  auto num = [&](const char* key, double& dst) {
    if (auto it = j.find(key); it != j.end()) dst = as_number(*it, std::string("flow.") + key);
  };
  num("horizon", c.horizon);
  num("abs_tol", c.abs_tol);
  num("rel_tol", c.rel_tol);
  num("switch_threshold", c.switch_threshold);
  num("rank_tol", c.rank_tol);
  num("max_step", c.max_step);
  num("initial_step", c.initial_step);
  num("event_time_tol", c.event_time_tol);
  num("singular_gain", c.singular_gain);
  if (auto it = j.find("normalize_covector"); it != j.end()) {
    if (!it->is_boolean()) fail("flow.normalize_covector", "expected a boolean");
    c.normalize_covector = it->get<bool>();
  }
  if (auto it = j.find("max_events"); it != j.end()) c.max_events = as_int(*it, "flow.max_events");
  return c;
}

namespace {

CascadeSet parse_cascade_at(const Json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) fail(path, "expected exactly one of 'points', 'cascade', 'union'");
  if (auto it = j.find("points"); it != j.end()) {
    if (!it->is_array()) fail(path + ".points", "expected an array");
    std::vector<Rational> pts;
    for (std::size_t i = 0; i < it->size(); ++i) pts.push_back(as_rational((*it)[i], index_path(path + ".points", i)));
    return CascadeSet::points(std::move(pts));
  }
  if (auto it = j.find("union"); it != j.end()) {
    if (!it->is_array()) fail(path + ".union", "expected an array");
    std::vector<CascadeSet> parts;
    for (std::size_t i = 0; i < it->size(); ++i) parts.push_back(parse_cascade_at((*it)[i], index_path(path + ".union", i)));
    try {
      return CascadeSet::unite(parts);
    } catch (const UnsupportedOverlap& e) {
      fail(path + ".union", e.what());
    }
  }
  if (auto it = j.find("cascade"); it != j.end()) {
    const std::string cp = path + ".cascade";
    only_keys(*it, cp, {"target", "has_target", "branches"});
    const Rational target = as_rational(member(*it, cp, "target"), cp + ".target");
    bool has_target = true;
    if (auto h = it->find("has_target"); h != it->end()) {
      if (!h->is_boolean()) fail(cp + ".has_target", "expected a boolean");
      has_target = h->get<bool>();
    }
    const Json& bs = member(*it, cp, "branches");
    if (!bs.is_array()) fail(cp + ".branches", "expected an array");
    std::vector<Branch> branches;
    for (std::size_t b = 0; b < bs.size(); ++b) {
      const std::string bp = index_path(cp + ".branches", b);
      only_keys(bs[b], bp, {"side", "layout", "child", "exceptions"});
      Branch br;
      br.side = as_int(member(bs[b], bp, "side"), bp + ".side");
      const Json& lj = member(bs[b], bp, "layout");
      const std::string lp = bp + ".layout";
      only_keys(lj, lp, {"kind", "scale", "ratio", "lo", "hi"});
      const Json& kind = member(lj, lp, "kind");
      if (kind == "harmonic") {
        br.layout.kind = CopyLayout::Kind::Harmonic;
      } else if (kind == "geometric") {
        br.layout.kind = CopyLayout::Kind::Geometric;
      } else {
        fail(lp + ".kind", "expected \"harmonic\" or \"geometric\"");
      }
      if (auto f = lj.find("scale"); f != lj.end()) br.layout.scale = as_rational(*f, lp + ".scale");
      if (auto f = lj.find("ratio"); f != lj.end()) br.layout.ratio = as_rational(*f, lp + ".ratio");
      if (auto f = lj.find("lo"); f != lj.end()) br.layout.lo = as_rational(*f, lp + ".lo");
      if (auto f = lj.find("hi"); f != lj.end()) br.layout.hi = as_rational(*f, lp + ".hi");
      br.child = std::make_shared<const CascadeSet>(parse_cascade_at(member(bs[b], bp, "child"), bp + ".child"));
      if (auto ex = bs[b].find("exceptions"); ex != bs[b].end()) {
        if (!ex->is_array()) fail(bp + ".exceptions", "expected an array");
        for (std::size_t e = 0; e < ex->size(); ++e) {
          const std::string ep = index_path(bp + ".exceptions", e);
          only_keys((*ex)[e], ep, {"index", "set"});
          const int idx = as_int(member((*ex)[e], ep, "index"), ep + ".index");
          br.exceptions[idx] = parse_cascade_at(member((*ex)[e], ep, "set"), ep + ".set");
        }
      }
      branches.push_back(std::move(br));
    }
    try {
      return CascadeSet::cascade(target, has_target, std::move(branches));
    } catch (const ValidationError& e) {
      fail(cp, e.what());
    }
  }
  fail(path, "expected exactly one of 'points', 'cascade', 'union'");
}

}  // namespace

CascadeSet parse_cascade(const Json& j) { return parse_cascade_at(j, "set"); }

Json cascade_to_json(const CascadeSet& s) {
  auto rationals = [](const std::vector<Rational>& v) {
    Json a = Json::array();
    for (const auto& r : v) a.push_back(format_rational(r));
    return a;
  };
  if (s.is_points()) return Json{{"points", rationals(s.as_points().pts)}};
  if (s.is_union()) {
    Json parts = Json::array();
    if (!s.as_union().points.empty()) parts.push_back(Json{{"points", rationals(s.as_union().points)}});
    for (const auto& m : s.as_union().members) parts.push_back(cascade_to_json(m));
    return Json{{"union", std::move(parts)}};
  }
  const auto& c = s.as_cascade();
  Json branches = Json::array();
  for (const Branch& b : c.branches) {
    Json layout{{"kind", b.layout.kind == CopyLayout::Kind::Harmonic ? "harmonic" : "geometric"},
                {"scale", format_rational(b.layout.scale)}};
    if (b.layout.kind == CopyLayout::Kind::Geometric) layout["ratio"] = format_rational(b.layout.ratio);
    layout["lo"] = format_rational(b.layout.lo);
    layout["hi"] = format_rational(b.layout.hi);
    Json br{{"side", b.side}, {"layout", std::move(layout)}, {"child", cascade_to_json(*b.child)}};
    if (!b.exceptions.empty()) {
      Json ex = Json::array();
      for (const auto& [i, e] : b.exceptions) ex.push_back(Json{{"index", i}, {"set", cascade_to_json(e)}});
      br["exceptions"] = std::move(ex);
    }
    branches.push_back(std::move(br));
  }
  return Json{{"cascade", Json{{"target", format_rational(c.target)}, {"has_target", c.has_target},
                               {"branches", std::move(branches)}}}};
}

}  // namespace fullerkit
