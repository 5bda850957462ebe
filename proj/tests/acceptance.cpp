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

// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include "fullerkit/flow.hpp"
#include "fullerkit/fuller.hpp"
#include "fullerkit/hamsym.hpp"
#include "fullerkit/mu_ladder.hpp"
#include "fullerkit/sweeps.hpp"
#include "systems.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

using namespace fullerkit;
using namespace fullerkit::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string summary;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Outcome suites(const std::vector<SuiteResult>& rs, double secs, double limit) {
  Outcome o;
  std::ostringstream os;
  for (const auto& r : rs) {
    o.pass = o.pass && r.pass;
    os << r.name << " " << r.cases << " cases worst " << sci(r.worst);
    if (r.skipped) os << " (" << r.skipped << " skipped)";
    if (!r.pass) os << " FAILED: " << r.detail;
    os << "; ";
  }
  os << "runtime " << sci(secs) << " s (limit " << limit << " s)";
  o.pass = o.pass && secs < limit;
  o.summary = os.str();
  return o;
}

Outcome criterion1() {
  SweepOptions opts;
  const auto t0 = Clock::now();
  std::vector<SuiteResult> rs;
  for (int k : {2, 4, 6, 8}) rs.push_back(pfaffian_suite(k, opts));
  return suites(rs, seconds_since(t0), 10.0);
}

Outcome criterion2() {
  SweepOptions opts;
  const auto t0 = Clock::now();
  std::vector<SuiteResult> rs;
  for (int k : {2, 4, 6, 8}) rs.push_back(kernel_suite(k, opts));
  rs.push_back(lexmin_suite(opts));
  return suites(rs, seconds_since(t0), 10.0);
}

// Drift α∂x + ∂z on the Heisenberg frame: H = [[0,p_z],[−p_z,0]], h0I = (0, α p_z/2),
// so ‖H⁻¹h0I‖ = |α|/2 and φ0 = p_z²(1 − α²/4).
ControlAffineSystem shifted_heisenberg(double alpha) {
  return ControlAffineSystem(
      3, 1,
      {field(3, {{{alpha, ex({0, 0, 0})}}, {}, {{1.0, ex({0, 0, 0})}}}),
       field(3, {{{1.0, ex({0, 0, 0})}}, {}, {{-0.5, ex({0, 1, 0})}}}),
       field(3, {{}, {{1.0, ex({0, 0, 0})}}, {{0.5, ex({1, 0, 0})}}})});
}

Outcome criterion3() {
  SweepOptions opts;
  SuiteResult r = phi0_suite(opts);
  Outcome o = suites({r}, 0.0, 1e300);
  constexpr double tol = 1e-9;
  const ExtremalState lam{Vector::Zero(3), (Vector(3) << 0.3, -0.7, 1.3).finished()};
  double worst = 0.0;
  bool boundary_ok = true;
  for (double rel : {0.0, 1e-6, -1e-6}) {
    const double alpha = 2.0 * (1.0 + rel);
    const ControlAffineSystem sys = shifted_heisenberg(alpha);
    const double phi = phi0(sys, lam);
    const SingularControl sc = singular_control(sys, lam, tol);
    const double pz2 = lam.p(2) * lam.p(2);
    worst = std::max(worst, std::abs(phi - pz2 * (1.0 - alpha * alpha / 4.0)) / pz2);
    if (rel == 0.0) {
      boundary_ok = boundary_ok && std::abs(phi) <= tol * pz2 && std::abs(sc.norm - 1.0) <= tol && sc.feasible;
    } else {
      // Either side of the boundary: sign of φ0 and feasibility flip together.
      boundary_ok = boundary_ok && ((phi > 0) == sc.feasible) && ((rel < 0) == sc.feasible);
    }
  }
  o.pass = o.pass && boundary_ok && worst <= tol;
  o.summary = "phi0 identity " + std::to_string(r.cases) + " states worst rel " + sci(r.worst) +
              "; boundary family |H^-1 h0I| = 1 <=> phi0 = 0: " + (boundary_ok ? "holds" : "violated") +
              " (closed-form rel err " + sci(worst) + ")";
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::ostringstream os;
  std::mt19937_64 rng(mix_seed(42, 4, 0));
  const ControlAffineSystem sys = random_system(3, 1, 2, rng, 1.0);
  BracketTable table(sys);
  const auto flat = phi_symbolic(1, 3);
  OpaqueDefinitions defs;
  defs.define(kPhi0Symbol, phi0_symbolic(1));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int l = 1; l <= 3; ++l) {
    const StructureSplit s = structure_split(l, 1);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      ExtremalState lam{Vector(3), Vector(3)};
      for (int i = 0; i < 3; ++i) {
        lam.q(i) = u(rng);
        lam.p(i) = u(rng);
      }
      HamiltonianEvaluator eval(table, lam, &defs);
      const double target = eval(flat[static_cast<std::size_t>(l)]);
      const double lead = eval(s.leading);
      const double rem = eval(s.remainder);
      const double scale = std::max({1.0, std::abs(target), std::abs(lead), std::abs(rem)});
      worst = std::max(worst, std::abs(lead + rem - target) / scale);
    }
    const bool ok = s.certified && worst <= 1e-8;
    o.pass = o.pass && ok;
    os << "l=" << l << " remainder " << s.remainder.size() << " terms, pure ad_h0^" << l
       << "(phi0) absent: " << (s.certified ? "yes" : "NO") << ", re-sum rel err " << sci(worst) << "; ";
  }
  o.summary = os.str();
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto t0 = Clock::now();
  const ControlAffineSystem sys = heisenberg();
  const ExtremalState lam{Vector::Zero(3), (Vector(3) << 1.0, 0.0, 0.5).finished()};
  FlowConfig cfg;
  cfg.horizon = 10.0;
  const Trajectory tr = integrate(sys, lam, cfg);
  const double hi = hI_norm_drift(tr);
  const double ham = hamiltonian_drift(tr, sys);
  const double hd = hdot_residual(tr, sys);
  const double secs = seconds_since(t0);
  // Tolerance halving with the step size left to the error controller.
  FlowConfig coarse = cfg;
  coarse.max_step = cfg.horizon;
  coarse.abs_tol = coarse.rel_tol = 1e-6;
  FlowConfig fine = coarse;
  fine.abs_tol = fine.rel_tol = 0.5e-6;
  const Trajectory tc = integrate(sys, lam, coarse);
  const Trajectory tf = integrate(sys, lam, fine);
  const double hc = hI_norm_drift(tc), hf = hI_norm_drift(tf);
  const double gc = hamiltonian_drift(tc, sys), gf = hamiltonian_drift(tf, sys);
  const bool halves = hf <= 0.5 * hc && gf <= 0.5 * gc;
  o.pass = tr.status == FlowStatus::Completed && tr.events.empty() && hi <= 1e-6 && ham <= 1e-8 &&
           hd <= 1e-6 && halves && secs < 5.0;
  o.summary = "|h_I| drift " + sci(hi) + " (<=1e-6), Hamiltonian drift " + sci(ham) + " (<=1e-8), hdot residual " +
              sci(hd) + " (<=1e-6), events " + std::to_string(tr.events.size()) + "; halving tol 1e-6 -> 5e-7 (uncapped step): |h_I| drift " +
              sci(hc) + " -> " + sci(hf) + ", Hamiltonian drift " + sci(gc) + " -> " + sci(gf) +
              "; runtime " + sci(secs) + " s (limit 5 s)";
  return o;
}

Outcome criterion6() {
  Outcome o;
  double worst = 0.0;
  int used = 0;
  std::string note;
  for (int s = 0; s < 20; ++s) {
    std::mt19937_64 rng(mix_seed(42, 6, static_cast<std::uint64_t>(s)));
    const ControlAffineSystem sys = random_system(3, 1, 2, rng, 0.5);
    ExtremalState lam{Vector::Zero(3), Vector(3)};
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 3; ++i) {
      lam.q(i) = 0.2 * u(rng);
      lam.p(i) = u(rng);
    }
    FlowConfig cfg;
    cfg.horizon = 1.0;
    const Trajectory tr = integrate(sys, lam, cfg);
    const double r = hdot_residual(tr, sys, 1e-3);
    worst = std::max(worst, r);
    ++used;
    if (r > 1e-5 && note.empty()) note = " first failure system " + std::to_string(s);
    if (tr.status != FlowStatus::Completed && note.empty()) note = std::string(" status ") + to_string(tr.status);
  }
  o.pass = worst <= 1e-5 && used == 20;
  o.summary = std::to_string(used) + " random degree-2 systems, max |FD hdot_I - (h0I - H u)| " + sci(worst) +
              " at step 1e-3 (<=1e-5)" + note;
  return o;
}

Outcome criterion7() {
  SweepOptions opts;
  const auto t0 = Clock::now();
  std::vector<SuiteResult> rs{fuller_order_suite(4, 100, opts), fuller_lemma_suite(500, opts),
                              fuller_corollary_suite(500, opts)};
  return suites(rs, seconds_since(t0), 10.0);
}

struct MuCase {
  std::string name;
  std::unique_ptr<ControlAffineSystem> sys;
  ExtremalState base;
};

Outcome criterion8() {
  Outcome o;
  std::ostringstream os;
  std::vector<MuCase> cases;
  cases.push_back({"heisenberg", std::make_unique<ControlAffineSystem>(heisenberg()),
                   {Vector::Zero(3), (Vector(3) << 1.0, 1.0, 0.0).finished()}});
  for (double c : {1.0, 0.7}) {
    std::mt19937_64 rng(mix_seed(42, 8, static_cast<std::uint64_t>(c * 10)));
    cases.push_back({"Engel m=1 n=5 c=" + std::to_string(c).substr(0, 3),
                     std::make_unique<ControlAffineSystem>(engel_system(c)), engel_basepoint(5, 2, rng)});
    cases.push_back({"Heisenberg+Engel m=2 n=8 c=" + std::to_string(c).substr(0, 3),
                     std::make_unique<ControlAffineSystem>(heisenberg_engel_system(c)), engel_basepoint(8, 5, rng)});
  }
  {
    std::mt19937_64 rng(mix_seed(42, 8, 0));
    auto sys = std::make_unique<ControlAffineSystem>(graded_system(1, 5, rng));
    ExtremalState base;
    if (degenerate_basepoint(*sys, rng, base)) cases.push_back({"graded m=1 n=5", std::move(sys), base});
  }
  if (cases.size() < 6) {
    o.pass = false;
    os << "could not build all manufactured basepoints; ";
  }
  for (auto& c : cases) {
    const int n = c.sys->n(), m = c.sys->m();
    const int N = 2 * n;
    const int rmax = (2 * m + 1) * N;
    BracketTable table(*c.sys);
    os << c.name << ": ";
    try {
      const MuState st = mu_sequence(table, c.base, rmax);
      bool monotone = true;
      for (int r = 1; r <= st.rmax(); ++r) monotone = monotone && st.rho(r) >= st.rho(r - 1);
      int plateau = -1;
      for (int r = 0; r <= 2 * m * N && r + N <= st.rmax() && plateau < 0; ++r) {
        bool flat = true;
        for (int j = 1; j <= N; ++j) flat = flat && st.rho(r + j) == st.rho(r);
        if (flat) plateau = r;
      }
      const auto starts = plateau_starts(st, std::min(3, N));
      double resid = 0.0;
      bool certified = !starts.empty();
      for (int r : starts) {
        const Relh0Report rep = relh0_check(table, st, r, 3, 100, 7);
        resid = std::max(resid, rep.max_residual);
        certified = certified && rep.certified;
      }
      const bool ok = st.rmax() == rmax && monotone && plateau >= 0 && certified && resid <= 1e-8;
      o.pass = o.pass && ok;
      os << "a=" << st.a << " rho " << st.rho(0) << "->" << st.rho(st.rmax()) << " over r=0.." << st.rmax()
         << ", monotone " << (monotone ? "yes" : "NO") << ", plateau of " << N << " from r=" << plateau
         << " (<= " << 2 * m * N << "), relh0 at " << starts.size() << " plateau start(s) k=3 certified " << (certified ? "yes" : "NO") << " residual " << sci(resid) << "; ";
    } catch (const std::exception& e) {
      o.pass = false;
      os << "error: " << e.what() << "; ";
    }
  }
  o.summary = os.str();
  return o;
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  status = pclose(pipe);
  return out;
}

Outcome criterion9(const std::string& cli) {
  Outcome o;
  const std::string cmd = "\"" + cli + "\" identities --seed 42 2>/dev/null";
  int s1 = 0, s2 = 0, s3 = 0;
  const std::string a = capture(cmd, s1);
  const std::string b = capture(cmd, s2);
  const std::string c = capture("FULLERKIT_THREADS=1 \"" + cli + "\" identities --seed 42 --serial 2>/dev/null", s3);
  o.pass = !a.empty() && a == b && a == c && s1 == 0 && s2 == 0 && s3 == 0;
  o.summary = "two runs of `identities --seed 42`: " + std::to_string(a.size()) + " bytes, " +
              (a == b ? "byte-identical" : "DIFFER") + "; serial driver " + (a == c ? "identical" : "DIFFERS") +
              "; exit codes " + std::to_string(s1) + "/" + std::to_string(s2) + "/" + std::to_string(s3);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads();
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Pfaffian identity suite", criterion1},
      {"kernel/corank suite", criterion2},
      {"phi0 consistency", criterion3},
      {"structure lemma check", criterion4},
      {"extremal flow on the Heisenberg benchmark", criterion5},
      {"first-derivative formula", criterion6},
      {"Fuller calculus", criterion7},
      {"mu ladder", criterion8},
      {"determinism", [&] { return criterion9(cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << criteria[i].first
              << "): " << o.summary << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
