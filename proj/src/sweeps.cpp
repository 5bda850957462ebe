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

#include "fullerkit/sweeps.hpp"

#include "fullerkit/errors.hpp"
#include "fullerkit/hamsym.hpp"
#include "fullerkit/skewalg.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace fullerkit {

namespace {

struct Case {
  double stat = 0.0;  // residual divided by its tolerance; ≤ 1 passes
  bool ok = true;
  bool skipped = false;
  std::string note;
};

template <class F>
std::vector<Case> run_indexed(int count, bool parallel, F&& f) {
  std::vector<Case> out(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (int i = 0; i < count; ++i) {
    Case c;
    try {
      c = f(i);
    } catch (const std::exception& e) {
      c.ok = false;
      c.stat = std::numeric_limits<double>::infinity();
      c.note = std::string("exception: ") + e.what();
    }
    if (!c.ok && c.note.find("case") == std::string::npos) c.note = "case " + std::to_string(i) + ": " + c.note;
    out[static_cast<std::size_t>(i)] = std::move(c);
  }
  return out;
}

SuiteResult reduce(std::string name, double tolerance, const std::vector<Case>& cases) {
  SuiteResult r;
  r.name = std::move(name);
  r.tolerance = tolerance;
  for (const Case& c : cases) {
    if (c.skipped) {
      ++r.skipped;
      continue;
    }
    ++r.cases;
    r.worst = std::max(r.worst, c.stat * tolerance);
    if (!c.ok) {
      ++r.failures;
      if (r.detail.empty()) r.detail = c.note;
    }
  }
  r.pass = r.failures == 0 && r.cases > 0;
  if (r.cases == 0 && r.detail.empty()) r.detail = "no cases ran";
  return r;
}

Case check(double residual, double tol, const std::string& what) {
  Case c;
  c.stat = residual / tol;
  c.ok = residual <= tol;
  if (!c.ok) {
    std::ostringstream os;
    os.precision(17);
    os << what << " residual " << residual << " > " << tol;
    c.note = os.str();
  }
  return c;
}

Case worse(Case a, const Case& b) {
  if (!b.ok && a.ok) return b;
  if (a.ok == b.ok && b.stat > a.stat) return b;
  return a;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Matrix random_skew(int k, std::mt19937_64& rng) {
  Matrix a = Matrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      a(i, j) = uniform(rng, -1.0, 1.0);
      a(j, i) = -a(i, j);
    }
  }
  return a;
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

PolyVectorField random_integer_field(int n, int degree, std::mt19937_64& rng) {
  std::vector<std::vector<Monomial>> comps(static_cast<std::size_t>(n));
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, degree), var(0, n - 1), count(0, 3);
  for (auto& c : comps) {
    for (int t = count(rng); t > 0; --t) {
      Monomial mo{static_cast<double>(coef(rng)), Exponents(static_cast<std::size_t>(n), 0)};
      for (int d = deg(rng); d > 0; --d) ++mo.exponents[static_cast<std::size_t>(var(rng))];
      c.push_back(mo);
    }
  }
  return PolyVectorField::from_monomials(static_cast<std::size_t>(n), comps);
}

ExtremalState random_state(int n, std::mt19937_64& rng) {
  ExtremalState lam{Vector(n), Vector(n)};
  for (int i = 0; i < n; ++i) {
    lam.q(i) = uniform(rng, -0.5, 0.5);
    lam.p(i) = uniform(rng, -1.0, 1.0);
  }
  return lam;
}

}  // namespace

int configure_threads() {
  if (const char* env = std::getenv("FULLERKIT_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) omp_set_num_threads(t);
  }
  return omp_get_max_threads();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t x = seed ^ (stream * 0x9e3779b97f4a7c15ULL) ^ (index * 0xd1b54a32d192ed03ULL);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ControlAffineSystem random_system(int n, int m, int degree, std::mt19937_64& rng, double amplitude) {
  std::vector<PolyVectorField> fields;
  std::uniform_int_distribution<int> deg(1, degree), var(0, n - 1);
  for (int f = 0; f <= 2 * m; ++f) {
    std::vector<std::vector<Monomial>> comps(static_cast<std::size_t>(n));
    const int axis = f == 0 ? n - 1 : f - 1;
    comps[static_cast<std::size_t>(axis)].push_back({1.0, Exponents(static_cast<std::size_t>(n), 0)});
    for (auto& c : comps) {
      for (int t = 0; t < 2; ++t) {
        Monomial mo{uniform(rng, -amplitude, amplitude), Exponents(static_cast<std::size_t>(n), 0)};
        for (int d = deg(rng); d > 0; --d) ++mo.exponents[static_cast<std::size_t>(var(rng))];
        c.push_back(mo);
      }
    }
    fields.push_back(PolyVectorField::from_monomials(static_cast<std::size_t>(n), comps));
  }
  return ControlAffineSystem(n, m, std::move(fields));
}

Matrix random_low_rank_skew(int k, int m0, std::mt19937_64& rng) {
  Matrix a = Matrix::Zero(k, k);
  for (int i = 0; i < m0; ++i) {
    Vector x(k), y(k);
    for (int j = 0; j < k; ++j) {
      x(j) = uniform(rng, -1.0, 1.0);
      y(j) = uniform(rng, -1.0, 1.0);
    }
    a += x * y.transpose() - y * x.transpose();
  }
  return (a - a.transpose()) / 2.0;
}

SuiteResult pfaffian_suite(int size, const SweepOptions& opts) {
  constexpr double tol = 1e-9;
  auto cases = run_indexed(opts.samples, opts.parallel, [&](int i) {
    std::mt19937_64 rng(mix_seed(opts.seed, 100 + static_cast<std::uint64_t>(size), static_cast<std::uint64_t>(i)));
    const SkewMatrix A = SkewMatrix::from_dense(random_skew(size, rng));
    const double pf = pfaffian(A);
    const double det = A.dense().determinant();
    Case c = check(std::abs(pf * pf - det) / std::max(std::abs(det), 1e-300), tol, "Pf^2 = det");
    Matrix adj = adj_pfaffian(A).dense();
    if (opts.mutate_adj_sign) adj = -adj;
    const Matrix r = adj * A.dense() - pf * Matrix::Identity(size, size);
    c = worse(c, check(r.norm() / ((1.0 + std::abs(pf)) * A.dense().norm()), tol, "adj*A = Pf*Id"));
    return c;
  });
  return reduce("pfaffian_identities_k" + std::to_string(size), tol, cases);
}

SuiteResult kernel_suite(int size, const SweepOptions& opts) {
  constexpr double tol = 1e-8;
  auto cases = run_indexed(opts.samples, opts.parallel, [&](int i) {
    std::mt19937_64 rng(mix_seed(opts.seed, 200 + static_cast<std::uint64_t>(size), static_cast<std::uint64_t>(i)));
    const int half = size / 2;
    const int m0 = half <= 1 ? 1 : 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(half));
    const SkewMatrix A = SkewMatrix::from_dense(random_low_rank_skew(size, std::min(m0, half), rng));
    const BlockDecomposition dec = block_decompose(A);
    Case c;
    if (dec.m0 != std::min(m0, half)) {
      c.ok = false;
      c.stat = std::numeric_limits<double>::infinity();
      c.note = "rank " + std::to_string(2 * dec.m0) + " != " + std::to_string(2 * m0);
      return c;
    }
    const auto basis = kernel_basis(A, dec);
    if (static_cast<int>(basis.size()) != size - 2 * dec.m0) {
      c.ok = false;
      c.stat = std::numeric_limits<double>::infinity();
      c.note = "kernel size " + std::to_string(basis.size());
      return c;
    }
    const double norm_a = spectral_norm(A.dense());
    Matrix V(size, static_cast<int>(basis.size()));
    for (std::size_t b = 0; b < basis.size(); ++b) {
      V.col(static_cast<int>(b)) = basis[b];
      c = worse(c, check((A.dense() * basis[b]).norm() / (norm_a * basis[b].norm()), tol, "A v"));
    }
    c = worse(c, check(parskew_residual(dec), tol, "parskew"));
    if (!basis.empty()) {
      const Vector sv = Eigen::JacobiSVD<Matrix>(V).singularValues();
      if (!(sv(sv.size() - 1) > 1e-10 * sv(0))) {
        c.ok = false;
        c.note = "kernel vectors dependent";
      }
    }
    return c;
  });
  return reduce("kernel_corank_k" + std::to_string(size), tol, cases);
}

SuiteResult lexmin_suite(const SweepOptions& opts) {
  auto cases = run_indexed(opts.samples, opts.parallel, [&](int i) {
    std::mt19937_64 rng(mix_seed(opts.seed, 300, static_cast<std::uint64_t>(i)));
    Vector x(4), y(4);
    for (int j = 0; j < 4; ++j) {
      const bool zero = uniform(rng, 0.0, 1.0) < 0.35;
      x(j) = zero ? 0.0 : uniform(rng, -1.0, 1.0);
      y(j) = zero ? 0.0 : uniform(rng, -1.0, 1.0);
    }
    const Matrix dense = x * y.transpose() - y * x.transpose();
    Case c;
    if (dense.norm() == 0.0) {
      c.skipped = true;
      return c;
    }
    const SkewMatrix A = SkewMatrix::from_dense((dense - dense.transpose()) / 2.0);
    const BlockDecomposition dec = block_decompose(A);
    std::vector<int> expect;
    for (const auto& s : lex_subsets(4, 2)) {
      if (std::abs(A(s[0], s[1])) > kDefaultRankTol * A.dense().norm()) {
        expect = s;
        break;
      }
    }
    if (dec.j0 != expect) {
      c.ok = false;
      c.stat = std::numeric_limits<double>::infinity();
      c.note = "J0 differs from brute force";
    }
    return c;
  });
  return reduce("lexmin_j0_k4", 0.0, cases);
}

SuiteResult bracket_suite(const SweepOptions& opts) {
  const int count = std::max(1, opts.samples / 10);
  auto cases = run_indexed(count, opts.parallel, [&](int i) {
    std::mt19937_64 rng(mix_seed(opts.seed, 400, static_cast<std::uint64_t>(i)));
    const int n = 1 + static_cast<int>(rng() % 5);
    const PolyVectorField f = random_integer_field(n, 3, rng);
    const PolyVectorField g = random_integer_field(n, 3, rng);
    const PolyVectorField h = random_integer_field(n, 3, rng);
    Case c;
    auto expect_zero = [&](const PolyVectorField& v, const char* what) {
      if (!v.is_zero()) {
        c.ok = false;
        c.stat = std::numeric_limits<double>::infinity();
        c.note = what;
      }
    };
    expect_zero(lie_bracket(f, g) + lie_bracket(g, f), "antisymmetry");
    expect_zero(lie_bracket(f, lie_bracket(g, h)) + lie_bracket(g, lie_bracket(h, f)) +
                    lie_bracket(h, lie_bracket(f, g)),
                "Jacobi identity");
    expect_zero(lie_bracket(f * 2.0 + g, h) - lie_bracket(f, h) * 2.0 - lie_bracket(g, h), "bilinearity");
    const int a = static_cast<int>(rng() % 5), b = static_cast<int>(rng() % 5);
    if (!(poisson_ad(a, BracketPoly::h({b})) + poisson_ad(b, BracketPoly::h({a}))).is_zero()) {
      c.ok = false;
      c.note = "Poisson antisymmetry";
    }
    return c;
  });
  return reduce("bracket_identities", 0.0, cases);
}

SuiteResult phi0_suite(const SweepOptions& opts) {
  constexpr double tol = 1e-9;
  auto cases = run_indexed(opts.samples, opts.parallel, [&](int i) {
    std::mt19937_64 rng(mix_seed(opts.seed, 500, static_cast<std::uint64_t>(i)));
    const int m = 1 + i % 2;
    const int n = 2 * m + 1 + static_cast<int>(rng() % 2);
    const ControlAffineSystem sys = random_system(n, m, 2, rng, 1.0);
    BracketTable table(sys);
    const ExtremalState lam = random_state(n, rng);
    const SkewMatrix H = goh_matrix(table, lam);
    Case c;
    if (even_rank(H, 1e-6).rank < H.size()) {
      c.skipped = true;
      return c;
    }
    const Vector b = h0I(table, lam);
    const double det = H.dense().determinant();
    const Vector u = H.dense().fullPivLu().solve(b);
    const double expected = det * (1.0 - u.squaredNorm());
    const double got = phi0(table, lam);
    const double scale = std::abs(det) * (1.0 + u.squaredNorm());
    return check(std::abs(got - expected) / scale, tol, "phi0 identity");
  });
  return reduce("phi0_identity", tol, cases);
}

SuiteResult phi_consistency_suite(const SweepOptions& opts) {
  constexpr double tol = 1e-8;
  constexpr int lmax = 2;
  const int count = std::max(1, opts.samples / 20);
  auto cases = run_indexed(count, opts.parallel, [&](int i) {
    std::mt19937_64 rng(mix_seed(opts.seed, 600, static_cast<std::uint64_t>(i)));
    const int n = 3 + i % 2;
    const ControlAffineSystem sys = random_system(n, 1, 2, rng, 1.0);
    BracketTable table(sys);
    const auto symbolic = phi_symbolic(1, lmax, pruning_options(table));
    Case c;
    for (int s = 0; s < 5; ++s) {
      const ExtremalState lam = random_state(n, rng);
      const auto numeric = phi_sequence(table, lam, symbolic);
      HamiltonianEvaluator eval(table, lam);
      for (int l = 0; l <= lmax; ++l) {
        const double direct = eval(symbolic[static_cast<std::size_t>(l)]);
        const double scale = std::max({1.0, std::abs(direct), std::abs(numeric[static_cast<std::size_t>(l)])});
        c = worse(c, check(std::abs(direct - numeric[static_cast<std::size_t>(l)]) / scale, tol,
                           "phi_" + std::to_string(l) + " symbolic vs numeric"));
      }
    }
    return c;
  });
  return reduce("phi_symbolic_numeric", tol, cases);
}

SuiteResult fuller_order_suite(int max_order, int seeds, const SweepOptions& opts) {
  const int count = (max_order + 1) * seeds;
  auto cases = run_indexed(count, opts.parallel, [&](int i) {
    const int k = i / seeds;
    const CascadeSet s = make_cascade(k, mix_seed(opts.seed, 700, static_cast<std::uint64_t>(i)));
    const int a = fuller_order(s);
    const int b = fuller_order_by_derivation(s);
    Case c;
    if (a != k || b != k) {
      c.ok = false;
      c.stat = std::numeric_limits<double>::infinity();
      c.note = "k=" + std::to_string(k) + " order " + std::to_string(a) + " / derivation " + std::to_string(b);
    }
    return c;
  });
  return reduce("fuller_make_cascade_order", 0.0, cases);
}

SuiteResult strata_suite(int seeds, const SweepOptions& opts) {
  auto cases = run_indexed(5 * seeds, opts.parallel, [&](int i) {
    const int k = i % 5;
    const CascadeSet s = make_cascade(k, mix_seed(opts.seed, 800, static_cast<std::uint64_t>(i)));
    const auto st = strata(s);
    Case c;
    auto fail = [&](const std::string& what) {
      c.ok = false;
      c.stat = std::numeric_limits<double>::infinity();
      c.note = what;
    };
    if (static_cast<int>(st.size()) != k + 1) fail("stratum count");
    for (std::size_t j = 0; j < st.size() && c.ok; ++j) {
      if (st[j].empty()) fail("empty stratum " + std::to_string(j));
      if (!core(st[j]).empty()) fail("stratum " + std::to_string(j) + " has accumulation points");
    }
    for (const Rational& x : probe_points(s, 2)) {
      int hits = 0;
      for (const auto& part : st) hits += part.contains(x) ? 1 : 0;
      if (hits != (s.contains(x) ? 1 : 0)) {
        fail("strata not a partition at " + format_rational(x));
        break;
      }
    }
    return c;
  });
  return reduce("fuller_strata_partition", 0.0, cases);
}

SuiteResult fuller_lemma_suite(int instances, const SweepOptions& opts) {
  auto cases = run_indexed(instances, opts.parallel, [&](int i) {
    std::mt19937_64 rng(mix_seed(opts.seed, 900, static_cast<std::uint64_t>(i)));
    const int k = 1 + i % 4;
    Case c;
    // Redraw until the removed set has order below k; only such pairs are instances.
    for (int attempt = 0; attempt < 16; ++attempt) {
      const CascadeSet xi = make_cascade(k, rng());
      const auto st = strata(xi);
      std::vector<CascadeSet> parts;
      const int budget = static_cast<int>(rng() % static_cast<std::uint64_t>(k));
      for (int j = 0; j <= k; ++j) {
        if (rng() % 2 == 0 && static_cast<int>(parts.size()) < budget) parts.push_back(st[static_cast<std::size_t>(j)]);
      }
      const auto probes = probe_points(xi, 2);
      std::vector<Rational> pts;
      for (int p = static_cast<int>(rng() % 7); p > 0; --p) pts.push_back(probes[rng() % probes.size()]);
      parts.push_back(CascadeSet::points(pts));
      const CascadeSet frak = CascadeSet::unite(parts);
      const int j = fuller_order(frak);
      if (!(k > j && j >= 0)) continue;
      const int got = fuller_order(difference(xi, frak));
      c.stat = static_cast<double>(k - j - 1 - got);
      if (got < k - j - 1) {
        c.ok = false;
        c.note = "k=" + std::to_string(k) + " j=" + std::to_string(j) + ": order(Xi \\ S) = " +
                 std::to_string(got) + " < " + std::to_string(k - j - 1);
      }
      return c;
    }
    c.skipped = true;
    return c;
  });
  SuiteResult r = reduce("fuller_lemma", 0.0, cases);
  r.worst = -1e300;
  for (const Case& c : cases) {
    if (!c.skipped) r.worst = std::max(r.worst, c.stat);
  }
  return r;
}

CascadeSet random_union(int k, int j, std::mt19937_64& rng) {
  CascadeSet acc;
  for (int s = 0; s < k; ++s) {
    const int order = static_cast<int>(rng() % static_cast<std::uint64_t>(j + 1));
    CascadeSet part = make_cascade(order, rng());
    std::vector<Rational> anchors;
    if (!acc.empty() && rng() % 4 != 0) {
      const auto st = strata(acc);
      for (const Rational& x : probe_points(acc, 2)) {
        if (st.front().contains(x)) anchors.push_back(x);
      }
    }
    if (anchors.empty()) {
      part = part.affine(Rational(2 * s), Rational(1));
    } else {
      // Plant the new set's accumulation structure on an isolated point.
      const Rational x = anchors[static_cast<std::size_t>(rng() % anchors.size())];
      const Rational pivot = part.is_cascade() ? part.as_cascade().target : part.hull()->first;
      // Shrink until the planted copy fits in the isolating neighbourhood of x.
      bool planted = false;
      for (int shift = 48; shift <= 384 && !planted; shift *= 2) {
        const Rational scale(1, Integer(1) << shift);
        try {
          acc = CascadeSet::unite({acc, part.affine(x - scale * pivot, scale)});
          planted = true;
        } catch (const UnsupportedOverlap&) {
        }
      }
      if (planted) continue;
      part = part.affine(Rational(2 * s), Rational(1));
    }
    acc = CascadeSet::unite({acc, part});
  }
  return acc;
}

SuiteResult fuller_corollary_suite(int instances, const SweepOptions& opts) {
  auto cases = run_indexed(instances, opts.parallel, [&](int i) {
    std::mt19937_64 rng(mix_seed(opts.seed, 1000, static_cast<std::uint64_t>(i)));
    const int k = 1 + i % 3;
    const int j = static_cast<int>((i / 3) % 4);
    const CascadeSet u = random_union(k, j, rng);
    const int got = fuller_order(u);
    Case c;
    c.stat = static_cast<double>(got - k * (j + 1));
    if (got > k * (j + 1)) {
      c.ok = false;
      c.note = "order " + std::to_string(got) + " > " + std::to_string(k * (j + 1));
    }
    return c;
  });
  SuiteResult r = reduce("fuller_corollary", 0.0, cases);
  r.worst = -1e300;
  for (const Case& c : cases) r.worst = std::max(r.worst, c.stat);
  return r;
}

std::vector<SuiteResult> run_identities(const SweepOptions& opts) {
  std::vector<SuiteResult> out;
  for (int k : opts.sizes) {
    if (k < 2 || k % 2 != 0) throw ValidationError("sizes must be positive even integers");
    out.push_back(pfaffian_suite(k, opts));
  }
  for (int k : opts.sizes) {
    if (k <= 8) out.push_back(kernel_suite(k, opts));
  }
  if (std::find(opts.sizes.begin(), opts.sizes.end(), 4) != opts.sizes.end()) out.push_back(lexmin_suite(opts));
  out.push_back(bracket_suite(opts));
  out.push_back(phi0_suite(opts));
  out.push_back(phi_consistency_suite(opts));
  out.push_back(fuller_order_suite(4, 100, opts));
  out.push_back(strata_suite(20, opts));
  out.push_back(fuller_lemma_suite(500, opts));
  out.push_back(fuller_corollary_suite(500, opts));
  return out;
}

}  // namespace fullerkit
