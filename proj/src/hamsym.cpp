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

#include "fullerkit/hamsym.hpp"

#include "fullerkit/errors.hpp"

#include <cmath>
#include <string>

namespace fullerkit {

void check_state(const ControlAffineSystem& sys, const ExtremalState& lam) {
  if (lam.q.size() != sys.n() || lam.p.size() != sys.n()) {
    throw ValidationError("state dimension differs from system dimension " +
                          std::to_string(sys.n()));
  }
  if (lam.p.isZero(0.0)) throw ValidationError("covector p must be nonzero");
}

double h_eval(BracketTable& table, const MultiIndex& D, const ExtremalState& lam) {
  return lam.p.dot(evaluate(table.get(D), lam.q));
}

double h_eval(const ControlAffineSystem& sys, const MultiIndex& D, const ExtremalState& lam) {
  check_state(sys, lam);
  return lam.p.dot(evaluate(iterated_bracket(sys, D), lam.q));
}

SkewMatrix goh_matrix(BracketTable& table, const ExtremalState& lam) {
  const int k = table.system().control_count();
  std::vector<double> upper;
  for (int i = 1; i <= k; ++i) {
    for (int j = i + 1; j <= k; ++j) upper.push_back(h_eval(table, {i, j}, lam));
  }
  return SkewMatrix::from_upper(k, upper);
}

SkewMatrix goh_matrix(const ControlAffineSystem& sys, const ExtremalState& lam) {
  check_state(sys, lam);
  BracketTable table(sys);
  return goh_matrix(table, lam);
}

Vector h0I(BracketTable& table, const ExtremalState& lam) {
  const int k = table.system().control_count();
  Vector v(k);
  for (int i = 1; i <= k; ++i) v[i - 1] = h_eval(table, {0, i}, lam);
  return v;
}

Vector h0I(const ControlAffineSystem& sys, const ExtremalState& lam) {
  check_state(sys, lam);
  BracketTable table(sys);
  return h0I(table, lam);
}

Vector hI(BracketTable& table, const ExtremalState& lam) {
  const int k = table.system().control_count();
  Vector v(k);
  for (int i = 1; i <= k; ++i) v[i - 1] = h_eval(table, {i}, lam);
  return v;
}

HamiltonianEvaluator::HamiltonianEvaluator(BracketTable& table, ExtremalState lam,
                                           OpaqueDefinitions* defs)
    : table_(&table), lam_(std::move(lam)), defs_(defs) {}

double HamiltonianEvaluator::h(const MultiIndex& D) { return h_eval(*table_, D, lam_); }

double HamiltonianEvaluator::generator(GenKey key) {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  const GenInfo g = decode(key);
  double v = 0.0;
  if (!g.opaque) {
    v = h(g.word);
  } else {
    if (defs_ == nullptr) throw ValidationError("opaque generator without definitions");
    v = (*this)(defs_->expand(key));
  }
  values_.emplace(key, v);
  return v;
}

double HamiltonianEvaluator::operator()(const BracketPoly& p) {
  return evaluate_poly(p, [this](GenKey k) { return generator(k); });
}

SymbolicOptions pruning_options(BracketTable& table, std::size_t term_budget) {
  SymbolicOptions opts;
  opts.term_budget = term_budget;
  BracketTable* t = &table;
  opts.vanishes = [t](const MultiIndex& D) { return t->get(D).is_zero(); };
  return opts;
}

PolyMatrix goh_symbolic(int m) {
  const int k = 2 * m;
  PolyMatrix H(static_cast<std::size_t>(k), std::vector<BracketPoly>(static_cast<std::size_t>(k)));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i != j) H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = BracketPoly::h({i + 1, j + 1});
    }
  }
  return H;
}

std::vector<BracketPoly> h0I_symbolic(int m) {
  std::vector<BracketPoly> v;
  for (int i = 1; i <= 2 * m; ++i) v.push_back(BracketPoly::h({0, i}));
  return v;
}

double phi0(BracketTable& table, const ExtremalState& lam) {
  const SkewMatrix H = goh_matrix(table, lam);
  const Vector b = h0I(table, lam);
  const Matrix adj = adj_pfaffian(H).dense();
  const double pf = pfaffian(H);
  return b.dot(adj * adj * b) + pf * pf;
}

double phi0(const ControlAffineSystem& sys, const ExtremalState& lam) {
  check_state(sys, lam);
  BracketTable table(sys);
  return phi0(table, lam);
}

BracketPoly phi0_symbolic(int m) {
  if (m < 1) throw ValidationError("m must be at least 1");
  const BracketPoly one = BracketPoly::constant(1.0);
  const PolyMatrix H = goh_symbolic(m);
  const PolyMatrix adj = adj_pfaffian_generic(H, one);
  const std::vector<BracketPoly> b = h0I_symbolic(m);
  const std::size_t k = H.size();
  std::vector<BracketPoly> adj_b(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) adj_b[i] += adj[i][j] * b[j];
  }
  // ⟨adj²b, b⟩ = −‖adj·b‖² since adj is skew.
  BracketPoly result;
  for (std::size_t i = 0; i < k; ++i) result -= adj_b[i] * adj_b[i];
  const BracketPoly pf = pfaffian_generic(H, one);
  result += pf * pf;
  return result;
}

BracketPoly phi_step(int m, const BracketPoly& phi, const SymbolicOptions& opts) {
  const int k = 2 * m;
  const PolyMatrix H = goh_symbolic(m);
  const std::vector<BracketPoly> b = h0I_symbolic(m);
  PolyMatrix Phi(static_cast<std::size_t>(k + 1), std::vector<BracketPoly>(static_cast<std::size_t>(k + 1)));
  for (int i = 0; i < k; ++i) {
    auto& row = Phi[static_cast<std::size_t>(i)];
    row[0] = opts.vanishes ? BracketPoly::h({0, i + 1}, opts) : b[static_cast<std::size_t>(i)];
    for (int j = 0; j < k; ++j) {
      const auto& hij = H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      row[static_cast<std::size_t>(j + 1)] =
          (i == j) ? BracketPoly() : -(opts.vanishes ? BracketPoly::h({i + 1, j + 1}, opts) : hij);
    }
  }
  for (int i = 0; i <= k; ++i) {
    Phi[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = poisson_ad(i, phi, opts);
  }
  return budgeted_determinant(Phi, opts, "phi_step");
}

std::vector<BracketPoly> phi_symbolic(int m, int lmax, const SymbolicOptions& opts) {
  if (lmax < 0) throw ValidationError("lmax must be non-negative");
  std::vector<BracketPoly> out;
  BracketPoly phi = phi0_symbolic(m);
  if (opts.vanishes) {
    BracketPoly pruned;
    for (const auto& [t, c] : phi.terms()) {
      bool zero = false;
      for (const auto& [key, e] : t) zero = zero || opts.vanishes(decode(key).word);
      if (!zero) pruned.add(t, c);
    }
    phi = pruned;
  }
  out.push_back(phi);
  for (int l = 0; l < lmax; ++l) out.push_back(phi_step(m, out.back(), opts));
  return out;
}

std::vector<double> phi_sequence(BracketTable& table, const ExtremalState& lam,
                                 const std::vector<BracketPoly>& symbolic) {
  if (symbolic.empty()) throw ValidationError("empty symbolic ladder");
  const int k = table.system().control_count();
  const SkewMatrix H = goh_matrix(table, lam);
  const Vector b = h0I(table, lam);
  HamiltonianEvaluator eval(table, lam);
  std::vector<double> out{phi0(table, lam)};
  Matrix Phi(k + 1, k + 1);
  Phi.topLeftCorner(k, 1) = b;
  Phi.topRightCorner(k, k) = -H.dense();
  for (std::size_t l = 0; l + 1 < symbolic.size(); ++l) {
    for (int i = 0; i <= k; ++i) Phi(k, i) = eval(poisson_ad(i, symbolic[l]));
    out.push_back(Phi.determinant());
  }
  return out;
}

std::vector<double> phi_sequence(BracketTable& table, const ExtremalState& lam, int lmax,
                                 const SymbolicOptions& opts) {
  const int m = table.system().m();
  std::vector<BracketPoly> symbolic =
      lmax > 0 ? phi_symbolic(m, lmax - 1, opts) : std::vector<BracketPoly>{};
  symbolic.emplace_back();  // only the first lmax entries feed derivatives
  return phi_sequence(table, lam, symbolic);
}

std::vector<double> phi_sequence(const ControlAffineSystem& sys, const ExtremalState& lam,
                                 int lmax) {
  check_state(sys, lam);
  BracketTable table(sys);
  return phi_sequence(table, lam, lmax, pruning_options(table));
}

StructureSplit structure_split(int l, int m, const SymbolicOptions& opts) {
  if (l < 0 || m < 1) throw ValidationError("structure_split needs l >= 0, m >= 1");
  StructureSplit s;
  s.l = l;
  s.m = m;
  s.phi = BracketPoly::opaque(kPhi0Symbol);
  for (int j = 0; j < l; ++j) s.phi = phi_step(m, s.phi, opts);
  const BracketPoly one = BracketPoly::constant(1.0);
  const BracketPoly pf = pfaffian_generic(goh_symbolic(m), one);
  BracketPoly det_power = one;
  for (int j = 0; j < l; ++j) det_power = det_power * pf * pf;
  const MultiIndex zeros(static_cast<std::size_t>(l), 0);
  s.leading = BracketPoly::opaque(kPhi0Symbol, zeros) * det_power;
  s.remainder = s.phi - s.leading;
  const GenKey pure = encode_opaque(kPhi0Symbol, zeros);
  if (s.remainder.contains_generator(pure)) {
    s.violations.push_back("remainder contains " + gen_name(pure));
  }
  for (GenKey key : s.remainder.generators()) {
    const GenInfo g = decode(key);
    if (g.opaque) {
      if (static_cast<int>(g.word.size()) > l) s.violations.push_back("ad-word too long: " + gen_name(key));
    } else if (g.word.size() < 2 || static_cast<int>(g.word.size()) > l + 1 || g.word.back() == 0) {
      s.violations.push_back("unexpected bracket generator " + gen_name(key));
    }
  }
  s.certified = s.violations.empty();
  return s;
}

SingularControl singular_control(const SkewMatrix& H, const Vector& h0i, double tol) {
  if (H.size() != h0i.size()) throw ValidationError("Goh matrix and h0I sizes differ");
  if (H.size() == 0 || even_rank(H, tol).rank < H.size()) {
    throw NumericalError("Goh matrix is numerically singular");
  }
  SingularControl sc;
  sc.u = H.dense().partialPivLu().solve(h0i);
  sc.norm = sc.u.norm();
  sc.feasible = sc.norm <= 1.0 + tol;
  return sc;
}

SingularControl singular_control(const ControlAffineSystem& sys, const ExtremalState& lam,
                                 double tol) {
  check_state(sys, lam);
  BracketTable table(sys);
  return singular_control(goh_matrix(table, lam), h0I(table, lam), tol);
}

KappaGSymbolic kappa_g_symbolic(int m, const std::vector<int>& j0, const SymbolicOptions& opts) {
  const int k = 2 * m;
  const int r = static_cast<int>(j0.size());
  if (r % 2 != 0 || r >= k) throw ValidationError("J0 must have even size below 2m");
  KappaGSymbolic out;
  out.a = m - r / 2;
  out.j0 = j0;
  std::vector<int> rest;
  for (int i = 0; i < k; ++i) {
    bool in = false;
    for (int j : j0) in = in || j == i;
    if (!in) rest.push_back(i);
  }
  out.permutation = j0;
  out.permutation.insert(out.permutation.end(), rest.begin(), rest.end());
  auto hs = [&](int i, int j) {
    return i == j ? BracketPoly() : BracketPoly::h({i + 1, j + 1}, opts);
  };
  const BracketPoly one = BracketPoly::constant(1.0);
  PolyMatrix H1(static_cast<std::size_t>(r), std::vector<BracketPoly>(static_cast<std::size_t>(r)));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) H1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = hs(j0[static_cast<std::size_t>(i)], j0[static_cast<std::size_t>(j)]);
  }
  const BracketPoly pf = pfaffian_generic(H1, one);
  const PolyMatrix adj = adj_pfaffian_generic(H1, one);
  const int c = k - r;
  // adjE = adj(H1)·E, E = H[J0, rest].
  PolyMatrix adjE(static_cast<std::size_t>(r), std::vector<BracketPoly>(static_cast<std::size_t>(c)));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) {
      for (int l = 0; l < r; ++l) {
        adjE[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
            adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
            hs(j0[static_cast<std::size_t>(l)], rest[static_cast<std::size_t>(j)]);
      }
    }
  }
  for (int i = 0; i < c; ++i) {
    BracketPoly kappa;
    for (int l = 0; l < r; ++l) {
      kappa -= BracketPoly::h({0, j0[static_cast<std::size_t>(l)] + 1}, opts) *
               adjE[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
    }
    kappa += BracketPoly::h({0, rest[static_cast<std::size_t>(i)] + 1}, opts) * pf;
    out.kappa.push_back(std::move(kappa));
  }
  out.G.assign(static_cast<std::size_t>(c), std::vector<BracketPoly>(static_cast<std::size_t>(c)));
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < c; ++j) {
      BracketPoly g = pf * hs(rest[static_cast<std::size_t>(i)], rest[static_cast<std::size_t>(j)]);
      for (int l = 0; l < r; ++l) {
        g += hs(j0[static_cast<std::size_t>(l)], rest[static_cast<std::size_t>(i)]) *
             adjE[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
      }
      out.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(g);
    }
  }
  for (int i = 0; i < c; ++i) {
    for (int j = i + 1; j < c; ++j) out.g.push_back(out.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  }
  return out;
}

KappaG kappa_g(const ControlAffineSystem& sys, const ExtremalState& lam, double tol) {
  check_state(sys, lam);
  BracketTable table(sys);
  const SkewMatrix H = goh_matrix(table, lam);
  const Vector b = h0I(table, lam);
  const int m = sys.m();
  const int rank = H.dense().isZero(0.0) ? 0 : even_rank(H, tol).rank;
  if (rank == 2 * m) throw NumericalError("Goh matrix has full rank; use singular_control");
  const BlockDecomposition dec = block_decompose_at_rank(H, rank / 2, tol);
  KappaG out;
  out.a = m - rank / 2;
  out.permutation = dec.permutation;
  out.j0 = dec.j0;
  for (const Vector& v : kernel_basis(H, dec)) out.kappa.push_back(b.dot(v));
  Matrix G = dec.pf_a1 * dec.a3.dense();
  if (rank > 0) G += dec.a2.transpose() * adj_pfaffian(dec.a1).dense() * dec.a2;
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < G.cols(); ++j) out.g.push_back(G(i, j));
  }
  return out;
}

}  // namespace fullerkit
