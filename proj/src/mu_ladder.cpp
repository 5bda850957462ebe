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

#include "fullerkit/mu_ladder.hpp"

#include "fullerkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace fullerkit {

namespace {

Matrix evaluate_matrix(HamiltonianEvaluator& eval, const PolyMatrix& S, int cols) {
  Matrix out(static_cast<Eigen::Index>(S.size()), cols);
  for (std::size_t i = 0; i < S.size(); ++i) {
    for (int j = 0; j < cols; ++j) out(static_cast<Eigen::Index>(i), j) = eval(S[i][static_cast<std::size_t>(j)]);
  }
  return out;
}

PolyMatrix stagnant_matrix(const std::vector<BracketPoly>& V, const PolyMatrix& S,
                           const std::vector<int>& J, const BracketPoly& ad0,
                           const std::vector<BracketPoly>& adI) {
  const std::size_t rho = V.size();
  PolyMatrix St(rho + 1, std::vector<BracketPoly>(rho + 1));
  for (std::size_t i = 0; i < rho; ++i) {
    St[i][0] = V[i];
    for (std::size_t c = 0; c < J.size(); ++c) St[i][c + 1] = S[i][static_cast<std::size_t>(J[c])];
  }
  St[rho][0] = ad0;
  for (std::size_t c = 0; c < J.size(); ++c) St[rho][c + 1] = adI[static_cast<std::size_t>(J[c])];
  return St;
}

double column_scale(const Matrix& S) {
  if (S.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(S);
  return std::max(1.0, svd.singularValues()[0]);
}

}  // namespace

std::vector<int> lexmin_columns(const Matrix& S, double tol) {
  const int rows = static_cast<int>(S.rows());
  if (rows == 0) return {};
  const double scale = column_scale(S);
  for (const auto& cols : lex_subsets(static_cast<int>(S.cols()), rows)) {
    Matrix Z(rows, rows);
    for (int c = 0; c < rows; ++c) Z.col(c) = S.col(cols[static_cast<std::size_t>(c)]);
    Eigen::JacobiSVD<Matrix> svd(Z);
    if (svd.singularValues()[rows - 1] > tol * scale) return cols;
  }
  throw NumericalError("no invertible column extraction of size " + std::to_string(rows));
}

MuState mu_sequence(BracketTable& table, const ExtremalState& base_in, int rmax,
                    const MuOptions& opts) {
  const ControlAffineSystem& sys = table.system();
  check_state(sys, base_in);
  if (rmax < 0) throw ValidationError("rmax must be non-negative");
  const int m = sys.m();
  const int k = 2 * m;
  MuState st;
  st.m = m;
  st.basepoint = {base_in.q, base_in.p / base_in.p.norm()};
  const SymbolicOptions sopts = pruning_options(table, opts.term_budget);
  HamiltonianEvaluator eval(table, st.basepoint);

  const SkewMatrix H = goh_matrix(table, st.basepoint);
  // Unit covector: singular values are compared against max(1, σ_max) like the branch test.
  const EvenRank er = even_rank(H, opts.tol);
  int rank = 0;
  const double floor = opts.tol * std::max(1.0, er.singular_values.empty() ? 0.0 : er.singular_values[0]);
  for (double sv : er.singular_values) rank += sv > floor ? 1 : 0;
  rank -= rank % 2;
  if (rank == k) throw NumericalError("Goh matrix has full rank at the basepoint");
  st.a = m - rank / 2;
  st.rho0 = rank;
  const BlockDecomposition dec = block_decompose_at_rank(H, rank / 2, opts.tol);
  st.j0 = dec.j0;
  st.kg = kappa_g_symbolic(m, dec.j0, sopts);

  PolyMatrix S;
  std::vector<BracketPoly> V;
  for (int l : dec.j0) {
    std::vector<BracketPoly> row(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      if (i != l) row[static_cast<std::size_t>(i)] = BracketPoly::h({i + 1, l + 1}, sopts);
    }
    S.push_back(std::move(row));
    V.push_back(BracketPoly::h({0, l + 1}, sopts));
  }
  PolyMatrix So = S;
  std::vector<BracketPoly> Vo = V;

  int rho = rank;
  std::vector<int> J = dec.j0;
  st.mu.push_back(st.kg.g.at(0));
  const BracketPoly one = BracketPoly::constant(1.0);

  for (int r = 0;; ++r) {
    MuStep step;
    step.r = r;
    step.rho = rho;
    step.J = J;
    step.mu_value = eval(st.mu.back());
    st.S.push_back(S);
    st.V.push_back(V);
    st.S_opaque.push_back(So);
    st.V_opaque.push_back(Vo);
    if (r == rmax) {
      st.steps.push_back(step);
      break;
    }
    const BracketPoly& mu = st.mu.back();
    std::vector<BracketPoly> adI(static_cast<std::size_t>(k));
    std::vector<BracketPoly> adI_opq(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      adI[static_cast<std::size_t>(i)] = poisson_ad(i + 1, mu, sopts);
      adI_opq[static_cast<std::size_t>(i)] = BracketPoly::opaque(r, {i + 1});
    }
    const BracketPoly ad0 = poisson_ad(0, mu, sopts);

    bool increase = false;
    if (rho < k) {
      PolyMatrix T = S;
      T.push_back(adI);
      const Matrix Tn = evaluate_matrix(eval, T, k);
      Eigen::JacobiSVD<Matrix> svd(Tn);
      const auto& sv = svd.singularValues();
      const double ratio = sv[rho] / std::max(1.0, sv[0]);
      step.sigma_ratio = ratio;
      if (ratio >= opts.margin * opts.tol) {
        increase = true;
      } else if (ratio > opts.tol) {
        step.ambiguous = true;
        st.any_ambiguous = true;
      }
    }
    step.increased = increase;
    st.steps.push_back(step);

    if (increase) {
      S.push_back(adI);
      V.push_back(ad0);
      So.push_back(adI_opq);
      Vo.push_back(BracketPoly::opaque(r, {0}));
      ++rho;
      const int idx = rho - st.rho0 - 1;
      if (idx >= static_cast<int>(st.kg.kappa.size())) {
        throw NumericalError("kappa index exceeds 2a");
      }
      st.mu.push_back(st.kg.kappa[static_cast<std::size_t>(idx)]);
    } else {
      st.mu.push_back(budgeted_determinant(stagnant_matrix(V, S, J, ad0, adI), sopts, "mu_sequence"));
    }
    J = lexmin_columns(evaluate_matrix(eval, S, k), opts.tol);
  }
  return st;
}

MuState mu_sequence(const ControlAffineSystem& sys, const ExtremalState& base, int rmax,
                    const MuOptions& opts) {
  BracketTable table(sys);
  return mu_sequence(table, base, rmax, opts);
}

std::vector<int> plateau_starts(const MuState& state, int len) {
  std::vector<int> out;
  const int rmax = state.rmax();
  for (int r = 0; r + len <= rmax; ++r) {
    if (r > 0 && state.rho(r - 1) >= state.rho(r)) continue;
    bool flat = true;
    for (int j = 1; j <= len; ++j) flat = flat && state.rho(r + j) == state.rho(r);
    if (flat) out.push_back(r);
  }
  return out;
}

Relh0Report relh0_check(BracketTable& table, const MuState& state, int r, int k, int samples,
                        std::uint64_t seed) {
  if (r < 0 || k < 0 || r + k > state.rmax()) throw ValidationError("relh0: r+k beyond ladder");
  if (r > 0 && state.rho(r - 1) >= state.rho(r)) {
    throw ValidationError("relh0: need r = 0 or a rank increase into r");
  }
  for (int j = 1; j <= k; ++j) {
    if (state.rho(r + j) != state.rho(r)) throw ValidationError("relh0: rho not constant on [r, r+k]");
  }
  const ControlAffineSystem& sys = table.system();
  const int n = sys.n();
  const BracketPoly one = BracketPoly::constant(1.0);
  const auto rr = static_cast<std::size_t>(r);
  const PolyMatrix& So = state.S_opaque[rr];
  const std::vector<BracketPoly>& Vo = state.V_opaque[rr];
  const std::vector<int>& Jr = state.steps[rr].J;
  const int rho = state.rho(r);

  PolyMatrix Z(static_cast<std::size_t>(rho), std::vector<BracketPoly>(static_cast<std::size_t>(rho)));
  for (int i = 0; i < rho; ++i) {
    for (int c = 0; c < rho; ++c) Z[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = So[static_cast<std::size_t>(i)][static_cast<std::size_t>(Jr[static_cast<std::size_t>(c)])];
  }
  const BracketPoly detZ = determinant_generic(Z, one);
  const double sign_step = (rho % 2 == 0) ? 1.0 : -1.0;

  SymbolicOptions sopts = pruning_options(table);
  OpaqueDefinitions defs(sopts);
  for (int s = 0; s <= r; ++s) defs.define(s, state.mu[static_cast<std::size_t>(s)]);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<ExtremalState> probes;
  for (int s = 0; s < samples; ++s) {
    ExtremalState lam{Vector(n), Vector(n)};
    for (int i = 0; i < n; ++i) lam.q[i] = unif(rng);
    for (int i = 0; i < n; ++i) lam.p[i] = unif(rng);
    lam.p /= lam.p.norm();
    probes.push_back(std::move(lam));
  }

  Relh0Report rep;
  rep.r = r;
  rep.k = k;
  rep.certified = true;
  BracketPoly mu_hat = BracketPoly::opaque(r);
  BracketPoly det_power = one;
  double sign = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) {
      const std::vector<int>& Jj = state.steps[static_cast<std::size_t>(r + j - 1)].J;
      std::vector<BracketPoly> adI(static_cast<std::size_t>(2 * sys.m()));
      for (int i = 0; i < 2 * sys.m(); ++i) adI[static_cast<std::size_t>(i)] = poisson_ad(i + 1, mu_hat);
      mu_hat = budgeted_determinant(stagnant_matrix(Vo, So, Jj, poisson_ad(0, mu_hat), adI), sopts, "relh0_check");
      det_power = det_power * detZ;
      sign *= sign_step;
    }
    Relh0Term term;
    term.j = j;
    const MultiIndex zeros(static_cast<std::size_t>(j), 0);
    term.leading = BracketPoly::opaque(r, zeros) * det_power * sign;
    term.remainder = mu_hat - term.leading;
    const GenKey pure = encode_opaque(r, zeros);
    if (term.remainder.contains_generator(pure)) {
      term.violations.push_back("remainder contains " + gen_name(pure));
    }
    for (GenKey key : term.remainder.generators()) {
      const GenInfo g = decode(key);
      if (g.opaque && (g.symbol > r || static_cast<int>(g.word.size()) > j)) {
        term.violations.push_back("variable outside the allowed set: " + gen_name(key));
      }
    }
    term.certified = term.violations.empty();
    rep.certified = rep.certified && term.certified;

    const BracketPoly& flat = state.mu[static_cast<std::size_t>(r + j)];
    for (const ExtremalState& lam : probes) {
      HamiltonianEvaluator eval(table, lam, &defs);
      const double target = eval(flat);
      const double lead = eval(term.leading);
      const double rem = eval(term.remainder);
      const double scale = std::max({std::abs(target), std::abs(lead), std::abs(rem), 1e-300});
      const double res = (target == 0.0 && lead + rem == 0.0) ? 0.0 : std::abs(target - (lead + rem)) / scale;
      term.max_residual = std::max(term.max_residual, res);
    }
    rep.max_residual = std::max(rep.max_residual, term.max_residual);
    rep.terms.push_back(std::move(term));
  }
  return rep;
}

}  // namespace fullerkit
