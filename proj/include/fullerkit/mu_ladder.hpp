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

#include "fullerkit/hamsym.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fullerkit {

struct MuStep {
  int r = 0;
  int rho = 0;
  std::vector<int> J;      // 0-based column indices into {h_1,…,h_2m}
  bool increased = false;  // branch taken from r to r+1
  bool ambiguous = false;  // borderline singular value, stagnant branch forced
  double sigma_ratio = 0.0;
  double mu_value = 0.0;   // μ_r at the basepoint
};

/// The inductive (ρ_r, J_r, μ_r) machine with all rank decisions frozen at the
/// basepoint. Rows of S are ({h_i, x})_{i=1..2m} for x ∈ {h_ℓ : ℓ ∈ J0} ∪ {μ_s},
/// so (1, u) annihilates [V S] along extremals.
struct MuState {
  int m = 0;
  int a = 0;
  int rho0 = 0;
  ExtremalState basepoint;
  std::vector<int> j0;
  KappaGSymbolic kg;
  std::vector<MuStep> steps;       // steps[r] describes index r
  std::vector<BracketPoly> mu;     // flat μ_0..μ_rmax
  std::vector<PolyMatrix> S;       // S_r (flat)
  std::vector<std::vector<BracketPoly>> V;
  std::vector<PolyMatrix> S_opaque;  // same rows with μ_s replaced by opaque X_s
  std::vector<std::vector<BracketPoly>> V_opaque;
  bool any_ambiguous = false;

  int rmax() const { return static_cast<int>(mu.size()) - 1; }
  int rho(int r) const { return steps[static_cast<std::size_t>(r)].rho; }
};

struct MuOptions {
  double tol = 1e-10;
  double margin = 1e3;  // rank increases need σ ratio above margin·tol
  std::size_t term_budget = 1'000'000;
};

MuState mu_sequence(BracketTable& table, const ExtremalState& base, int rmax,
                    const MuOptions& opts = {});
MuState mu_sequence(const ControlAffineSystem& sys, const ExtremalState& base, int rmax,
                    const MuOptions& opts = {});

/// Lexicographically minimal column set of size rows(S) with invertible
/// extraction, or empty when S has no rows.
std::vector<int> lexmin_columns(const Matrix& S, double tol);

struct Relh0Term {
  int j = 0;
  BracketPoly leading;    // (−1)^{ρ_r j}·ad_{h0}^j(X_r)·det(Z_r)^j
  BracketPoly remainder;  // P_j in opaque form
  bool certified = false;
  std::vector<std::string> violations;
  double max_residual = 0.0;
};

struct Relh0Report {
  int r = 0;
  int k = 0;
  std::vector<Relh0Term> terms;
  double max_residual = 0.0;
  bool certified = false;
};

/// Checks μ_{r+j} = ±ad_{h0}^j(μ_r)·det(Z_r)^j + P_j for j = 0..k.
Relh0Report relh0_check(BracketTable& table, const MuState& state, int r, int k, int samples,
                        std::uint64_t seed);

/// r values starting a plateau ρ_r = … = ρ_{r+len}; r = 0 or ρ_{r−1} < ρ_r.
std::vector<int> plateau_starts(const MuState& state, int len);

}  // namespace fullerkit
