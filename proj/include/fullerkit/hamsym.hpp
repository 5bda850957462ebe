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

#include "fullerkit/bracket_poly.hpp"
#include "fullerkit/ring_algebra.hpp"
#include "fullerkit/skewalg.hpp"
#include "fullerkit/vecfield.hpp"

#include <map>
#include <vector>

namespace fullerkit {

struct ExtremalState {
  Vector q;
  Vector p;
};

/// Throws ValidationError on dimension mismatch or p = 0.
void check_state(const ControlAffineSystem& sys, const ExtremalState& lam);

using PolyMatrix = std::vector<std::vector<BracketPoly>>;

/// h_D(λ) = ⟨p, f_D(q)⟩.
double h_eval(const ControlAffineSystem& sys, const MultiIndex& D, const ExtremalState& lam);
double h_eval(BracketTable& table, const MultiIndex& D, const ExtremalState& lam);

/// H_ij = {h_i, h_j}(λ), i,j = 1..2m.
SkewMatrix goh_matrix(const ControlAffineSystem& sys, const ExtremalState& lam);
SkewMatrix goh_matrix(BracketTable& table, const ExtremalState& lam);
Vector h0I(const ControlAffineSystem& sys, const ExtremalState& lam);
Vector h0I(BracketTable& table, const ExtremalState& lam);
Vector hI(BracketTable& table, const ExtremalState& lam);

/// Generator values at one state, memoized; opaque generators are expanded
/// through `defs`. Not thread-safe.
class HamiltonianEvaluator {
 public:
  HamiltonianEvaluator(BracketTable& table, ExtremalState lam, OpaqueDefinitions* defs = nullptr);
  double h(const MultiIndex& D);
  double generator(GenKey key);
  double operator()(const BracketPoly& p);
  const ExtremalState& state() const { return lam_; }

 private:
  BracketTable* table_;
  ExtremalState lam_;
  OpaqueDefinitions* defs_;
  std::map<GenKey, double> values_;
};

/// Pruning oracle: drops generators h_D with f_D ≡ 0 for this system.
SymbolicOptions pruning_options(BracketTable& table, std::size_t term_budget = 1'000'000);

PolyMatrix goh_symbolic(int m);
std::vector<BracketPoly> h0I_symbolic(int m);

double phi0(const ControlAffineSystem& sys, const ExtremalState& lam);
double phi0(BracketTable& table, const ExtremalState& lam);
BracketPoly phi0_symbolic(int m);

/// φ_{ℓ+1} = det[[h0I, −H], [{h0,φ_ℓ}, {h_I,φ_ℓ}ᵀ]].
BracketPoly phi_step(int m, const BracketPoly& phi, const SymbolicOptions& opts = {});
std::vector<BracketPoly> phi_symbolic(int m, int lmax, const SymbolicOptions& opts = {});

/// Numeric φ_0..φ_lmax: φ_0 directly, then det of the numeric Φ_ℓ whose last
/// row evaluates the Poisson derivatives of the symbolic φ_ℓ.
std::vector<double> phi_sequence(BracketTable& table, const ExtremalState& lam, int lmax,
                                 const SymbolicOptions& opts);
std::vector<double> phi_sequence(BracketTable& table, const ExtremalState& lam,
                                 const std::vector<BracketPoly>& symbolic);
std::vector<double> phi_sequence(const ControlAffineSystem& sys, const ExtremalState& lam, int lmax);

struct StructureSplit {
  int l = 0;
  int m = 0;
  BracketPoly phi;        // φ_ℓ written in the opaque symbol X0 = φ0
  BracketPoly leading;    // ad_{h0}^ℓ(X0)·Pf(H)^{2ℓ}
  BracketPoly remainder;  // B_ℓ = phi − leading
  bool certified = false;
  std::vector<std::string> violations;
};

/// Opaque symbol used for φ0 in structure_split.
inline constexpr int kPhi0Symbol = 0;

StructureSplit structure_split(int l, int m, const SymbolicOptions& opts = {});

struct SingularControl {
  Vector u;
  double norm = 0.0;
  bool feasible = false;
};

/// u* = H⁻¹h0I; throws NumericalError if the Goh matrix is numerically singular.
SingularControl singular_control(const SkewMatrix& H, const Vector& h0i, double tol = 1e-10);
SingularControl singular_control(const ControlAffineSystem& sys, const ExtremalState& lam,
                                 double tol = 1e-10);

struct KappaG {
  int a = 0;
  std::vector<int> permutation;  // 0-based
  std::vector<int> j0;
  std::vector<double> kappa;
  std::vector<double> g;
};

struct KappaGSymbolic {
  int a = 0;
  std::vector<int> permutation;
  std::vector<int> j0;
  std::vector<BracketPoly> kappa;
  std::vector<BracketPoly> g;
  PolyMatrix G;
};

/// Symbolic κ_i and g_l for a fixed block structure (J0 of size 2(m−a)).
KappaGSymbolic kappa_g_symbolic(int m, const std::vector<int>& j0,
                                const SymbolicOptions& opts = {});
KappaG kappa_g(const ControlAffineSystem& sys, const ExtremalState& lam, double tol = 1e-10);

}  // namespace fullerkit
