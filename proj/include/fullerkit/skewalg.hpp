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

#include "fullerkit/vecfield.hpp"

#include <vector>

namespace fullerkit {

inline constexpr double kDefaultRankTol = 1e-10;

/// Real skew-symmetric matrix, built from its strict upper triangle.
class SkewMatrix {
 public:
  SkewMatrix() = default;
  /// `upper` lists a(0,1), a(0,2), ..., a(0,k-1), a(1,2), ... row-major.
  static SkewMatrix from_upper(int size, const std::vector<double>& upper);
  /// Rejects input that is not exactly skew-symmetric.
  static SkewMatrix from_dense(const Matrix& a);
  static SkewMatrix zero(int size);

  int size() const { return static_cast<int>(a_.rows()); }
  double operator()(int i, int j) const { return a_(i, j); }
  const Matrix& dense() const { return a_; }
  std::vector<double> upper() const;

 private:
  Matrix a_;
};

/// Pf([[0,a],[-a,0]]) = a. Matching sum up to size 8, Parlett-Reid
/// elimination above.
double pfaffian(const SkewMatrix& a);
double pfaffian_matching(const SkewMatrix& a);
double pfaffian_elimination(const SkewMatrix& a);

/// adj(A)·A = Pf(A)·Id, entries signed minor Pfaffians.
SkewMatrix adj_pfaffian(const SkewMatrix& a);

struct EvenRank {
  int rank = 0;
  bool odd_raw = false;
  std::vector<double> singular_values;
};

/// Singular values above tol·σ_max, rounded down to an even count.
EvenRank even_rank(const SkewMatrix& a, double tol = kDefaultRankTol);

struct BlockDecomposition {
  std::vector<int> permutation;  // J0 ascending, then complement ascending
  int m0 = 0;
  SkewMatrix a1;
  Matrix a2;
  SkewMatrix a3;
  std::vector<int> j0;  // 0-based
  double pf_a1 = 1.0;
  bool odd_rank_warning = false;
};

BlockDecomposition block_decompose(const SkewMatrix& a, double tol = kDefaultRankTol);

/// Decomposition with a prescribed half-rank m0 (m0 = 0 gives an empty A1).
BlockDecomposition block_decompose_at_rank(const SkewMatrix& a, int m0,
                                           double tol = kDefaultRankTol);

/// v_i = P·(−adj(A1)·A2·e_i, Pf(A1)·e_i), i = 1..k−2m0.
std::vector<Vector> kernel_basis(const SkewMatrix& a, const BlockDecomposition& dec);

/// ‖A2ᵀ·adj(A1)·A2 + Pf(A1)·A3‖_F.
double parskew_residual(const BlockDecomposition& dec);

/// Lexicographically ordered k-subsets of {0,...,n-1}.
std::vector<std::vector<int>> lex_subsets(int n, int k);

}  // namespace fullerkit
