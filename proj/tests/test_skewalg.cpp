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

#include "fullerkit/errors.hpp"
#include "fullerkit/skewalg.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

namespace fullerkit {
namespace {

// Expansion along the first row: Pf(A) = Σ_j (−1)^(j+1) a_{0j} Pf(A without rows/cols 0, j).
double pf_oracle(const Matrix& a) {
  const auto k = a.rows();
  if (k == 0) return 1.0;
  if (k % 2 == 1) return 0.0;
  double s = 0.0;
  for (Eigen::Index j = 1; j < k; ++j) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index l = 1; l < k; ++l) {
      if (l != j) keep.push_back(l);
    }
    Matrix sub(k - 2, k - 2);
    for (std::size_t r = 0; r < keep.size(); ++r) {
      for (std::size_t c = 0; c < keep.size(); ++c) sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(keep[r], keep[c]);
    }
    s += ((j % 2 == 1) ? 1.0 : -1.0) * a(0, j) * pf_oracle(sub);
  }
  return s;
}

SkewMatrix random_skew(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> up;
  for (int i = 0; i < k * (k - 1) / 2; ++i) up.push_back(u(rng));
  return SkewMatrix::from_upper(k, up);
}

SkewMatrix low_rank(int k, int m0, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a = Matrix::Zero(k, k);
  for (int i = 0; i < m0; ++i) {
    Vector x(k), y(k);
    for (int j = 0; j < k; ++j) {
      x(j) = g(rng);
      y(j) = g(rng);
    }
    a += x * y.transpose() - y * x.transpose();
  }
  return SkewMatrix::from_dense((a - a.transpose()) / 2);
}

SkewMatrix upper4(double a12, double a13, double a14, double a23, double a24, double a34) {
  return SkewMatrix::from_upper(4, {a12, a13, a14, a23, a24, a34});
}

TEST(Pfaffian, Examples) {
  EXPECT_EQ(pfaffian(SkewMatrix::from_upper(2, {3.0})), 3.0);
  EXPECT_EQ(pfaffian(upper4(1, 0, 0, 0, 0, 2)), 2.0);
  EXPECT_EQ(pfaffian(SkewMatrix::zero(6)), 0.0);
  EXPECT_EQ(pfaffian(SkewMatrix::zero(0)), 1.0);
}

TEST(Pfaffian, OddSizeRejected) {
  EXPECT_THROW(pfaffian(SkewMatrix::from_upper(3, {1, 2, 3})), ValidationError);
  EXPECT_THROW(adj_pfaffian(SkewMatrix::from_upper(3, {1, 2, 3})), ValidationError);
}

TEST(Pfaffian, RejectsNonSkewInput) {
  Matrix a = Matrix::Identity(2, 2);
  EXPECT_THROW(SkewMatrix::from_dense(a), ValidationError);
  EXPECT_THROW(SkewMatrix::from_upper(3, {1.0}), ValidationError);
}

TEST(Pfaffian, AgreesWithRowExpansionOracle) {
  std::mt19937_64 rng(3);
  for (int k : {2, 4, 6, 8, 10}) {
    for (int t = 0; t < 20; ++t) {
      const SkewMatrix a = random_skew(k, rng);
      const double ref = pf_oracle(a.dense());
      EXPECT_NEAR(pfaffian(a), ref, 1e-11 * std::max(1.0, std::abs(ref))) << "k=" << k;
    }
  }
}

TEST(Pfaffian, MatchingAndEliminationAgree) {
  std::mt19937_64 rng(5);
  for (int k : {2, 4, 6, 8}) {
    for (int t = 0; t < 50; ++t) {
      const SkewMatrix a = random_skew(k, rng);
      const double p = pfaffian_matching(a);
      EXPECT_NEAR(pfaffian_elimination(a), p, 1e-11 * std::max(1.0, std::abs(p)));
    }
  }
}

TEST(Pfaffian, SquareIsDeterminant) {
  std::mt19937_64 rng(17);
  for (int k : {2, 4, 6, 8}) {
    for (int t = 0; t < 1000; ++t) {
      const SkewMatrix a = random_skew(k, rng);
      const double pf = pfaffian(a);
      const double det = a.dense().determinant();
      EXPECT_LE(std::abs(pf * pf - det), 1e-9 * std::max(std::abs(det), 1e-300) + 1e-15);
    }
  }
}

TEST(AdjPfaffian, Examples) {
  const SkewMatrix adj = adj_pfaffian(SkewMatrix::from_upper(2, {5.0}));
  EXPECT_EQ(adj(0, 1), -1.0);
  EXPECT_EQ(adj(1, 0), 1.0);
  EXPECT_TRUE(adj_pfaffian(SkewMatrix::zero(4)).dense().isZero());
}

TEST(AdjPfaffian, EqualsPfaffianTimesInverse) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    const SkewMatrix a = random_skew(6, rng);
    const Matrix expected = pfaffian(a) * a.dense().inverse();
    EXPECT_LE((adj_pfaffian(a).dense() - expected).norm(), 1e-9 * expected.norm());
  }
}

TEST(AdjPfaffian, IdentityOnRandomEnsemble) {
  std::mt19937_64 rng(29);
  for (int k : {2, 4, 6, 8}) {
    for (int t = 0; t < 1000; ++t) {
      const SkewMatrix a = random_skew(k, rng);
      const double pf = pfaffian(a);
      const Matrix r = adj_pfaffian(a).dense() * a.dense() - pf * Matrix::Identity(k, k);
      EXPECT_LE(r.norm(), 1e-9 * (1.0 + std::abs(pf)) * a.dense().norm());
    }
  }
}

TEST(AdjPfaffian, LowRankIsNilpotentProduct) {
  // Rank 2 in size 6: every 4×4 principal Pfaffian vanishes.
  std::mt19937_64 rng(31);
  const SkewMatrix a = low_rank(6, 1, rng);
  EXPECT_LE(adj_pfaffian(a).dense().norm(), 1e-12 * std::pow(a.dense().norm(), 2));
}

TEST(EvenRank, Examples) {
  EXPECT_EQ(even_rank(SkewMatrix::from_upper(2, {1.0})).rank, 2);
  EXPECT_EQ(even_rank(SkewMatrix::zero(4)).rank, 0);
  EXPECT_EQ(even_rank(upper4(1, 0, 0, 0, 0, 0)).rank, 2);
}

TEST(EvenRank, RecoversConstructedRank) {
  std::mt19937_64 rng(37);
  for (int k = 2; k <= 8; k += 2) {
    for (int m0 = 0; 2 * m0 <= k; ++m0) {
      EXPECT_EQ(even_rank(low_rank(k, m0, rng)).rank, 2 * m0);
    }
  }
}

TEST(BlockDecompose, Examples) {
  const auto d1 = block_decompose(upper4(1, 0, 0, 0, 0, 0));
  EXPECT_EQ(d1.m0, 1);
  EXPECT_EQ(d1.j0, (std::vector<int>{0, 1}));
  EXPECT_EQ(d1.a1(0, 1), 1.0);
  EXPECT_TRUE(d1.a2.isZero());
  EXPECT_TRUE(d1.a3.dense().isZero());

  const auto d2 = block_decompose(upper4(0, 0, 0, 0, 0, 1));
  EXPECT_EQ(d2.j0, (std::vector<int>{2, 3}));
  EXPECT_EQ(d2.permutation, (std::vector<int>{2, 3, 0, 1}));

  std::mt19937_64 rng(41);
  const auto d3 = block_decompose(random_skew(6, rng));
  EXPECT_EQ(d3.m0, 3);
  EXPECT_EQ(d3.permutation, (std::vector<int>{0, 1, 2, 3, 4, 5}));
}

TEST(BlockDecompose, ZeroMatrixRejected) {
  EXPECT_THROW(block_decompose(SkewMatrix::zero(4)), ValidationError);
}

TEST(BlockDecompose, LexMinimalAgainstBruteForce) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int t = 0; t < 300; ++t) {
    // Rank-2 matrices with a sparse support so that early subsets are often singular.
    std::vector<double> up(6, 0.0);
    Vector x = Vector::Zero(4), y = Vector::Zero(4);
    x(pick(rng)) = 1.0 + pick(rng);
    y(pick(rng)) = 1.0 + pick(rng);
    y(pick(rng)) += 1.0;
    const Matrix a = x * y.transpose() - y * x.transpose();
    if (a.isZero()) continue;
    const SkewMatrix s = SkewMatrix::from_dense(a);
    std::vector<int> brute;
    for (const auto& sub : lex_subsets(4, 2)) {
      if (std::abs(a(sub[0], sub[1])) > 1e-12) {
        brute = sub;
        break;
      }
    }
    EXPECT_EQ(block_decompose(s).j0, brute);
  }
}

TEST(Kernel, Examples) {
  const SkewMatrix a = upper4(1, 0, 0, 0, 0, 0);
  const auto v = kernel_basis(a, block_decompose(a));
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0], Vector::Unit(4, 2));
  EXPECT_EQ(v[1], Vector::Unit(4, 3));
  EXPECT_EQ(parskew_residual(block_decompose(a)), 0.0);

  std::mt19937_64 rng(47);
  const SkewMatrix b = random_skew(4, rng);
  EXPECT_TRUE(kernel_basis(b, block_decompose(b)).empty());

  const SkewMatrix z = SkewMatrix::zero(4);
  const auto e = kernel_basis(z, block_decompose_at_rank(z, 0));
  ASSERT_EQ(e.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(e[static_cast<std::size_t>(i)], Vector::Unit(4, i));
}

TEST(Kernel, LowRankProperties) {
  std::mt19937_64 rng(53);
  for (int k = 2; k <= 8; k += 2) {
    for (int m0 = 1; 2 * m0 < k; ++m0) {
      for (int t = 0; t < 30; ++t) {
        const SkewMatrix a = low_rank(k, m0, rng);
        const auto dec = block_decompose(a);
        ASSERT_EQ(dec.m0, m0);
        const auto v = kernel_basis(a, dec);
        ASSERT_EQ(static_cast<int>(v.size()), k - 2 * m0);
        Matrix basis(k, static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
          EXPECT_LE((a.dense() * v[i]).norm(), 1e-8 * a.dense().norm() * v[i].norm());
          basis.col(static_cast<Eigen::Index>(i)) = v[i];
        }
        EXPECT_EQ(Eigen::FullPivLU<Matrix>(basis).rank(), static_cast<Eigen::Index>(v.size()));
        EXPECT_LE(parskew_residual(dec), 1e-8 * std::max(1.0, std::pow(a.dense().norm(), m0 + 1)));
      }
    }
  }
}

TEST(Kernel, RankOneGeneratorGivesRankTwo) {
  std::mt19937_64 rng(59);
  std::normal_distribution<double> g;
  Vector x(6), y(6);
  for (int i = 0; i < 6; ++i) {
    x(i) = g(rng);
    y(i) = g(rng);
  }
  const Matrix b = x * y.transpose();
  const SkewMatrix a = SkewMatrix::from_dense(b - b.transpose());
  EXPECT_EQ(even_rank(a).rank, 2);
  EXPECT_LE(parskew_residual(block_decompose(a)), 1e-9);
}

TEST(Kernel, ForcedRankOnInvertibleHasResidual) {
  std::mt19937_64 rng(61);
  const SkewMatrix a = random_skew(4, rng);
  EXPECT_GT(parskew_residual(block_decompose_at_rank(a, 1)), 1e-3);
}

TEST(LexSubsets, OrderAndCount) {
  const auto s = lex_subsets(4, 2);
  ASSERT_EQ(s.size(), 6u);
  EXPECT_EQ(s.front(), (std::vector<int>{0, 1}));
  EXPECT_EQ(s[1], (std::vector<int>{0, 2}));
  EXPECT_EQ(s.back(), (std::vector<int>{2, 3}));
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
}

}  // namespace
}  // namespace fullerkit
