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
#include "fullerkit/hamsym.hpp"
#include "fullerkit/sweeps.hpp"
#include "systems.hpp"

#include <gtest/gtest.h>

#include <random>

namespace fullerkit {
namespace {

using testing::ex;
using testing::field;

ExtremalState state(std::initializer_list<double> q, std::initializer_list<double> p) {
  ExtremalState lam{Vector(static_cast<Eigen::Index>(q.size())), Vector(static_cast<Eigen::Index>(p.size()))};
  Eigen::Index i = 0;
  for (double v : q) lam.q(i++) = v;
  i = 0;
  for (double v : p) lam.p(i++) = v;
  return lam;
}

// (x1, y1, z, x3, x4): f1 = ∂x1 − y1/2 ∂z, f2 = ∂y1 + x1/2 ∂z, f0 = ∂z, f3 = ∂x3, f4 = ∂x4.
ControlAffineSystem drift_generated_m2() {
  const Exponents c = ex({0, 0, 0, 0, 0});
  return ControlAffineSystem(
      5, 2,
      {field(5, {{}, {}, {{1.0, c}}}),
       field(5, {{{1.0, c}}, {}, {{-0.5, ex({0, 1, 0, 0, 0})}}}),
       field(5, {{}, {{1.0, c}}, {{0.5, ex({1, 0, 0, 0, 0})}}}),
       field(5, {{}, {}, {}, {{1.0, c}}}),
       field(5, {{}, {}, {}, {}, {{1.0, c}}})});
}

// f0 = ∂z − x∂y, f1 = ∂x, f2 = ∂y, so [f0, f1] = f2.
ControlAffineSystem shear_m1() {
  return ControlAffineSystem(3, 1,
                             {field(3, {{}, {{-1.0, ex({1, 0, 0})}}, {{1.0, ex({0, 0, 0})}}}),
                              field(3, {{{1.0, ex({0, 0, 0})}}}),
                              field(3, {{}, {{1.0, ex({0, 0, 0})}}})});
}

TEST(HEval, Examples) {
  const auto h = testing::heisenberg();
  EXPECT_EQ(h_eval(h, {1, 2}, state({0, 0, 0}, {0, 0, 2.5})), 2.5);
  EXPECT_EQ(h_eval(h, {0, 1}, state({0.3, -1, 2}, {1, 2, 3})), 0.0);
  EXPECT_EQ(h_eval(h, {1}, state({0, 2, 0}, {1, 0, 1})), 0.0);
  EXPECT_THROW(h_eval(h, {1}, state({0, 0}, {1, 0})), ValidationError);
  EXPECT_THROW(h_eval(h, {1}, state({0, 0, 0}, {0, 0, 0})), ValidationError);
}

TEST(PoissonAd, Examples) {
  EXPECT_EQ(poisson_ad(1, BracketPoly::h({2})), BracketPoly::h({1, 2}));
  EXPECT_EQ(poisson_ad(0, BracketPoly::h({1}) * BracketPoly::h({2})),
            BracketPoly::h({0, 1}) * BracketPoly::h({2}) + BracketPoly::h({1}) * BracketPoly::h({0, 2}));
  EXPECT_TRUE(poisson_ad(2, BracketPoly::constant(4.0)).is_zero());
}

TEST(PoissonAd, NormalOrderingAntisymmetry) {
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; j <= 4; ++j) {
      EXPECT_EQ(poisson_ad(i, BracketPoly::h({j})), -poisson_ad(j, BracketPoly::h({i})));
    }
  }
}

TEST(PoissonAd, SymbolicMatchesNumericBracket) {
  std::mt19937_64 rng(5);
  const auto sys = random_system(3, 1, 2, rng, 1.0);
  BracketTable table(sys);
  const ExtremalState lam = state({0.2, -0.4, 0.1}, {0.7, -0.3, 0.5});
  HamiltonianEvaluator eval(table, lam);
  const BracketPoly p = BracketPoly::h({1}) * BracketPoly::h({0, 2}) + BracketPoly::h({2}) * 3.0;
  const BracketPoly q = poisson_ad(1, p);
  const double expected = h_eval(sys, {1, 1}, lam) * h_eval(sys, {0, 2}, lam) +
                          h_eval(sys, {1}, lam) * h_eval(sys, {1, 0, 2}, lam) + 3.0 * h_eval(sys, {1, 2}, lam);
  EXPECT_NEAR(eval(q), expected, 1e-12 * std::max(1.0, std::abs(expected)));
}

TEST(Goh, Examples) {
  const auto h = testing::heisenberg();
  const SkewMatrix H = goh_matrix(h, state({0.5, 0.1, 0}, {1, 2, 3}));
  EXPECT_EQ(H(0, 1), 3.0);
  EXPECT_EQ(H(1, 0), -3.0);

  const ControlAffineSystem commuting(3, 1,
                                     {PolyVectorField::constant(Vector::Unit(3, 2)),
                                      PolyVectorField::constant(Vector::Unit(3, 0)),
                                      PolyVectorField::constant(Vector::Unit(3, 1))});
  EXPECT_TRUE(goh_matrix(commuting, state({1, 2, 3}, {1, 1, 1})).dense().isZero());

  const auto d = drift_generated_m2();
  const ExtremalState lam = state({0.3, 0.2, 0, 1, 1}, {0.5, -1, 1.5, 2, 3});
  const SkewMatrix G = goh_matrix(d, lam);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 1) = h_eval(d, {0}, lam);
  expected(1, 0) = -expected(0, 1);
  EXPECT_EQ(G.dense(), expected);
}

TEST(H0I, Examples) {
  const auto h = testing::heisenberg();
  EXPECT_TRUE(h0I(h, state({1, 2, 3}, {1, 2, 3})).isZero());
  const ControlAffineSystem driftless(3, 1, {PolyVectorField(3), h.field(1), h.field(2)});
  EXPECT_TRUE(h0I(driftless, state({1, 2, 3}, {1, 2, 3})).isZero());
  const auto s = shear_m1();
  const ExtremalState lam = state({0.4, 1, -1}, {0.3, -0.8, 0.2});
  EXPECT_EQ(h0I(s, lam)(0), h_eval(s, {2}, lam));
}

TEST(Phi0, SymbolicFormM1) {
  const BracketPoly h12 = BracketPoly::h({1, 2}), h01 = BracketPoly::h({0, 1}), h02 = BracketPoly::h({0, 2});
  EXPECT_EQ(phi0_symbolic(1), h12 * h12 - h01 * h01 - h02 * h02);
}

TEST(Phi0, HeisenbergIsSquareOfPz) {
  EXPECT_DOUBLE_EQ(phi0(testing::heisenberg(), state({0.1, 0.2, 0.3}, {1, -1, 1.7})), 1.7 * 1.7);
}

TEST(Phi0, SymbolicAgreesWithNumeric) {
  std::mt19937_64 rng(9);
  for (int m : {1, 2}) {
    const auto sys = random_system(2 * m + 2, m, 2, rng, 1.0);
    BracketTable table(sys);
    const BracketPoly sym = phi0_symbolic(m);
    for (int t = 0; t < 20; ++t) {
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      ExtremalState lam{Vector(sys.n()), Vector(sys.n())};
      for (int i = 0; i < sys.n(); ++i) {
        lam.q(i) = u(rng);
        lam.p(i) = u(rng);
      }
      HamiltonianEvaluator eval(table, lam);
      const double num = phi0(table, lam);
      EXPECT_NEAR(eval(sym), num, 1e-10 * std::max(1.0, std::abs(num)));
    }
  }
}

TEST(Phi0, IdentityWithInvertibleGoh) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    const int m = 1 + t % 2;
    const auto sys = random_system(2 * m + 1, m, 2, rng, 1.0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ExtremalState lam{Vector(sys.n()), Vector(sys.n())};
    for (int i = 0; i < sys.n(); ++i) {
      lam.q(i) = u(rng);
      lam.p(i) = u(rng);
    }
    const SkewMatrix H = goh_matrix(sys, lam);
    const double det = H.dense().determinant();
    if (std::abs(det) < 1e-6) continue;
    const Vector b = h0I(sys, lam);
    const double expected = det * (1.0 - (H.dense().inverse() * b).squaredNorm());
    EXPECT_NEAR(phi0(sys, lam), expected, 1e-9 * std::max(std::abs(det) * (1.0 + b.squaredNorm()), std::abs(expected)));
  }
}

TEST(PhiSequence, HeisenbergVanishesAfterPhi0) {
  const auto phi = phi_sequence(testing::heisenberg(), state({0.2, 0.1, 0}, {1, 0.5, 2}), 3);
  ASSERT_EQ(phi.size(), 4u);
  EXPECT_DOUBLE_EQ(phi[0], 4.0);
  for (std::size_t l = 1; l < phi.size(); ++l) EXPECT_EQ(phi[l], 0.0);
}

TEST(PhiSequence, NumericMatchesSymbolicEvaluation) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    const auto sys = random_system(3 + t % 2, 1, 2, rng, 1.0);
    BracketTable table(sys);
    const auto sym = phi_symbolic(1, 2, pruning_options(table));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ExtremalState lam{Vector(sys.n()), Vector(sys.n())};
    for (int i = 0; i < sys.n(); ++i) {
      lam.q(i) = u(rng);
      lam.p(i) = u(rng);
    }
    const auto num = phi_sequence(table, lam, 2, pruning_options(table));
    HamiltonianEvaluator eval(table, lam);
    for (std::size_t l = 0; l < sym.size(); ++l) {
      const double s = eval(sym[l]);
      EXPECT_NEAR(num[l], s, 1e-8 * std::max(1.0, std::abs(s))) << "l=" << l;
    }
  }
}

TEST(PhiSequence, Phi1LeadingTermAtDegeneratePoint) {
  // With h0I = 0 the first column of Φ0 is (0, {h0, φ0}) and φ1 = {h0, φ0}·det H.
  const auto sym = phi_symbolic(1, 1);
  std::map<GenKey, double> v;
  v[encode_bracket({0, 1})] = 0.0;
  v[encode_bracket({0, 2})] = 0.0;
  v[encode_bracket({1, 2})] = 1.3;
  v[encode_bracket({0, 0, 1})] = 0.7;
  v[encode_bracket({0, 0, 2})] = -0.2;
  v[encode_bracket({1, 0, 1})] = 0.4;
  v[encode_bracket({1, 0, 2})] = 0.9;
  v[encode_bracket({2, 0, 1})] = -0.6;
  v[encode_bracket({2, 0, 2})] = 0.3;
  v[encode_bracket({0, 1, 2})] = -1.1;
  v[encode_bracket({1, 1, 2})] = 0.8;
  v[encode_bracket({2, 1, 2})] = 0.5;
  auto value = [&](GenKey k) {
    auto it = v.find(k);
    return it == v.end() ? 0.0 : it->second;
  };
  const double ad0phi0 = evaluate_poly(poisson_ad(0, sym[0]), value);
  const double det = 1.3 * 1.3;
  EXPECT_NEAR(evaluate_poly(sym[1], value), ad0phi0 * det, 1e-12);
}

TEST(StructureSplit, LevelZeroAndOne) {
  const auto s0 = structure_split(0, 1);
  EXPECT_TRUE(s0.remainder.is_zero());
  EXPECT_TRUE(s0.certified);
  const auto s1 = structure_split(1, 1);
  EXPECT_TRUE(s1.certified);
  EXPECT_FALSE(s1.remainder.contains_generator(encode_opaque(kPhi0Symbol, {0})));
  EXPECT_TRUE(s1.leading.contains_generator(encode_opaque(kPhi0Symbol, {0})));
}

TEST(StructureSplit, ResumsToFlatPhi) {
  OpaqueDefinitions defs;
  defs.define(kPhi0Symbol, phi0_symbolic(1));
  const auto flat = phi_symbolic(1, 2);
  for (int l = 0; l <= 2; ++l) {
    const auto s = structure_split(l, 1);
    EXPECT_TRUE(s.certified) << l;
    const BracketPoly diff = defs.flatten(s.leading + s.remainder) - flat[static_cast<std::size_t>(l)];
    double worst = 0.0;
    for (const auto& [t, c] : diff.terms()) worst = std::max(worst, std::abs(c));
    EXPECT_LE(worst, 1e-9) << "l=" << l;
  }
}

TEST(SingularControl, Examples) {
  const auto sc = singular_control(SkewMatrix::from_upper(2, {2.0}), (Vector(2) << 2.0, 0.0).finished());
  EXPECT_NEAR(sc.u(0), 0.0, 1e-15);
  EXPECT_NEAR(sc.u(1), 1.0, 1e-15);
  EXPECT_NEAR(sc.norm, 1.0, 1e-15);
  EXPECT_TRUE(sc.feasible);
  const auto z = singular_control(SkewMatrix::from_upper(2, {2.0}), Vector::Zero(2));
  EXPECT_EQ(z.norm, 0.0);
  EXPECT_THROW(singular_control(SkewMatrix::zero(2), Vector::Zero(2)), NumericalError);
}

TEST(SingularControl, NormOneIffPhi0Zero) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    const double a = u(rng);
    if (std::abs(a) < 0.1) continue;
    Vector b(2);
    b << u(rng), u(rng);
    b *= std::abs(a) / b.norm();  // ‖H⁻¹b‖ = 1 exactly for H = [[0,a],[−a,0]]
    const auto sc = singular_control(SkewMatrix::from_upper(2, {a}), b);
    EXPECT_NEAR(sc.norm, 1.0, 1e-12);
    EXPECT_NEAR(a * a * (1.0 - sc.norm * sc.norm), 0.0, 1e-11);
  }
}

TEST(KappaG, FullyDegenerateM1) {
  const auto s = kappa_g_symbolic(1, {});
  EXPECT_EQ(s.a, 1);
  ASSERT_EQ(s.kappa.size(), 2u);
  EXPECT_EQ(s.kappa[0], BracketPoly::h({0, 1}));
  EXPECT_EQ(s.kappa[1], BracketPoly::h({0, 2}));
  ASSERT_EQ(s.g.size(), 1u);
  EXPECT_EQ(s.g[0], BracketPoly::h({1, 2}));
}

TEST(KappaG, HeisenbergAtZeroPz) {
  const auto kg = kappa_g(testing::heisenberg(), state({0, 0, 0}, {1, 1, 0}));
  EXPECT_EQ(kg.a, 1);
  ASSERT_EQ(kg.g.size(), 1u);
  EXPECT_EQ(kg.g[0], 0.0);
  EXPECT_THROW(kappa_g(testing::heisenberg(), state({0, 0, 0}, {1, 1, 1})), NumericalError);
}

TEST(KappaG, LowRankGVanishes) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 5; ++t) {
    const auto sys = testing::graded_system(2, 8, rng);
    ExtremalState base;
    if (!testing::degenerate_basepoint(sys, rng, base)) continue;
    const auto kg = kappa_g(sys, base, 1e-9);
    EXPECT_EQ(kg.a, 1);
    for (double g : kg.g) EXPECT_LE(std::abs(g), 1e-8);
  }
}

}  // namespace
}  // namespace fullerkit
