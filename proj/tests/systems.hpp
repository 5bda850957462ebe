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
#include "fullerkit/skewalg.hpp"
#include "fullerkit/vecfield.hpp"

#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace fullerkit::testing {

inline Exponents ex(std::initializer_list<int> e) { return Exponents(e); }

inline PolyVectorField field(int n, std::vector<std::vector<Monomial>> comps) {
  comps.resize(static_cast<std::size_t>(n));
  return PolyVectorField::from_monomials(static_cast<std::size_t>(n), comps);
}

/// f0 = ∂z, f1 = ∂x − y/2 ∂z, f2 = ∂y + x/2 ∂z.
inline ControlAffineSystem heisenberg() {
  return ControlAffineSystem(
      3, 1,
      {field(3, {{}, {}, {{1.0, ex({0, 0, 0})}}}),
       field(3, {{{1.0, ex({0, 0, 0})}}, {}, {{-0.5, ex({0, 1, 0})}}}),
       field(3, {{}, {{1.0, ex({0, 0, 0})}}, {{0.5, ex({1, 0, 0})}}})});
}

/// Engel frame in (x, y, z, w, s): f1 = ∂x, f2 = ∂y + x∂z + x²/2 ∂w, f0 = ∂s + c·x∂z + (c·y + z)∂w.
/// The Goh matrix p_z + x p_w vanishes on {x = 0, p_z = 0} while {h1, h12} = p_w does not.
inline ControlAffineSystem engel_system(double c) {
  return ControlAffineSystem(
      5, 1,
      {field(5, {{}, {}, {{c, ex({1, 0, 0, 0, 0})}}, {{c, ex({0, 1, 0, 0, 0})}, {1.0, ex({0, 0, 1, 0, 0})}}, {{1.0, ex({0, 0, 0, 0, 0})}}}),
       field(5, {{{1.0, ex({0, 0, 0, 0, 0})}}}),
       field(5, {{}, {{1.0, ex({0, 0, 0, 0, 0})}}, {{1.0, ex({1, 0, 0, 0, 0})}}, {{0.5, ex({2, 0, 0, 0, 0})}}})});
}

/// Heisenberg pair (f1, f2) in (x1, y1, z1) beside an Engel pair (f3, f4) in (x, y, z, w),
/// drift f0 = ∂s + c·x∂z + (c·y + z)∂w + c·y1∂z1 with s the last of 8 coordinates.
inline ControlAffineSystem heisenberg_engel_system(double c) {
  auto e = [](int i, int power = 1) {
    Exponents x(8, 0);
    if (i >= 0) x[static_cast<std::size_t>(i)] = power;
    return x;
  };
  return ControlAffineSystem(
      8, 2,
      {field(8, {{}, {}, {{c, e(1)}}, {}, {}, {{c, e(3)}}, {{c, e(4)}, {1.0, e(5)}}, {{1.0, e(-1)}}}),
       field(8, {{{1.0, e(-1)}}, {}, {{-0.5, e(1)}}}),
       field(8, {{}, {{1.0, e(-1)}}, {{0.5, e(0)}}}),
       field(8, {{}, {}, {}, {{1.0, e(-1)}}}),
       field(8, {{}, {}, {}, {}, {{1.0, e(-1)}}, {{1.0, e(3)}}, {{0.5, e(3, 2)}}})});
}

/// Degenerate basepoint for the Engel frames: x = 0, p_z = 0, p_w = 1.
inline ExtremalState engel_basepoint(int n, int pz_index, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ExtremalState lam{Vector::Zero(n), Vector(n)};
  for (int i = 0; i < n; ++i) lam.p(i) = u(rng);
  for (int i = 0; i < n; ++i) lam.q(i) = 0.5 * u(rng);
  lam.q(pz_index - 2) = 0.0;
  lam.p(pz_index) = 0.0;
  lam.p(pz_index + 1) = 1.0;
  return lam;
}

/// Coordinates (x, y, z, w): f1 = ∂x, f2 = ∂y, f0 = (1 − 2e·w)∂z + (1 − c·x − d·y)∂w.
/// Along any extremal h_I(t) = s(t)·(c, d) with s(t) = a + p_w(0)·t + e·p_z·t² when
/// p(0) = (a c, a d, p_z, p_w(0)).
inline ControlAffineSystem crossing_system(double c, double d, double e) {
  return ControlAffineSystem(
      4, 1,
      {field(4, {{}, {}, {{1.0, ex({0, 0, 0, 0})}, {-2.0 * e, ex({0, 0, 0, 1})}},
                 {{1.0, ex({0, 0, 0, 0})}, {-c, ex({1, 0, 0, 0})}, {-d, ex({0, 1, 0, 0})}}}),
       field(4, {{{1.0, ex({0, 0, 0, 0})}}, {}, {}, {}}),
       field(4, {{}, {{1.0, ex({0, 0, 0, 0})}}, {}, {}})});
}

inline ExtremalState crossing_state(double a, double b, double c, double d, double pz = 1.0) {
  ExtremalState lam{Vector::Zero(4), Vector(4)};
  lam.p << a * c, a * d, pz, b;
  return lam;
}

/// Step-3 graded nilpotent frame on ℝ^n: f_i = ∂_{i+1} + Σ_k a_{ik}(x)∂_k for the
/// upper coordinates k ≥ 2m+1, where coordinates 2m+1..2m+s carry weight 2 (a linear
/// in the weight-1 block) and the rest weight 3 (a quadratic in weight 1 plus linear
/// in weight 2). Integer coefficients keep every bracket exact.
inline ControlAffineSystem graded_system(int m, int n, std::mt19937_64& rng, int step = 3) {
  const int base = 2 * m + 1;
  const int w2 = step == 2 ? n - base : (n - base + 1) / 2;
  std::uniform_int_distribution<int> coef(-2, 2);
  std::vector<PolyVectorField> fields;
  for (int i = 0; i < base; ++i) {
    std::vector<std::vector<Monomial>> comps(static_cast<std::size_t>(n));
    comps[static_cast<std::size_t>(i)].push_back({1.0, Exponents(static_cast<std::size_t>(n), 0)});
    for (int k = base; k < n; ++k) {
      auto& c = comps[static_cast<std::size_t>(k)];
      const bool weight2 = k < base + w2;
      for (int a = 0; a < base; ++a) {
        Exponents e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(a)] = 1;
        if (weight2) {
          c.push_back({static_cast<double>(coef(rng)), e});
        } else {
          for (int b = a; b < base; ++b) {
            Exponents e2 = e;
            ++e2[static_cast<std::size_t>(b)];
            c.push_back({static_cast<double>(coef(rng)), e2});
          }
        }
      }
      if (!weight2) {
        for (int b = base; b < base + w2; ++b) {
          Exponents e(static_cast<std::size_t>(n), 0);
          e[static_cast<std::size_t>(b)] = 1;
          c.push_back({static_cast<double>(coef(rng)), e});
        }
      }
    }
    fields.push_back(PolyVectorField::from_monomials(static_cast<std::size_t>(n), comps));
  }
  return ControlAffineSystem(n, m, std::move(fields));
}

/// Basepoint with a degenerate Goh matrix of rank 2m − 2 (Goh ≡ 0 when m = 1).
/// Returns false when no real root was found for this draw.
inline bool degenerate_basepoint(const ControlAffineSystem& sys, std::mt19937_64& rng, ExtremalState& out) {
  const int n = sys.n();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BracketTable table(sys);
  for (int attempt = 0; attempt < 50; ++attempt) {
    ExtremalState lam{Vector(n), Vector(n)};
    Vector d(n);
    for (int i = 0; i < n; ++i) {
      lam.q(i) = 0.5 * u(rng);
      lam.p(i) = u(rng);
      d(i) = u(rng);
    }
    // Pf(H(p + s d)) is a polynomial of degree m in s; sample and solve.
    const int m = sys.m();
    auto pf_at = [&](double s) {
      ExtremalState x{lam.q, lam.p + s * d};
      return pfaffian(goh_matrix(table, x));
    };
    double s_root = 0.0;
    bool found = false;
    if (m == 1) {
      const double f0 = pf_at(0.0), f1 = pf_at(1.0);
      if (std::abs(f1 - f0) > 1e-6) {
        s_root = -f0 / (f1 - f0);
        found = true;
      }
    } else if (m == 2) {
      const double f0 = pf_at(0.0), fp = pf_at(1.0), fm = pf_at(-1.0);
      const double A = (fp + fm) / 2.0 - f0, B = (fp - fm) / 2.0, C = f0;
      const double disc = B * B - 4.0 * A * C;
      if (std::abs(A) > 1e-6 && disc > 1e-6) {
        s_root = (-B + std::sqrt(disc)) / (2.0 * A);
        found = true;
      }
    }
    if (!found) continue;
    ExtremalState x{lam.q, lam.p + s_root * d};
    if (x.p.norm() < 1e-3) continue;
    x.p /= x.p.norm();
    const SkewMatrix H = goh_matrix(table, x);
    if (m == 2 && even_rank(H, 1e-9).rank != 2) continue;
    out = x;
    return true;
  }
  return false;
}

}  // namespace fullerkit::testing
