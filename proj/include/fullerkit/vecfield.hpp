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

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <vector>

namespace fullerkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Exponents = std::vector<int>;
using MultiIndex = std::vector<int>;

struct Monomial {
  double coefficient = 0.0;
  Exponents exponents;
};

/// Scalar polynomial in `dim` real variables; like terms are merged and
/// zero coefficients dropped.
class Polynomial {
 public:
  explicit Polynomial(std::size_t dim = 0) : dim_(dim) {}

  static Polynomial constant(std::size_t dim, double c);
  static Polynomial variable(std::size_t dim, std::size_t i, double c = 1.0);

  std::size_t dim() const { return dim_; }
  const std::map<Exponents, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  void add_term(const Exponents& e, double c);
  double evaluate(const Vector& x) const;
  Polynomial derivative(std::size_t var) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  bool operator==(const Polynomial& o) const = default;

 private:
  std::size_t dim_;
  std::map<Exponents, double> terms_;
};

class PolyVectorField {
 public:
  explicit PolyVectorField(std::size_t dim = 0);
  explicit PolyVectorField(std::vector<Polynomial> components);
  static PolyVectorField from_monomials(std::size_t dim,
                                        const std::vector<std::vector<Monomial>>& components);
  static PolyVectorField constant(const Vector& v);

  std::size_t dim() const { return components_.size(); }
  const Polynomial& component(std::size_t i) const { return components_[i]; }
  const std::vector<Polynomial>& components() const { return components_; }
  bool is_zero() const;

  PolyVectorField operator+(const PolyVectorField& o) const;
  PolyVectorField operator-(const PolyVectorField& o) const;
  PolyVectorField operator*(double s) const;
  bool operator==(const PolyVectorField& o) const = default;

 private:
  std::vector<Polynomial> components_;
};

Vector evaluate(const PolyVectorField& f, const Vector& q);
Matrix jacobian(const PolyVectorField& f, const Vector& q);

/// [f,g] = Dg·f − Df·g.
PolyVectorField lie_bracket(const PolyVectorField& f, const PolyVectorField& g);

class ControlAffineSystem {
 public:
  ControlAffineSystem(int n, int m, std::vector<PolyVectorField> fields);

  int n() const { return n_; }
  int m() const { return m_; }
  int control_count() const { return 2 * m_; }
  const PolyVectorField& field(int i) const;
  const std::vector<PolyVectorField>& fields() const { return fields_; }

 private:
  int n_;
  int m_;
  std::vector<PolyVectorField> fields_;
};

/// Right-nested bracket f_D = [f_{i1},[...,[f_{ik-1},f_{ik}]]].
PolyVectorField iterated_bracket(const ControlAffineSystem& sys, const MultiIndex& D);

/// Memoizes f_D for one system. Not thread-safe; keep one per worker.
class BracketTable {
 public:
  explicit BracketTable(const ControlAffineSystem& sys) : sys_(&sys) {}
  const PolyVectorField& get(const MultiIndex& D);
  const ControlAffineSystem& system() const { return *sys_; }

 private:
  const ControlAffineSystem* sys_;
  std::map<MultiIndex, PolyVectorField> cache_;
};

bool frame_independent(const ControlAffineSystem& sys, const Vector& q, double tol = 1e-10);

/// Throws ValidationError unless every index lies in {0,...,2m} and D is nonempty.
void check_multi_index(const ControlAffineSystem& sys, const MultiIndex& D);

}  // namespace fullerkit
