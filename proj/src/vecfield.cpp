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

#include "fullerkit/vecfield.hpp"

#include "fullerkit/errors.hpp"

#include <algorithm>
#include <string>

namespace fullerkit {

Polynomial Polynomial::constant(std::size_t dim, double c) {
  Polynomial p(dim);
  p.add_term(Exponents(dim, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t dim, std::size_t i, double c) {
  if (i >= dim) throw ValidationError("variable index out of range");
  Exponents e(dim, 0);
  e[i] = 1;
  Polynomial p(dim);
  p.add_term(e, c);
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const Exponents& e, double c) {
  if (e.size() != dim_) {
    throw ValidationError("monomial has " + std::to_string(e.size()) +
                          " exponents, expected " + std::to_string(dim_));
  }
  for (int k : e) {
    if (k < 0) throw ValidationError("negative exponent");
  }
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::evaluate(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) {
    throw ValidationError("point dimension mismatch");
  }
  double total = 0.0;
  for (const auto& [e, c] : terms_) {
    double v = c;
    for (std::size_t i = 0; i < dim_; ++i) {
      for (int k = 0; k < e[i]; ++k) v *= x[static_cast<Eigen::Index>(i)];
    }
    total += v;
  }
  return total;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  Polynomial d(dim_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents f = e;
    f[var] -= 1;
    d.add_term(f, c * e[var]);
  }
  return d;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.dim_ != dim_) throw ValidationError("polynomial dimension mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.dim_ != dim_) throw ValidationError("polynomial dimension mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.dim_ != dim_) throw ValidationError("polynomial dimension mismatch");
  Polynomial r(dim_);
  Exponents e(dim_);
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : o.terms_) {
      for (std::size_t i = 0; i < dim_; ++i) e[i] = a[i] + b[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r(dim_);
  for (const auto& [e, c] : terms_) r.add_term(e, c * s);
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r += o;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  r -= o;
  return r;
}

PolyVectorField::PolyVectorField(std::size_t dim) : components_(dim, Polynomial(dim)) {}

PolyVectorField::PolyVectorField(std::vector<Polynomial> components)
    : components_(std::move(components)) {
  for (const auto& c : components_) {
    if (c.dim() != components_.size()) {
      throw ValidationError("component dimension differs from number of components");
    }
  }
}

PolyVectorField PolyVectorField::from_monomials(
    std::size_t dim, const std::vector<std::vector<Monomial>>& components) {
  if (components.size() != dim) {
    throw ValidationError("expected " + std::to_string(dim) + " components, got " +
                          std::to_string(components.size()));
  }
  std::vector<Polynomial> polys;
  polys.reserve(dim);
  for (const auto& comp : components) {
    Polynomial p(dim);
    for (const auto& mono : comp) p.add_term(mono.exponents, mono.coefficient);
    polys.push_back(std::move(p));
  }
  return PolyVectorField(std::move(polys));
}

PolyVectorField PolyVectorField::constant(const Vector& v) {
  const auto dim = static_cast<std::size_t>(v.size());
  std::vector<Polynomial> polys;
  for (std::size_t i = 0; i < dim; ++i) {
    polys.push_back(Polynomial::constant(dim, v[static_cast<Eigen::Index>(i)]));
  }
  return PolyVectorField(std::move(polys));
}

bool PolyVectorField::is_zero() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const Polynomial& p) { return p.is_zero(); });
}

PolyVectorField PolyVectorField::operator+(const PolyVectorField& o) const {
  if (o.dim() != dim()) throw ValidationError("vector field dimension mismatch");
  std::vector<Polynomial> r;
  for (std::size_t i = 0; i < dim(); ++i) r.push_back(components_[i] + o.components_[i]);
  return PolyVectorField(std::move(r));
}

PolyVectorField PolyVectorField::operator-(const PolyVectorField& o) const {
  if (o.dim() != dim()) throw ValidationError("vector field dimension mismatch");
  std::vector<Polynomial> r;
  for (std::size_t i = 0; i < dim(); ++i) r.push_back(components_[i] - o.components_[i]);
  return PolyVectorField(std::move(r));
}

PolyVectorField PolyVectorField::operator*(double s) const {
  std::vector<Polynomial> r;
  for (const auto& c : components_) r.push_back(c * s);
  return PolyVectorField(std::move(r));
}

Vector evaluate(const PolyVectorField& f, const Vector& q) {
  if (static_cast<std::size_t>(q.size()) != f.dim()) {
    throw ValidationError("point dimension mismatch");
  }
  Vector v(q.size());
  for (std::size_t i = 0; i < f.dim(); ++i) {
    v[static_cast<Eigen::Index>(i)] = f.component(i).evaluate(q);
  }
  return v;
}

Matrix jacobian(const PolyVectorField& f, const Vector& q) {
  if (static_cast<std::size_t>(q.size()) != f.dim()) {
    throw ValidationError("point dimension mismatch");
  }
  const auto n = static_cast<Eigen::Index>(f.dim());
  Matrix J = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      J(i, j) = f.component(static_cast<std::size_t>(i))
                    .derivative(static_cast<std::size_t>(j))
                    .evaluate(q);
    }
  }
  return J;
}

PolyVectorField lie_bracket(const PolyVectorField& f, const PolyVectorField& g) {
  if (f.dim() != g.dim()) throw ValidationError("vector field dimension mismatch");
  const std::size_t n = f.dim();
  std::vector<Polynomial> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial c(n);
    for (std::size_t j = 0; j < n; ++j) {
      c += g.component(i).derivative(j) * f.component(j);
      c -= f.component(i).derivative(j) * g.component(j);
    }
    out.push_back(std::move(c));
  }
  return PolyVectorField(std::move(out));
}

ControlAffineSystem::ControlAffineSystem(int n, int m, std::vector<PolyVectorField> fields)
    : n_(n), m_(m), fields_(std::move(fields)) {
  if (n <= 0 || m < 0) throw ValidationError("n must be positive and m non-negative");
  if (2 * m + 1 > n) throw ValidationError("2m+1 must not exceed n");
  if (static_cast<int>(fields_.size()) != 2 * m + 1) {
    throw ValidationError("expected " + std::to_string(2 * m + 1) + " fields, got " +
                          std::to_string(fields_.size()));
  }
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (static_cast<int>(fields_[i].dim()) != n) {
      throw ValidationError("field " + std::to_string(i) + " has wrong dimension");
    }
  }
}

const PolyVectorField& ControlAffineSystem::field(int i) const {
  if (i < 0 || i > 2 * m_) throw ValidationError("field index out of range");
  return fields_[static_cast<std::size_t>(i)];
}

void check_multi_index(const ControlAffineSystem& sys, const MultiIndex& D) {
  if (D.empty()) throw ValidationError("multi-index must be nonempty");
  for (int i : D) {
    if (i < 0 || i > 2 * sys.m()) {
      throw ValidationError("multi-index entry " + std::to_string(i) + " outside {0,...," +
                            std::to_string(2 * sys.m()) + "}");
    }
  }
}

PolyVectorField iterated_bracket(const ControlAffineSystem& sys, const MultiIndex& D) {
  check_multi_index(sys, D);
  PolyVectorField acc = sys.field(D.back());
  for (auto it = D.rbegin() + 1; it != D.rend(); ++it) {
    acc = lie_bracket(sys.field(*it), acc);
  }
  return acc;
}

const PolyVectorField& BracketTable::get(const MultiIndex& D) {
  if (auto it = cache_.find(D); it != cache_.end()) return it->second;
  check_multi_index(*sys_, D);
  PolyVectorField f = D.size() == 1
                          ? sys_->field(D[0])
                          : lie_bracket(sys_->field(D[0]),
                                        get(MultiIndex(D.begin() + 1, D.end())));
  return cache_.emplace(D, std::move(f)).first->second;
}

bool frame_independent(const ControlAffineSystem& sys, const Vector& q, double tol) {
  const int k = 2 * sys.m() + 1;
  Matrix F(k, sys.n());
  for (int i = 0; i < k; ++i) F.row(i) = evaluate(sys.field(i), q).transpose();
  if (!F.allFinite()) return false;
  Eigen::JacobiSVD<Matrix> svd(F);
  const auto& s = svd.singularValues();
  if (s.size() < k || s[0] == 0.0) return false;
  return s[k - 1] > tol * s[0];
}

}  // namespace fullerkit
