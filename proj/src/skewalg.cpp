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

#include "fullerkit/skewalg.hpp"

#include "fullerkit/errors.hpp"
#include "fullerkit/ring_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fullerkit {

namespace {

SquareArray<double> to_array(const SkewMatrix& a) {
  const int k = a.size();
  SquareArray<double> out(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k)));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a(i, j);
  }
  return out;
}

SkewMatrix principal(const SkewMatrix& a, const std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  Matrix s(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) s(i, j) = a(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  return SkewMatrix::from_dense(s);
}

bool next_subset(std::vector<int>& s, int n) {
  const int k = static_cast<int>(s.size());
  int i = k - 1;
  while (i >= 0 && s[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++s[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

}  // namespace

SkewMatrix SkewMatrix::from_upper(int size, const std::vector<double>& upper) {
  if (size < 0) throw ValidationError("negative matrix size");
  const std::size_t expected = static_cast<std::size_t>(size) * static_cast<std::size_t>(size - 1 < 0 ? 0 : size - 1) / 2;
  if (upper.size() != expected) {
    throw ValidationError("strict upper triangle of a " + std::to_string(size) + "x" +
                          std::to_string(size) + " matrix needs " + std::to_string(expected) +
                          " entries, got " + std::to_string(upper.size()));
  }
  SkewMatrix s;
  s.a_ = Matrix::Zero(size, size);
  std::size_t l = 0;
  for (int i = 0; i < size; ++i) {
    for (int j = i + 1; j < size; ++j) {
      s.a_(i, j) = upper[l];
      s.a_(j, i) = -upper[l];
      ++l;
    }
  }
  return s;
}

SkewMatrix SkewMatrix::from_dense(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("skew matrix must be square");
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i; j < a.cols(); ++j) {
      if (a(i, j) != -a(j, i)) {
        throw ValidationError("matrix is not skew-symmetric at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
    }
  }
  SkewMatrix s;
  s.a_ = a;
  return s;
}

SkewMatrix SkewMatrix::zero(int size) {
  SkewMatrix s;
  s.a_ = Matrix::Zero(size, size);
  return s;
}

std::vector<double> SkewMatrix::upper() const {
  std::vector<double> u;
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) u.push_back(a_(i, j));
  }
  return u;
}

double pfaffian_matching(const SkewMatrix& a) {
  if (a.size() % 2 != 0) throw ValidationError("Pfaffian of odd-size matrix");
  return pfaffian_generic(to_array(a), 1.0);
}

double pfaffian_elimination(const SkewMatrix& a) {
  if (a.size() % 2 != 0) throw ValidationError("Pfaffian of odd-size matrix");
  Matrix w = a.dense();
  const Eigen::Index n = w.rows();
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = k + 1;
    w.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      w.row(k + 1).swap(w.row(kp));
      w.col(k + 1).swap(w.col(kp));
      pf = -pf;
    }
    if (w(k + 1, k) == 0.0) return 0.0;
    pf *= w(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index r = n - k - 2;
      Vector tau = w.row(k).tail(r).transpose() / w(k, k + 1);
      Vector col = w.col(k + 1).tail(r);
      w.bottomRightCorner(r, r) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

double pfaffian(const SkewMatrix& a) {
  return a.size() <= 8 ? pfaffian_matching(a) : pfaffian_elimination(a);
}

SkewMatrix adj_pfaffian(const SkewMatrix& a) {
  const int k = a.size();
  if (k % 2 != 0) throw ValidationError("adjoint Pfaffian of odd-size matrix");
  Matrix out = Matrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      std::vector<int> rest;
      for (int l = 0; l < k; ++l) {
        if (l != i && l != j) rest.push_back(l);
      }
      double minor = pfaffian(principal(a, rest));
      if ((i + j) % 2 == 1) minor = -minor;
      out(i, j) = minor;
      out(j, i) = -minor;
    }
  }
  return SkewMatrix::from_dense(out);
}

EvenRank even_rank(const SkewMatrix& a, double tol) {
  if (!(tol > 0.0)) throw ValidationError("rank tolerance must be positive");
  EvenRank r;
  if (a.size() == 0) return r;
  Eigen::JacobiSVD<Matrix> svd(a.dense());
  const Vector& s = svd.singularValues();
  r.singular_values.assign(s.data(), s.data() + s.size());
  if (s[0] == 0.0) return r;
  int raw = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > tol * s[0]) ++raw;
  }
  r.odd_raw = raw % 2 == 1;
  r.rank = raw - (raw % 2);
  return r;
}

std::vector<std::vector<int>> lex_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> s(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) s[static_cast<std::size_t>(i)] = i;
  do {
    out.push_back(s);
  } while (next_subset(s, n));
  return out;
}

BlockDecomposition block_decompose_at_rank(const SkewMatrix& a, int m0, double tol) {
  const int k = a.size();
  if (m0 < 0 || 2 * m0 > k) throw ValidationError("half-rank out of range");
  BlockDecomposition dec;
  dec.m0 = m0;
  const double scale = a.size() == 0 ? 0.0 : a.dense().norm();
  const double threshold = tol * std::pow(std::max(scale, 1e-300), m0);
  bool found = false;
  std::vector<int> j0(static_cast<std::size_t>(2 * m0));
  for (int i = 0; i < 2 * m0; ++i) j0[static_cast<std::size_t>(i)] = i;
  do {
    const double pf = pfaffian(principal(a, j0));
    if (std::abs(pf) > threshold) {
      dec.pf_a1 = pf;
      found = true;
      break;
    }
  } while (next_subset(j0, k));
  if (!found) {
    throw NumericalError("no principal submatrix of size " + std::to_string(2 * m0) +
                         " has Pfaffian above tolerance");
  }
  dec.j0 = j0;
  std::vector<int> rest;
  for (int i = 0; i < k; ++i) {
    if (!std::binary_search(j0.begin(), j0.end(), i)) rest.push_back(i);
  }
  dec.permutation = j0;
  dec.permutation.insert(dec.permutation.end(), rest.begin(), rest.end());
  dec.a1 = principal(a, j0);
  dec.a3 = principal(a, rest);
  dec.a2 = Matrix(2 * m0, k - 2 * m0);
  for (int i = 0; i < 2 * m0; ++i) {
    for (int j = 0; j < k - 2 * m0; ++j) {
      dec.a2(i, j) = a(j0[static_cast<std::size_t>(i)], rest[static_cast<std::size_t>(j)]);
    }
  }
  if (m0 == 0) dec.pf_a1 = 1.0;
  return dec;
}

BlockDecomposition block_decompose(const SkewMatrix& a, double tol) {
  if (a.size() == 0 || a.dense().isZero(0.0)) {
    throw ValidationError("block_decompose requires a nonzero matrix");
  }
  const EvenRank r = even_rank(a, tol);
  BlockDecomposition dec = block_decompose_at_rank(a, r.rank / 2, tol);
  dec.odd_rank_warning = r.odd_raw;
  return dec;
}

std::vector<Vector> kernel_basis(const SkewMatrix& a, const BlockDecomposition& dec) {
  const int k = a.size();
  const int r = 2 * dec.m0;
  if (static_cast<int>(dec.permutation.size()) != k || dec.a1.size() != r ||
      dec.a2.rows() != r || dec.a2.cols() != k - r) {
    throw ValidationError("decomposition does not match matrix");
  }
  const Matrix adj = r > 0 ? adj_pfaffian(dec.a1).dense() : Matrix(0, 0);
  const Matrix top = r > 0 ? Matrix(-adj * dec.a2) : Matrix(0, k - r);
  std::vector<Vector> basis;
  for (int i = 0; i < k - r; ++i) {
    Vector permuted = Vector::Zero(k);
    permuted.head(r) = top.col(i);
    permuted[r + i] = dec.pf_a1;
    Vector v = Vector::Zero(k);
    for (int l = 0; l < k; ++l) v[dec.permutation[static_cast<std::size_t>(l)]] = permuted[l];
    basis.push_back(std::move(v));
  }
  return basis;
}

double parskew_residual(const BlockDecomposition& dec) {
  const int r = 2 * dec.m0;
  if (dec.a3.size() == 0) return 0.0;
  Matrix res = dec.pf_a1 * dec.a3.dense();
  if (r > 0) res += dec.a2.transpose() * adj_pfaffian(dec.a1).dense() * dec.a2;
  return res.norm();
}

}  // namespace fullerkit
