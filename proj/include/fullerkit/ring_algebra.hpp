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

// Pfaffian, adjoint Pfaffian and determinant over an arbitrary commutative
// ring. Used with double for small matrices and with BracketPoly for the
// symbolic ladders.

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace fullerkit {

template <class T>
using SquareArray = std::vector<std::vector<T>>;

namespace detail {

template <class T>
T pfaffian_rec(const SquareArray<T>& a, std::vector<int>& active, const T& one) {
  if (active.empty()) return one;
  const int first = active.front();
  T total = one - one;
  for (std::size_t k = 1; k < active.size(); ++k) {
    const int j = active[k];
    std::vector<int> rest;
    rest.reserve(active.size() - 2);
    for (std::size_t l = 1; l < active.size(); ++l) {
      if (l != k) rest.push_back(active[l]);
    }
    T sub = pfaffian_rec(a, rest, one);
    T term = a[static_cast<std::size_t>(first)][static_cast<std::size_t>(j)] * sub;
    if (k % 2 == 1) {
      total = total + term;
    } else {
      total = total - term;
    }
  }
  return total;
}

}  // namespace detail

/// Signed perfect-matching sum over the rows listed in `rows`.
template <class T>
T pfaffian_of_rows(const SquareArray<T>& a, std::vector<int> rows, const T& one) {
  if (rows.size() % 2 == 1) return one - one;
  return detail::pfaffian_rec(a, rows, one);
}

template <class T>
T pfaffian_generic(const SquareArray<T>& a, const T& one) {
  std::vector<int> rows(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) rows[i] = static_cast<int>(i);
  return pfaffian_of_rows(a, rows, one);
}

/// Entry (i,j), i<j, is (-1)^(i+j) Pf(A without rows/cols i,j) in 0-based
/// indices; adj(A)·A = Pf(A)·Id.
template <class T>
SquareArray<T> adj_pfaffian_generic(const SquareArray<T>& a, const T& one) {
  const std::size_t k = a.size();
  const T zero = one - one;
  SquareArray<T> adj(k, std::vector<T>(k, zero));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      std::vector<int> rows;
      for (std::size_t l = 0; l < k; ++l) {
        if (l != i && l != j) rows.push_back(static_cast<int>(l));
      }
      T minor = pfaffian_of_rows(a, rows, one);
      if ((i + j) % 2 == 1) minor = zero - minor;
      adj[j][i] = zero - minor;
      adj[i][j] = std::move(minor);
    }
  }
  return adj;
}

/// Determinant by row-wise minor expansion memoized over column subsets
/// (k·2^(k-1) ring products). The last row multiplies only k stored minors.
/// guard(x, y) runs before each product x·y and guard(z) after each update.
template <class T, class Guard>
T determinant_generic(const SquareArray<T>& a, const T& one, Guard&& guard) {
  const std::size_t k = a.size();
  if (k == 0) return one;
  const T zero = one - one;
  std::unordered_map<std::uint32_t, T> prev;
  prev.emplace(0u, one);
  for (std::size_t r = 0; r < k; ++r) {
    std::unordered_map<std::uint32_t, T> next;
    for (const auto& [mask, value] : prev) {
      int before = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const std::uint32_t bit = 1u << c;
        if (mask & bit) {
          ++before;
          continue;
        }
        // Column c placed at row r; sign counts used columns to the right of c.
        const int used = static_cast<int>(r);
        const int right = used - before;
        guard(a[r][c], value);
        T term = a[r][c] * value;
        auto it = next.find(mask | bit);
        if (it == next.end()) it = next.emplace(mask | bit, zero).first;
        if (right % 2 == 0) {
          it->second = it->second + term;
        } else {
          it->second = it->second - term;
        }
        guard(it->second);
      }
    }
    prev = std::move(next);
  }
  return prev.at((k >= 32 ? 0u : (1u << k)) - 1u);
}

template <class T>
T determinant_generic(const SquareArray<T>& a, const T& one) {
  return determinant_generic(a, one, [](const auto&...) {});
}

}  // namespace fullerkit
