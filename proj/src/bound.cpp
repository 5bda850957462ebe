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

#include "fullerkit/bound.hpp"

#include "fullerkit/errors.hpp"

#include <algorithm>

namespace fullerkit {

namespace {

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

BigInt trace_count_upper(int m, int steps) {
  if (m < 1 || steps < 0) throw ValidationError("trace_count_upper needs m >= 1, steps >= 0");
  const int top = 2 * m;
  std::vector<BigInt> weight(static_cast<std::size_t>(top) + 1);
  for (int r = 0; r <= top; ++r) weight[static_cast<std::size_t>(r)] = binomial(top, r);
  std::vector<BigInt> count = weight;
  for (int s = 0; s < steps; ++s) {
    std::vector<BigInt> next(count.size());
    BigInt prefix = 0;
    for (std::size_t r = 0; r < count.size(); ++r) {
      prefix += count[r];
      next[r] = prefix * weight[r];
    }
    count = std::move(next);
  }
  BigInt total = 0;
  for (const BigInt& c : count) total += c;
  return total;
}

FullerBound fuller_bound(int n) {
  if (n < 3) throw ValidationError("bound needs n >= 3");
  FullerBound out;
  out.n = n;
  out.N = 2 * n;
  for (int m = 1; m <= (n - 1) / 2; ++m) {
    out.m_values.push_back(m);
    BoundTerm t;
    t.m = m;
    t.steps = (2 * m + 1) * out.N;
    t.n_star = trace_count_upper(m, t.steps);
    t.k_m = BigInt(2 * (m + 1) * out.N + 1) * t.n_star + 2 * n;
    out.K = std::max(out.K, t.k_m);
    out.terms.push_back(std::move(t));
  }
  return out;
}

}  // namespace fullerkit
