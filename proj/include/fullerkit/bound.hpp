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

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace fullerkit {

using BigInt = boost::multiprecision::cpp_int;

struct BoundTerm {
  int m = 0;
  int steps = 0;      // (2m+1)·N
  BigInt n_star;      // upper bound on the number of admissible (ρ, J) traces
  BigInt k_m;         // (2(m+1)N + 1)·N* + 2n
};

struct FullerBound {
  int n = 0;
  int N = 0;
  std::vector<int> m_values;
  std::vector<BoundTerm> terms;
  BigInt K;  // upper bound, maximum of k_m
};

/// Number of nondecreasing sequences (ρ_0,…,ρ_steps) over {0,…,2m}, each step
/// weighted by the number of index subsets J_r ⊂ {1,…,2m} with |J_r| = ρ_r.
BigInt trace_count_upper(int m, int steps);

/// Explicit upper bound on the generic Fuller order in dimension n ≥ 3.
FullerBound fuller_bound(int n);

}  // namespace fullerkit
