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

#include "fullerkit/fuller.hpp"
#include "fullerkit/vecfield.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fullerkit {

/// Property sweeps over seeded random instances. Each instance is computed
/// independently (OpenMP when `parallel`), then reduced serially in index
/// order, so the serial and parallel drivers report identical results.
struct SweepOptions {
  std::uint64_t seed = 42;
  std::vector<int> sizes{2, 4, 6, 8};
  int samples = 1000;
  bool mutate_adj_sign = false;
  bool parallel = true;
};

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;
  double worst = 0.0;      // worst observed statistic (relative residual, or margin)
  double tolerance = 0.0;
  std::string detail;      // first failing case, if any
};

/// Applies FULLERKIT_THREADS to the OpenMP runtime; returns the thread count in use.
int configure_threads();

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// f_0 = e_{n−1} + …, f_i = e_{i−1} + … with random monomials of degree ≤ degree.
ControlAffineSystem random_system(int n, int m, int degree, std::mt19937_64& rng,
                                  double amplitude = 0.5);

/// Σ x_i y_iᵀ − y_i x_iᵀ over m0 random pairs.
Matrix random_low_rank_skew(int k, int m0, std::mt19937_64& rng);

SuiteResult pfaffian_suite(int size, const SweepOptions& opts);
SuiteResult kernel_suite(int size, const SweepOptions& opts);
SuiteResult lexmin_suite(const SweepOptions& opts);
SuiteResult bracket_suite(const SweepOptions& opts);
SuiteResult phi0_suite(const SweepOptions& opts);
SuiteResult phi_consistency_suite(const SweepOptions& opts);
SuiteResult fuller_order_suite(int max_order, int seeds, const SweepOptions& opts);
SuiteResult strata_suite(int seeds, const SweepOptions& opts);
SuiteResult fuller_lemma_suite(int instances, const SweepOptions& opts);
SuiteResult fuller_corollary_suite(int instances, const SweepOptions& opts);

/// Every suite above, restricted to `opts.sizes` where sizes apply.
std::vector<SuiteResult> run_identities(const SweepOptions& opts);

/// Random union of `k` sets of order ≤ `j`, nested so that orders can stack.
CascadeSet random_union(int k, int j, std::mt19937_64& rng);

}  // namespace fullerkit
