//
// Copyright 2026 The Augbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef AUGBENCH_STATS_HPP_
#define AUGBENCH_STATS_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "augbench/rng.hpp"

// Aggregation of repeated-run scores and significance against a baseline
// condition. The test is a two-sided paired bootstrap over documents:
// both conditions score the same underlying documents, so the document-
// level score differences carry the comparison.

namespace augbench {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

/// Arithmetic mean and sample standard deviation (n-1 denominator);
/// sd is 0 when n = 1.
inline MeanSd aggregate(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("aggregate: no values");
  }
  MeanSd out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

/// Two-sided paired bootstrap on the mean document-level score
/// difference. Documents are resampled with replacement; the p-value is
/// twice the fraction of resamples whose mean difference opposes (or
/// zeroes) the observed difference, clamped to [0, 1]. An observed
/// difference of exactly 0 yields p = 1. Deterministic given the seed,
/// and symmetric in its two arguments.
inline double paired_bootstrap_test(const std::vector<double>& baseline,
                                    const std::vector<double>& condition,
                                    int iterations, RngStream& rng) {
  if (baseline.size() != condition.size() || baseline.empty()) {
    throw std::invalid_argument(
        "paired_bootstrap_test: mismatched or empty document score sets");
  }
  if (iterations < 1000) {
    throw std::invalid_argument(
        "paired_bootstrap_test: at least 1000 iterations required");
  }
  const std::size_t n = baseline.size();
  std::vector<double> diffs(n);
  double observed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diffs[i] = condition[i] - baseline[i];
    observed += diffs[i];
  }
  observed /= static_cast<double>(n);
  if (observed == 0.0) return 1.0;

  long opposing = 0;
  for (int it = 0; it < iterations; ++it) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += diffs[rng.bounded(n)];
    }
    const double resample_mean = sum / static_cast<double>(n);
    if (observed > 0.0 ? resample_mean <= 0.0 : resample_mean >= 0.0) {
      ++opposing;
    }
  }
  const double p =
      2.0 * static_cast<double>(opposing) / static_cast<double>(iterations);
  return p > 1.0 ? 1.0 : p;
}

/// Convenience overload: per-repetition score matrices (reps x docs) are
/// collapsed to per-document means across repetitions first, which is
/// exactly the replicated pairing for the mean-difference statistic.
inline double paired_bootstrap_test(
    const std::vector<std::vector<double>>& baseline_reps,
    const std::vector<std::vector<double>>& condition_reps, int iterations,
    RngStream& rng) {
  const auto collapse = [](const std::vector<std::vector<double>>& reps) {
    if (reps.empty() || reps[0].empty()) {
      throw std::invalid_argument("paired_bootstrap_test: empty score matrix");
    }
    const std::size_t docs = reps[0].size();
    std::vector<double> out(docs, 0.0);
    for (const auto& rep : reps) {
      if (rep.size() != docs) {
        throw std::invalid_argument(
            "paired_bootstrap_test: ragged score matrix");
      }
      for (std::size_t i = 0; i < docs; ++i) out[i] += rep[i];
    }
    for (double& v : out) v /= static_cast<double>(reps.size());
    return out;
  };
  return paired_bootstrap_test(collapse(baseline_reps),
                               collapse(condition_reps), iterations, rng);
}

struct SignificanceResult {
  double p_value = 1.0;
  bool significant = false;
  int m = 1;           // number of comparisons corrected for
  double alpha = 0.05; // family-wise level
};

/// Bonferroni correction over one comparison family: each p-value is
/// significant iff p < alpha / m with m the family size.
inline std::vector<SignificanceResult> bonferroni(
    const std::vector<double>& p_values, double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw std::invalid_argument("bonferroni: alpha must lie in (0, 1)");
  }
  std::vector<SignificanceResult> out;
  const int m = static_cast<int>(p_values.size());
  out.reserve(p_values.size());
  for (double p : p_values) {
    SignificanceResult r;
    r.p_value = p;
    r.m = m;
    r.alpha = alpha;
    r.significant = p < alpha / static_cast<double>(m);
    out.push_back(r);
  }
  return out;
}

}  // namespace augbench

#endif  // AUGBENCH_STATS_HPP_
