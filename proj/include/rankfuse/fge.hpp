// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rankfuse::fge {

/// Cyclical learning-rate schedule. The rate starts each cycle at
/// `alpha1`, falls linearly to `alpha2` at mid-cycle and climbs back to
/// `alpha1` at the cycle end. Iterations are 1-based mini-batch indices.
struct ScheduleConfig {
  double alpha1 = 2e-5;  // cycle endpoints
  double alpha2 = 2e-7;  // mid-cycle, where checkpoints are taken
  long long cycle_iters = 4;
  long long total_iters = 4;

  /// Throws ValidationError: alphas must be positive and distinct, the cycle
  /// even and >= 2, total >= 1.
  void validate() const;
};

struct Schedule {
  std::vector<double> rates;            // rates[i - 1] is the rate at iteration i
  std::vector<long long> checkpoints;   // ascending iterations with t = 0.5
};

/// (mod(i - 1, c) + 1) / c, in (0, 1].
double cycle_position(long long iteration, long long cycle_iters);

double learning_rate(long long iteration, const ScheduleConfig& cfg);

Schedule build_schedule(const ScheduleConfig& cfg);

/// {"rates": [...], "checkpoints": [...]}
std::string schedule_to_json(const Schedule& schedule);
/// Header `iteration,rate`, then one row per iteration.
std::string schedule_to_csv(const Schedule& schedule);

/// max(0, 1 - a + b)
double hinge(double a, double b);

/// hinge(p, n25) + hinge(p, n975) + 0.25 * hinge(n25, n975).
/// Throws ValidationError on non-finite input.
double triplet_hinge_loss(double positive, double negative_top, double negative_tail);

}  // namespace rankfuse::fge
