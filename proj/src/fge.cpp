// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include "rankfuse/fge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "rankfuse/error.hpp"

namespace rankfuse::fge {

void ScheduleConfig::validate() const {
  if (!(alpha1 > 0.0) || !(alpha2 > 0.0) || !std::isfinite(alpha1) || !std::isfinite(alpha2)) {
    throw ValidationError("schedule: learning rates must be positive and finite");
  }
  if (alpha1 == alpha2) throw ValidationError("schedule: alpha1 and alpha2 must differ");
  if (cycle_iters < 2 || cycle_iters % 2 != 0) {
    throw ValidationError("schedule: cycle length must be an even number >= 2, got " +
                          std::to_string(cycle_iters));
  }
  if (total_iters < 1) throw ValidationError("schedule: total iterations must be >= 1");
}

double cycle_position(long long iteration, long long cycle_iters) {
  if (iteration < 1) throw ValidationError("cycle position: iteration must be >= 1");
  if (cycle_iters < 1) throw ValidationError("cycle position: cycle length must be >= 1");
  return static_cast<double>((iteration - 1) % cycle_iters + 1) / static_cast<double>(cycle_iters);
}

double learning_rate(long long iteration, const ScheduleConfig& cfg) {
  const double t = cycle_position(iteration, cfg.cycle_iters);
  if (t <= 0.5) return (1.0 - 2.0 * t) * cfg.alpha1 + 2.0 * t * cfg.alpha2;
  return (2.0 - 2.0 * t) * cfg.alpha2 + (2.0 * t - 1.0) * cfg.alpha1;
}

Schedule build_schedule(const ScheduleConfig& cfg) {
  cfg.validate();
  Schedule s;
  s.rates.resize(static_cast<std::size_t>(cfg.total_iters));
  const long long half = cfg.cycle_iters / 2;
#pragma omp parallel for schedule(static)
  for (long long i = 1; i <= cfg.total_iters; ++i) {
    s.rates[static_cast<std::size_t>(i - 1)] = learning_rate(i, cfg);
  }
  for (long long i = half; i <= cfg.total_iters; i += cfg.cycle_iters) s.checkpoints.push_back(i);
  return s;
}

std::string schedule_to_json(const Schedule& schedule) {
  nlohmann::ordered_json doc;
  doc["rates"] = schedule.rates;
  doc["checkpoints"] = schedule.checkpoints;
  return doc.dump() + "\n";
}

std::string schedule_to_csv(const Schedule& schedule) {
  std::ostringstream out;
  out << "iteration,rate\n";
  char buf[64];
  for (std::size_t i = 0; i < schedule.rates.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", schedule.rates[i]);
    out << (i + 1) << ',' << buf << '\n';
  }
  return out.str();
}

double hinge(double a, double b) { return std::max(0.0, 1.0 - a + b); }

double triplet_hinge_loss(double positive, double negative_top, double negative_tail) {
  if (!std::isfinite(positive) || !std::isfinite(negative_top) || !std::isfinite(negative_tail)) {
    throw ValidationError("triplet hinge loss: inputs must be finite");
  }
  return hinge(positive, negative_top) + hinge(positive, negative_tail) +
         0.25 * hinge(negative_top, negative_tail);
}

}  // namespace rankfuse::fge
