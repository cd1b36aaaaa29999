// Copyright 2026 The rankfuse Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "json.hpp"
#include "rankfuse/error.hpp"
#include "rankfuse/fge.hpp"

namespace rankfuse::fge {
namespace {

ScheduleConfig rates_config(long long cycle, long long total) { return {2e-5, 2e-7, cycle, total}; }

TEST(CyclePosition, Examples) {
  EXPECT_EQ(cycle_position(1, 4), 0.25);
  EXPECT_EQ(cycle_position(4, 4), 1.0);
  EXPECT_EQ(cycle_position(5, 4), 0.25);
  EXPECT_THROW(cycle_position(0, 4), ValidationError);
  EXPECT_THROW(cycle_position(1, 0), ValidationError);
}

TEST(LearningRate, Examples) {
  const auto cfg = rates_config(100, 1000);
  EXPECT_EQ(learning_rate(50, cfg), 2e-7);
  EXPECT_EQ(learning_rate(100, cfg), 2e-5);
  EXPECT_NEAR(learning_rate(25, cfg), 1.01e-5, 1e-18);
}

TEST(LearningRate, Properties) {
  for (long long c : {2LL, 4LL, 10LL, 100LL, 250LL}) {
    const auto cfg = rates_config(c, 5 * c);
    const double lo = std::min(cfg.alpha1, cfg.alpha2), hi = std::max(cfg.alpha1, cfg.alpha2);
    for (long long i = 1; i <= 3 * c; ++i) {
      const double r = learning_rate(i, cfg);
      EXPECT_GE(r, lo);
      EXPECT_LE(r, hi);
      EXPECT_EQ(r, learning_rate(i + c, cfg));
      if ((i - 1) % c + 1 == c / 2) EXPECT_EQ(r, cfg.alpha2);
      if (i % c == 0) EXPECT_EQ(r, cfg.alpha1);
    }
    // Both branches meet at t = 0.5.
    const double t = 0.5;
    EXPECT_EQ((1 - 2 * t) * cfg.alpha1 + 2 * t * cfg.alpha2, (2 - 2 * t) * cfg.alpha2 + (2 * t - 1) * cfg.alpha1);
    // Rates step linearly toward the midpoint from both sides.
    if (c >= 4) {
      const long long m = c / 2;
      EXPECT_NEAR(learning_rate(m - 1, cfg) - learning_rate(m, cfg), learning_rate(m + 1, cfg) - learning_rate(m, cfg),
                  1e-18);
    }
  }
}

TEST(BuildSchedule, Examples) {
  EXPECT_EQ(build_schedule(rates_config(4, 12)).checkpoints, (std::vector<long long>{2, 6, 10}));
  EXPECT_TRUE(build_schedule(rates_config(10, 4)).checkpoints.empty());
  const auto s = build_schedule(rates_config(100, 100));
  EXPECT_EQ(s.checkpoints, (std::vector<long long>{50}));
  EXPECT_EQ(s.rates[49], 2e-7);
  EXPECT_EQ(s.rates.size(), 100u);
}

TEST(BuildSchedule, CheckpointCount) {
  for (long long c = 2; c <= 20; c += 2)
    for (long long total = 1; total <= 60; ++total) {
      const auto s = build_schedule(rates_config(c, total));
      const long long expected = total / c + ((total % c) >= c / 2 ? 1 : 0);
      EXPECT_EQ(static_cast<long long>(s.checkpoints.size()), expected);
      for (long long i : s.checkpoints) EXPECT_EQ(cycle_position(i, c), 0.5);
      for (long long i = 1; i <= total; ++i) EXPECT_EQ(s.rates[static_cast<std::size_t>(i - 1)], learning_rate(i, rates_config(c, total)));
    }
}

TEST(BuildSchedule, RejectsBadConfig) {
  EXPECT_THROW(build_schedule(rates_config(5, 10)), ValidationError);
  EXPECT_THROW(build_schedule(rates_config(0, 10)), ValidationError);
  EXPECT_THROW(build_schedule(rates_config(4, 0)), ValidationError);
  EXPECT_THROW(build_schedule({1e-5, 1e-5, 4, 4}), ValidationError);
  EXPECT_THROW(build_schedule({-1e-5, 1e-5, 4, 4}), ValidationError);
}

TEST(ScheduleExport, JsonAndCsv) {
  const auto s = build_schedule(rates_config(4, 6));
  const auto doc = nlohmann::json::parse(schedule_to_json(s));
  EXPECT_EQ(doc.at("checkpoints").get<std::vector<long long>>(), (std::vector<long long>{2, 6}));
  EXPECT_EQ(doc.at("rates").get<std::vector<double>>(), s.rates);
  const auto csv = schedule_to_csv(s);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  EXPECT_EQ(csv.substr(0, 15), "iteration,rate\n");
  EXPECT_NE(csv.find("\n2,1.9999999999999999e-07\n"), std::string::npos);
}

TEST(TripletLoss, Examples) {
  EXPECT_EQ(triplet_hinge_loss(0, 0, 0), 2.25);
  EXPECT_EQ(triplet_hinge_loss(2, 0.5, -0.5), 0.0);
  EXPECT_THROW(triplet_hinge_loss(NAN, 0, 0), ValidationError);
  EXPECT_THROW(triplet_hinge_loss(0, INFINITY, 0), ValidationError);
  EXPECT_EQ(hinge(1, 0), 0.0);
  EXPECT_EQ(hinge(0, 1), 2.0);
}

TEST(TripletLoss, Properties) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 20000; ++t) {
    const double p = u(rng), a = u(rng), b = u(rng), d = std::fabs(u(rng));
    const double l = triplet_hinge_loss(p, a, b);
    EXPECT_GE(l, 0.0);
    EXPECT_LE(triplet_hinge_loss(p + d, a, b), l);
    EXPECT_GE(triplet_hinge_loss(p, a, b + d), l);
    // Subgradient in p is one of {-2, -1, 0}.
    const double h = 1e-6;
    const double slope = (triplet_hinge_loss(p + h, a, b) - l) / h;
    const bool near_kink = std::fabs(1 - p + a) < 2 * h || std::fabs(1 - p + b) < 2 * h;
    if (!near_kink) {
      EXPECT_TRUE(std::fabs(slope) < 1e-6 || std::fabs(slope + 1) < 1e-6 || std::fabs(slope + 2) < 1e-6) << slope;
    }
  }
}

}  // namespace
}  // namespace rankfuse::fge
