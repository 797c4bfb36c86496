// Copyright 2026 The qcss Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcss/core.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace qcss {
namespace {

Instance CounterexampleInstance() {
  return Instance({{1.00, 0.99, 1}, {0.98, 0.78, 1}, {0.97, 0.47, 1}}, 0.99, 1.0);
}

Instance RandomInstance(std::mt19937_64& rng, int n, double alpha) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Agent> agents(n);
  for (Agent& a : agents) a = {u(rng), u(rng), 1};
  return Instance(agents, alpha, 1.0);
}

Selection RandomSelection(std::mt19937_64& rng, std::size_t n) {
  Selection sel = Selection::Empty(n);
  for (int& c : sel.counts) c = static_cast<int>(rng() & 1U);
  return sel;
}

TEST(InstanceTest, RejectsInvalidInput) {
  EXPECT_THROW(Instance({}, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(Instance({{1.2, 0.1, 1}}, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(Instance({{-0.1, 0.1, 1}}, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(Instance({{0.5, -0.1, 1}}, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(Instance({{0.5, 0.1, 0}}, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(Instance({{0.5, 0.1, 1}}, 1.5, 1.0), std::invalid_argument);
  EXPECT_THROW(Instance({{0.5, 0.1, 1}}, 0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(Instance({{0.5, NAN, 1}}, 0.5, 1.0), std::invalid_argument);
}

TEST(InstanceTest, EstimateDomainAcceptsOptimisticQualities) {
  const Instance inst({{1.3, 0.1, 1}}, 1.05, 1.0, QualityDomain::kEstimate);
  EXPECT_DOUBLE_EQ(inst.unit_utility(0), 1.2);
  EXPECT_THROW(Instance({{INFINITY, 0.1, 1}}, 0.5, 1.0, QualityDomain::kEstimate),
               std::invalid_argument);
}

TEST(InstanceTest, UnitUtility) {
  const Instance inst({{0.8, 10.0, 1}}, 0.5, 100.0);
  EXPECT_DOUBLE_EQ(inst.unit_utility(0), 70.0);
}

TEST(SplitUnitsTest, ExpandsCapacity) {
  const Instance inst({{0.8, 0.1, 3}}, 0.5, 1.0);
  const SplitInstance split = split_units(inst);
  ASSERT_EQ(split.units.size(), 3u);
  for (const Agent& a : split.units.agents()) {
    EXPECT_EQ(a.quality, 0.8);
    EXPECT_EQ(a.cost, 0.1);
    EXPECT_EQ(a.capacity, 1);
  }
  EXPECT_TRUE(split.units.has_unit_capacity());
}

TEST(SplitUnitsTest, UnitCapacityIsIdentity) {
  const Instance inst = CounterexampleInstance();
  const SplitInstance split = split_units(inst);
  ASSERT_EQ(split.units.size(), inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    EXPECT_EQ(split.units.agent(i).quality, inst.agent(i).quality);
    EXPECT_EQ(split.units.agent(i).cost, inst.agent(i).cost);
    EXPECT_EQ(split.origin[i], i);
  }
  EXPECT_EQ(split.units.alpha(), inst.alpha());
  EXPECT_EQ(split.units.revenue_scale(), inst.revenue_scale());
}

TEST(SplitUnitsTest, PreservesOrder) {
  const Instance inst({{0.9, 0.1, 2}, {0.6, 0.2, 1}}, 0.7, 1.0);
  const SplitInstance split = split_units(inst);
  EXPECT_EQ(split.origin, (std::vector<std::size_t>{0, 0, 1}));
  EXPECT_EQ(split.units.agent(1).quality, 0.9);
  EXPECT_EQ(split.units.agent(2).quality, 0.6);
}

// Any unit selection folds back to a count vector with the same utility and
// average quality.
TEST(SplitUnitsTest, MergePreservesEvaluation) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Agent> agents(1 + rng() % 5);
    for (Agent& a : agents) a = {u(rng), u(rng), 1 + static_cast<int>(rng() % 4)};
    const Instance inst(agents, 0.6, 2.0);
    const SplitInstance split = split_units(inst);
    const Selection unit_sel = RandomSelection(rng, split.units.size());
    const Selection merged = merge_units(split, unit_sel, inst.size());
    const Evaluation a = evaluate_selection(split.units, unit_sel);
    const Evaluation b = evaluate_selection(inst, merged);
    EXPECT_NEAR(a.utility, b.utility, 1e-12);
    EXPECT_EQ(a.feasible, b.feasible);
    EXPECT_EQ(merged.total_units(), unit_sel.total_units());
  }
}

TEST(EvaluateSelectionTest, EmptySelectionIsFeasible) {
  const Evaluation eval =
      evaluate_selection(CounterexampleInstance(), Selection::Empty(3));
  EXPECT_EQ(eval.utility, 0.0);
  EXPECT_FALSE(eval.expected_avg_quality.has_value());
  EXPECT_TRUE(eval.feasible);
}

TEST(EvaluateSelectionTest, CounterexampleOptimum) {
  const Evaluation eval =
      evaluate_selection(CounterexampleInstance(), Selection{{1, 1, 0}});
  EXPECT_NEAR(eval.utility, 0.21, 1e-12);
  ASSERT_TRUE(eval.expected_avg_quality.has_value());
  EXPECT_NEAR(*eval.expected_avg_quality, 0.99, 1e-12);
  EXPECT_TRUE(eval.feasible);
}

TEST(EvaluateSelectionTest, CounterexampleFirstAndThirdViolate) {
  const Evaluation eval =
      evaluate_selection(CounterexampleInstance(), Selection{{1, 0, 1}});
  EXPECT_NEAR(*eval.expected_avg_quality, 0.985, 1e-12);
  EXPECT_FALSE(eval.feasible);
}

TEST(EvaluateSelectionTest, Errors) {
  const Instance inst = CounterexampleInstance();
  EXPECT_THROW(evaluate_selection(inst, Selection{{1, 0}}), std::invalid_argument);
  EXPECT_THROW(evaluate_selection(inst, Selection{{2, 0, 0}}), std::invalid_argument);
  EXPECT_THROW(evaluate_selection(inst, Selection{{-1, 0, 0}}), std::invalid_argument);
}

TEST(EvaluateSelectionTest, CountsMultiplyUnits) {
  const Instance inst({{0.9, 0.1, 2}, {0.6, 0.2, 1}}, 0.7, 1.0);
  const Evaluation eval = evaluate_selection(inst, Selection{{2, 1}});
  EXPECT_NEAR(eval.utility, 2 * 0.8 + 0.4, 1e-12);
  EXPECT_NEAR(*eval.expected_avg_quality, 0.8, 1e-12);
}

TEST(EvaluateSelectionTest, ThresholdTieIsFeasible) {
  const Instance inst({{0.5, 0.0, 1}, {0.9, 0.0, 1}}, 0.7, 1.0);
  EXPECT_TRUE(evaluate_selection(inst, Selection{{1, 1}}).feasible);
}

// Feasibility verdict agrees with a direct recomputation of the average.
TEST(EvaluateSelectionTest, FeasibilityDoubleEntry) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const Instance inst = RandomInstance(rng, 1 + static_cast<int>(rng() % 12), 0.7);
    const Selection sel = RandomSelection(rng, inst.size());
    double q = 0.0;
    int m = 0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (sel.counts[i]) {
        q += inst.agent(i).quality;
        ++m;
      }
    }
    const bool expected = m == 0 || q / m >= inst.alpha() - 1e-12;
    EXPECT_EQ(evaluate_selection(inst, sel).feasible, expected);
  }
}

TEST(EvaluateSelectionTest, UtilityMonotoneInQuality) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Instance inst = RandomInstance(rng, 8, 0.7);
    const Selection sel = RandomSelection(rng, inst.size());
    std::vector<Agent> raised = inst.agents();
    const std::size_t i = rng() % raised.size();
    raised[i].quality += (1.0 - raised[i].quality) * u(rng);
    const Instance up(raised, inst.alpha(), inst.revenue_scale());
    EXPECT_LE(evaluate_selection(inst, sel).utility,
              evaluate_selection(up, sel).utility + 1e-12);
  }
}

TEST(EvaluateSelectionTest, BoundedSmoothness) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const double scale = 0.5 + 4.0 * u(rng);
    std::vector<Agent> a(n), b(n);
    double lambda = 0.0;
    for (int i = 0; i < n; ++i) {
      a[i] = {u(rng), u(rng), 1};
      b[i] = {u(rng), a[i].cost, 1};
      lambda = std::max(lambda, std::abs(a[i].quality - b[i].quality));
    }
    const Instance ia(a, 0.7, scale), ib(b, 0.7, scale);
    const Selection sel = RandomSelection(rng, n);
    const double diff = std::abs(evaluate_selection(ia, sel).utility -
                                 evaluate_selection(ib, sel).utility);
    EXPECT_LE(diff, n * scale * lambda + 1e-12);
  }
}

TEST(HoeffdingBoundTest, Values) {
  EXPECT_NEAR(hoeffding_bound(0.1, 1000), 2.061153622438558e-09, 1e-20);
  EXPECT_NEAR(hoeffding_bound(0.05, 200), 0.36787944117144233, 1e-15);
  EXPECT_NEAR(hoeffding_bound(1e-12, 7), 1.0, 1e-15);
}

TEST(HoeffdingBoundTest, Errors) {
  EXPECT_THROW(hoeffding_bound(0.0, 10), std::invalid_argument);
  EXPECT_THROW(hoeffding_bound(-0.1, 10), std::invalid_argument);
  EXPECT_THROW(hoeffding_bound(0.1, 0), std::invalid_argument);
}

TEST(RealizedAvgQualityTest, Means) {
  EXPECT_EQ(realized_avg_quality(std::vector<int>{1, 1, 0, 1}), 0.75);
  EXPECT_EQ(realized_avg_quality(std::vector<int>{1, 1, 1}), 1.0);
  EXPECT_THROW(realized_avg_quality(std::vector<int>{}), std::invalid_argument);
  EXPECT_THROW(realized_avg_quality(std::vector<int>{2}), std::invalid_argument);
}

TEST(RealizedAvgQualityTest, ConcentratesAroundQuality) {
  std::mt19937_64 rng(11);
  std::bernoulli_distribution draw(0.8);
  int outside = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> outcomes(1000);
    for (int& x : outcomes) x = draw(rng) ? 1 : 0;
    if (std::abs(realized_avg_quality(outcomes) - 0.8) > 0.05) ++outside;
  }
  // P(|mean - 0.8| > 0.05) <= 2 exp(-5) ~ 0.013 per trial.
  EXPECT_LE(outside, 10);
}

// Realized averages of pools with q_av >= alpha fall below alpha - eps no
// more often than the bound allows (3x slack for sampling noise).
TEST(HoeffdingBoundTest, BoundsRealizedAverage) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double alpha = 0.7;
  for (const double eps : {0.05, 0.1}) {
    for (const int m : {50, 200}) {
      // Mixed pool: half the units below alpha, rescaled so q_av == alpha.
      std::vector<double> q(m);
      for (int j = 0; j < m; ++j) q[j] = j % 2 == 0 ? 0.5 + 0.1 * u(rng) : 0.95;
      double mean = 0.0;
      for (double v : q) mean += v;
      mean /= m;
      for (double& v : q) v = std::min(1.0, v * alpha / mean);
      double check = 0.0;
      for (double v : q) check += v;
      ASSERT_GE(check / m, alpha - 1e-9);

      const int trials = 100000;
      int violations = 0;
      std::vector<int> outcomes(m);
      for (int t = 0; t < trials; ++t) {
        for (int j = 0; j < m; ++j) outcomes[j] = u(rng) < q[j] ? 1 : 0;
        if (realized_avg_quality(outcomes) < alpha - eps) ++violations;
      }
      EXPECT_LE(static_cast<double>(violations) / trials,
                3.0 * hoeffding_bound(eps, m))
          << "eps=" << eps << " m=" << m;
    }
  }
}

}  // namespace
}  // namespace qcss
