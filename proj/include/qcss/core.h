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

// Domain model for quality-constrained subset selection.
//
// A planner buys units from agents. Agent i has an expected Bernoulli quality
// q_i, a per-unit cost c_i and a capacity k_i. Each unit bought earns
// r_i = R * q_i - c_i. A selection x is feasible when the expected average
// quality sum(x_i q_i) / sum(x_i) is at least alpha. The empty selection is
// feasible by convention and has utility 0.

#ifndef QCSS_CORE_H_
#define QCSS_CORE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qcss {

// Slack applied to every "average quality >= alpha" comparison, so that
// summation order does not flip a verdict on boundary selections.
inline constexpr double kFeasibilityTolerance = 1e-12;

struct Agent {
  double quality = 0.0;
  double cost = 0.0;
  int capacity = 1;
};

// Qualities handed to a solver are either probabilities or optimistic
// estimates (upper confidence bounds), which may exceed 1.
enum class QualityDomain { kProbability, kEstimate };

class Instance {
 public:
  // Throws std::invalid_argument when any invariant is violated: no agents,
  // quality outside [0,1] (or negative / non-finite for kEstimate), negative
  // cost, capacity < 1, alpha outside [0,1], or revenue_scale <= 0.
  Instance(std::vector<Agent> agents, double alpha, double revenue_scale,
           QualityDomain domain = QualityDomain::kProbability);

  const std::vector<Agent>& agents() const { return agents_; }
  const Agent& agent(std::size_t i) const { return agents_[i]; }
  std::size_t size() const { return agents_.size(); }
  double alpha() const { return alpha_; }
  double revenue_scale() const { return revenue_scale_; }
  QualityDomain domain() const { return domain_; }

  // r_i = R * q_i - c_i.
  double unit_utility(std::size_t i) const {
    return revenue_scale_ * agents_[i].quality - agents_[i].cost;
  }
  bool has_unit_capacity() const;

 private:
  std::vector<Agent> agents_;
  double alpha_;
  double revenue_scale_;
  QualityDomain domain_;
};

struct Selection {
  std::vector<int> counts;

  static Selection Empty(std::size_t n) { return {std::vector<int>(n, 0)}; }
  std::size_t size() const { return counts.size(); }
  long long total_units() const;
  bool operator==(const Selection&) const = default;
};

struct Evaluation {
  double utility = 0.0;
  // Unset for the empty selection, where the average is undefined.
  std::optional<double> expected_avg_quality;
  bool feasible = true;
};

// Shared feasibility predicate: sum_quality / units >= alpha - tolerance.
// Zero units is vacuously feasible.
bool meets_threshold(double quality_sum, double units, double alpha);

// Throws std::invalid_argument on a dimension mismatch or when a count is
// outside [0, capacity].
Evaluation evaluate_selection(const Instance& instance, const Selection& sel);

// Unit-capacity view of an instance together with the index of the original
// agent behind every unit.
struct SplitInstance {
  Instance units;
  std::vector<std::size_t> origin;
};

// Replaces every agent of capacity m by m adjacent unit-capacity copies,
// preserving agent order.
SplitInstance split_units(const Instance& instance);

// Folds a selection over split units back onto the original agents.
Selection merge_units(const SplitInstance& split, const Selection& unit_sel,
                      std::size_t original_size);

// exp(-2 eps^2 m): bound on P(realized average < alpha - eps | q_av >= alpha)
// for m independent Bernoulli units. Throws std::invalid_argument when
// eps <= 0 or m < 1.
double hoeffding_bound(double epsilon, std::int64_t m);

// Mean of 0/1 realizations. Throws std::invalid_argument on empty input.
double realized_avg_quality(std::span<const int> outcomes);

}  // namespace qcss

#endif  // QCSS_CORE_H_
