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

#include <cmath>
#include <stdexcept>
#include <string>

namespace qcss {

Instance::Instance(std::vector<Agent> agents, double alpha,
                   double revenue_scale, QualityDomain domain)
    : agents_(std::move(agents)),
      alpha_(alpha),
      revenue_scale_(revenue_scale),
      domain_(domain) {
  if (agents_.empty()) {
    throw std::invalid_argument("instance needs at least one agent");
  }
  if (!(alpha_ >= 0.0 && alpha_ <= 1.0) && domain_ == QualityDomain::kProbability) {
    throw std::invalid_argument("alpha must lie in [0,1]");
  }
  if (!std::isfinite(alpha_)) {
    throw std::invalid_argument("alpha must be finite");
  }
  if (!(revenue_scale_ > 0.0) || !std::isfinite(revenue_scale_)) {
    throw std::invalid_argument("revenue scale must be positive");
  }
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const Agent& a = agents_[i];
    const bool quality_ok =
        domain_ == QualityDomain::kProbability
            ? (a.quality >= 0.0 && a.quality <= 1.0)
            : (a.quality >= 0.0 && std::isfinite(a.quality));
    if (!quality_ok) {
      throw std::invalid_argument("agent " + std::to_string(i) +
                                  ": quality out of range");
    }
    if (!(a.cost >= 0.0) || !std::isfinite(a.cost)) {
      throw std::invalid_argument("agent " + std::to_string(i) +
                                  ": cost must be finite and >= 0");
    }
    if (a.capacity < 1) {
      throw std::invalid_argument("agent " + std::to_string(i) +
                                  ": capacity must be >= 1");
    }
  }
}

bool Instance::has_unit_capacity() const {
  for (const Agent& a : agents_) {
    if (a.capacity != 1) return false;
  }
  return true;
}

long long Selection::total_units() const {
  long long total = 0;
  for (int c : counts) total += c;
  return total;
}

bool meets_threshold(double quality_sum, double units, double alpha) {
  if (units <= 0.0) return true;
  return quality_sum / units >= alpha - kFeasibilityTolerance;
}

Evaluation evaluate_selection(const Instance& instance, const Selection& sel) {
  if (sel.size() != instance.size()) {
    throw std::invalid_argument("selection has " + std::to_string(sel.size()) +
                                " entries, instance has " +
                                std::to_string(instance.size()) + " agents");
  }
  Evaluation eval;
  double quality_sum = 0.0;
  double units = 0.0;
  for (std::size_t i = 0; i < sel.size(); ++i) {
    const int x = sel.counts[i];
    if (x < 0 || x > instance.agent(i).capacity) {
      throw std::invalid_argument("selection count for agent " +
                                  std::to_string(i) + " exceeds capacity");
    }
    if (x == 0) continue;
    eval.utility += x * instance.unit_utility(i);
    quality_sum += x * instance.agent(i).quality;
    units += x;
  }
  if (units > 0.0) eval.expected_avg_quality = quality_sum / units;
  eval.feasible = meets_threshold(quality_sum, units, instance.alpha());
  return eval;
}

SplitInstance split_units(const Instance& instance) {
  std::vector<Agent> units;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const Agent& a = instance.agent(i);
    for (int k = 0; k < a.capacity; ++k) {
      units.push_back({a.quality, a.cost, 1});
      origin.push_back(i);
    }
  }
  return {Instance(std::move(units), instance.alpha(),
                   instance.revenue_scale(), instance.domain()),
          std::move(origin)};
}

Selection merge_units(const SplitInstance& split, const Selection& unit_sel,
                      std::size_t original_size) {
  if (unit_sel.size() != split.origin.size()) {
    throw std::invalid_argument("unit selection does not match split instance");
  }
  Selection merged = Selection::Empty(original_size);
  for (std::size_t u = 0; u < unit_sel.size(); ++u) {
    merged.counts.at(split.origin[u]) += unit_sel.counts[u];
  }
  return merged;
}

double hoeffding_bound(double epsilon, std::int64_t m) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("hoeffding_bound: epsilon must be > 0");
  }
  if (m < 1) throw std::invalid_argument("hoeffding_bound: m must be >= 1");
  return std::exp(-2.0 * epsilon * epsilon * static_cast<double>(m));
}

double realized_avg_quality(std::span<const int> outcomes) {
  if (outcomes.empty()) {
    throw std::invalid_argument("realized_avg_quality: no outcomes");
  }
  std::int64_t ones = 0;
  for (int x : outcomes) {
    if (x != 0 && x != 1) {
      throw std::invalid_argument("realized_avg_quality: outcomes must be 0/1");
    }
    ones += x;
  }
  return static_cast<double>(ones) / static_cast<double>(outcomes.size());
}

}  // namespace qcss
