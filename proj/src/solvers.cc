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

#include "qcss/solvers.h"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "subset_sums.h"

namespace qcss {
namespace {

using Clock = std::chrono::steady_clock;

void RequireUnitCapacity(const Instance& instance, std::string_view who) {
  if (!instance.has_unit_capacity()) {
    throw std::invalid_argument(std::string(who) +
                                ": instance must have unit capacities; "
                                "run split_units first");
  }
}

SolveResult Finish(const Instance& instance, Selection sel,
                   Clock::duration elapsed, std::string_view name) {
  SolveResult result;
  result.evaluation = evaluate_selection(instance, sel);
  if (!result.evaluation.feasible) {
    throw std::logic_error(std::string(name) + " produced an infeasible selection");
  }
  result.selection = std::move(sel);
  result.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed);
  result.solver_name = name;
  return result;
}

// Include/exclude search over G. The incumbent starts at "take nothing from
// G", which is always admissible because the S1 surplus is non-negative.
class BranchSearch {
 public:
  BranchSearch(const Instance& instance, const Partition& part)
      : instance_(instance), part_(part) {
    group_.reserve(part.s2.size() + part.s3.size());
    group_.insert(group_.end(), part.s2.begin(), part.s2.end());
    group_.insert(group_.end(), part.s3.begin(), part.s3.end());
    utility_.reserve(group_.size());
    for (std::size_t i : group_) utility_.push_back(instance.unit_utility(i));
    // best_gain_[k] = sum of positive utilities over group_[k..].
    best_gain_.assign(group_.size() + 1, 0.0);
    for (std::size_t k = group_.size(); k-- > 0;) {
      best_gain_[k] = best_gain_[k + 1] + std::max(utility_[k], 0.0);
    }
    current_.assign(group_.size(), 0);
    best_ = current_;
  }

  // Returns the chosen 0/1 flags, aligned with group().
  const std::vector<char>& Run() {
    Visit(0, part_.surplus, 0.0, static_cast<double>(part_.s1.size()));
    return best_;
  }

  const std::vector<std::size_t>& group() const { return group_; }

 private:
  void Visit(std::size_t k, double excess, double gain, double units) {
    if (k == group_.size()) {
      if (excess >= -kFeasibilityTolerance * std::max(units, 1.0) &&
          gain > best_gain_value_) {
        best_gain_value_ = gain;
        best_ = current_;
      }
      return;
    }
    if (gain + best_gain_[k] <= best_gain_value_) return;
    Visit(k + 1, excess, gain, units);
    current_[k] = 1;
    Visit(k + 1, excess + part_.deficits[group_[k]], gain + utility_[k],
          units + 1.0);
    current_[k] = 0;
  }

  const Instance& instance_;
  const Partition& part_;
  std::vector<std::size_t> group_;
  std::vector<double> utility_;
  std::vector<double> best_gain_;
  std::vector<char> current_;
  std::vector<char> best_;
  double best_gain_value_ = 0.0;
};

}  // namespace

Partition partition_agents(const Instance& instance) {
  Partition part;
  const double alpha = instance.alpha();
  part.deficits.resize(instance.size());
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const double q = instance.agent(i).quality;
    const bool above = q >= alpha;
    const bool profitable = instance.unit_utility(i) >= 0.0;
    part.deficits[i] = q - alpha;
    if (above && profitable) {
      part.s1.push_back(i);
      part.surplus += q - alpha;
    } else if (!above && profitable) {
      part.s2.push_back(i);
    } else if (above) {
      part.s3.push_back(i);
    } else {
      part.s4.push_back(i);
    }
  }
  return part;
}

SolveResult dpss_solve(const Instance& instance) {
  RequireUnitCapacity(instance, "dpss_solve");
  const auto start = Clock::now();
  const Partition part = partition_agents(instance);
  Selection sel = Selection::Empty(instance.size());
  for (std::size_t i : part.s1) sel.counts[i] = 1;
  BranchSearch search(instance, part);
  const std::vector<char>& chosen = search.Run();
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    if (chosen[k]) sel.counts[search.group()[k]] = 1;
  }
  const auto elapsed = Clock::now() - start;
  return Finish(instance, std::move(sel), elapsed, "dpss");
}

SolveResult gss_solve(const Instance& instance) {
  RequireUnitCapacity(instance, "gss_solve");
  const auto start = Clock::now();
  const double alpha = instance.alpha();
  const Partition part = partition_agents(instance);
  const std::size_t n = instance.size();

  std::vector<double> x(n, 0.0);
  for (std::size_t i : part.s1) x[i] = 1.0;

  // Revenue per unit of quality moved: for S2 the gain per unit of quality
  // lost, for S3 the loss per unit of quality gained (both positive).
  std::vector<double> rate(n, 0.0);
  for (std::size_t i : part.s2) rate[i] = instance.unit_utility(i) / (alpha - instance.agent(i).quality);
  std::vector<std::size_t> low = part.s2;
  std::vector<std::size_t> high;
  high.reserve(part.s3.size());
  for (std::size_t j : part.s3) {
    // Agents sitting exactly on alpha add cost without headroom.
    if (instance.agent(j).quality == alpha) continue;
    rate[j] = instance.unit_utility(j) / (alpha - instance.agent(j).quality);
    high.push_back(j);
  }
  std::stable_sort(low.begin(), low.end(),
                   [&](std::size_t a, std::size_t b) { return rate[a] > rate[b]; });
  std::stable_sort(high.begin(), high.end(),
                   [&](std::size_t a, std::size_t b) { return rate[a] < rate[b]; });

  double surplus = part.surplus;
  std::size_t p = 0;
  std::size_t h = 0;
  while (surplus > 0.0 && p < low.size()) {
    const std::size_t i = low[p];
    const double gap = alpha - instance.agent(i).quality;
    if (gap <= surplus) {
      x[i] = 1.0;
      surplus -= gap;
      ++p;
    } else {
      x[i] = surplus / gap;
      surplus = 0.0;
    }
  }

  // Each step moves the smaller of the two remaining quality masses, so at
  // least one side is exhausted.
  while (p < low.size() && h < high.size()) {
    const std::size_t i = low[p];
    const std::size_t j = high[h];
    if (rate[i] <= rate[j]) break;
    const double gap_i = alpha - instance.agent(i).quality;
    const double gap_j = instance.agent(j).quality - alpha;
    const double room_i = (1.0 - x[i]) * gap_i;
    const double room_j = (1.0 - x[j]) * gap_j;
    if (room_i <= room_j) {
      x[j] += room_i / gap_j;
      x[i] = 1.0;
      ++p;
    }
    if (room_j <= room_i) {
      x[i] += room_j / gap_i;
      x[j] = 1.0;
      ++h;
    }
    if (x[i] > 1.0) x[i] = 1.0;
    if (x[j] > 1.0) x[j] = 1.0;
  }
  if (h < high.size() && x[high[h]] > 0.0 && x[high[h]] < 1.0) x[high[h]] = 1.0;

  Selection sel = Selection::Empty(n);
  for (std::size_t i = 0; i < n; ++i) sel.counts[i] = x[i] >= 1.0 ? 1 : 0;
  const auto elapsed = Clock::now() - start;
  return Finish(instance, std::move(sel), elapsed, "gss");
}

SolveResult brute_force_solve(const Instance& instance) {
  RequireUnitCapacity(instance, "brute_force_solve");
  const std::size_t n = instance.size();
  if (n > kBruteForceMaxAgents) {
    throw std::invalid_argument(
        "brute_force_solve: " + std::to_string(n) + " agents exceeds the limit of " +
        std::to_string(kBruteForceMaxAgents) + "; use dpss_solve instead");
  }
  const auto start = Clock::now();

  std::vector<double> utility(n);
  std::vector<double> quality(n);
  for (std::size_t i = 0; i < n; ++i) {
    utility[i] = instance.unit_utility(i);
    quality[i] = instance.agent(i).quality;
  }
  // The empty mask seeds the incumbent; a strict improvement is needed to
  // replace it, which keeps the lexicographically smallest optimum.
  std::uint64_t best_mask = 0;
  double best_utility = 0.0;
  internal::ForEachSubset(
      utility, quality,
      [&](std::uint64_t mask, double total, double quality_sum, int units) {
        if (total <= best_utility) return;
        if (!meets_threshold(quality_sum, units, instance.alpha())) return;
        best_utility = total;
        best_mask = mask;
      });

  Selection sel = Selection::Empty(n);
  for (std::size_t i = 0; i < n; ++i) {
    sel.counts[i] = internal::HasAgent(best_mask, n, i) ? 1 : 0;
  }
  const auto elapsed = Clock::now() - start;
  return Finish(instance, std::move(sel), elapsed, "oracle");
}

std::string_view algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::kDpss:
      return "dpss";
    case Algorithm::kGss:
      return "gss";
    case Algorithm::kOracle:
      return "oracle";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "dpss") return Algorithm::kDpss;
  if (name == "gss") return Algorithm::kGss;
  if (name == "oracle") return Algorithm::kOracle;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                              "' (expected dpss, gss or oracle)");
}

SubsetSolver solver_for(Algorithm algo) {
  switch (algo) {
    case Algorithm::kDpss:
      return dpss_solve;
    case Algorithm::kGss:
      return gss_solve;
    case Algorithm::kOracle:
      return brute_force_solve;
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace qcss
