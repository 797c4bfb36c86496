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

// Offline solvers for quality-constrained subset selection with known
// qualities. All solvers require a unit-capacity instance (see split_units)
// and throw std::invalid_argument otherwise.
//
// Every solver starts from the same four-way partition of the agents:
//
//            r_i >= 0   r_i < 0
//   q >= a     S1         S3
//   q <  a     S2         S4
//
// S1 is always taken and contributes the quality surplus
// d = sum_{S1} (q_i - alpha); S4 is never taken. The solvers differ in how
// they spend the surplus on G = S2 u S3.

#ifndef QCSS_SOLVERS_H_
#define QCSS_SOLVERS_H_

#include <chrono>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "qcss/core.h"

namespace qcss {

struct Partition {
  std::vector<std::size_t> s1, s2, s3, s4;
  double surplus = 0.0;
  // deficits[i] = q_i - alpha for every agent; only S2 and S3 entries are
  // consumed by the solvers.
  std::vector<double> deficits;
};

Partition partition_agents(const Instance& instance);

struct SolveResult {
  Selection selection;
  Evaluation evaluation;
  // Wall time of the search itself, measured with a monotonic clock.
  std::chrono::nanoseconds elapsed{0};
  std::string_view solver_name;
};

// Exact solver: takes S1, drops S4 and runs an include/exclude depth-first
// search over G, keeping the best-utility leaf whose accumulated surplus
// d + sum_{selected G} (q_i - alpha) stays non-negative. Branches that cannot
// beat the incumbent even by adding every remaining positive-utility agent
// are pruned.
SolveResult dpss_solve(const Instance& instance);

// Greedy solver. O(n log n). Spends the surplus on S2 agents in decreasing
// order of r_i / (alpha - q_i), then trades fractional S2 units against S3
// units (cheapest quality first) while the S2 revenue rate exceeds the S3
// cost rate. The last partially used S3 unit is rounded up and every other
// fractional unit is dropped, so the output is integral and feasible.
SolveResult gss_solve(const Instance& instance);

inline constexpr std::size_t kBruteForceMaxAgents = 25;

// Enumerates all 2^n selections and returns the utility-maximal feasible one.
// Ties go to the lexicographically smallest 0/1 vector. Throws
// std::invalid_argument for n > kBruteForceMaxAgents.
SolveResult brute_force_solve(const Instance& instance);

enum class Algorithm { kDpss, kGss, kOracle };

std::string_view algorithm_name(Algorithm algo);
// Accepts "dpss", "gss" and "oracle". Throws std::invalid_argument otherwise.
Algorithm parse_algorithm(std::string_view name);

using SubsetSolver = std::function<SolveResult(const Instance&)>;
SubsetSolver solver_for(Algorithm algo);

}  // namespace qcss

#endif  // QCSS_SOLVERS_H_
