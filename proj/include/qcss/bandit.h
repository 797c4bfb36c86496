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

// SS-UCB: learning unknown agent qualities with semi-bandit feedback while
// keeping the quality constraint.
//
// Rounds 1..tau play every agent. From round tau + 1 on, the offline solver
// is called on optimistic qualities q_hat + sqrt(3 ln t / (2 w)) with the
// raised threshold alpha + eps2, and only the returned agents are observed.
// Each round is scored against the true qualities: a round is correct when
// the true expected average of the played set is at least alpha - eps1.

#ifndef QCSS_BANDIT_H_
#define QCSS_BANDIT_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "qcss/core.h"
#include "qcss/solvers.h"

namespace qcss {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Uniform double in [0,1) from the top 53 bits of a 64-bit draw. Used
// instead of std::uniform_real_distribution so streams replay identically
// across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Hidden Bernoulli qualities. Draws come from a single seeded stream.
class Environment {
 public:
  Environment(std::vector<double> true_qualities, std::uint64_t seed);

  // One 0/1 realization for agent i.
  int draw(std::size_t agent);

  const std::vector<double>& true_qualities() const { return qualities_; }
  std::size_t size() const { return qualities_.size(); }

 private:
  std::vector<double> qualities_;
  std::mt19937_64 rng_;
};

class BanditState {
 public:
  explicit BanditState(std::size_t n);

  void observe(std::size_t agent, int outcome);
  void advance_round() { ++round_; }

  std::int64_t pulls(std::size_t agent) const { return pulls_[agent]; }
  std::int64_t successes(std::size_t agent) const { return successes_[agent]; }
  // Exact average of the observed realizations. Throws std::logic_error for
  // an agent that was never pulled.
  double emp_mean(std::size_t agent) const;
  std::int64_t round() const { return round_; }
  std::int64_t total_pulls() const;
  std::size_t size() const { return pulls_.size(); }

 private:
  std::vector<std::int64_t> pulls_;
  std::vector<std::int64_t> successes_;
  std::int64_t round_ = 0;
};

// ceil(3 ln T / (2 eps2^2)). Throws ConfigError when T < 2, eps2 <= 0, or the
// result leaves no exploit round (tau >= T).
std::int64_t compute_tau(double horizon, double eps2);

// q_hat + sqrt(3 ln t / (2 w)), not clamped to [0,1]. Throws
// std::logic_error for an unpulled agent and std::invalid_argument for t < 1.
double ucb_estimate(const BanditState& state, std::size_t agent, double t);

struct SSUCBConfig {
  double alpha = 0.7;
  double eps1 = 0.05;
  double eps2 = 0.1;
  std::int64_t horizon = 20000;
  double revenue_scale = 1.0;
  std::vector<double> costs;

  // Returns tau; throws ConfigError on an unusable configuration.
  std::int64_t validate(std::size_t agents) const;
};

struct OptimalFeasible {
  Selection best;
  double opt_utility = 0.0;
  // Largest utility gap between S* and any feasible subset; charged for a
  // round that misses the constraint.
  double penalty = 0.0;
};

// Enumerates every subset of the instance that satisfies the constraint
// (including the empty one). Throws std::invalid_argument for
// n > kBruteForceMaxAgents or non-unit capacities.
OptimalFeasible optimal_feasible(const Instance& truth);

// True iff no nonempty subset has mean quality in [alpha - eps, alpha).
// Throws std::invalid_argument for n > kBruteForceMaxAgents.
bool eps_separated(std::span<const double> qualities, double alpha, double eps);

struct RoundScore {
  bool qc_satisfied = true;
  // NaN for the empty set.
  double expected_qav = 0.0;
  double regret = 0.0;
};

// Scores one played set against the truth: correct rounds are charged
// opt - r_q(S) clamped to [0, L]; incorrect rounds are charged L.
RoundScore regret_round(const Instance& truth, const Selection& played,
                        double eps1, const OptimalFeasible& optimum);

enum class Phase { kExplore, kExploit };

struct RoundRecord {
  std::int64_t round = 0;
  Phase phase = Phase::kExplore;
  // Bit i set when agent i was played.
  std::uint64_t members = 0;
  int subset_size = 0;
  bool qc_satisfied = true;
  double expected_qav = 0.0;
  double realized_qav = 0.0;
  double regret = 0.0;
  // Mean UCB bonus over the played set; NaN during exploration or when the
  // solver returns nothing.
  double mean_bonus = 0.0;
};

struct RegretLedger {
  std::vector<RoundRecord> rounds;
  double opt_utility = 0.0;
  double penalty = 0.0;
  std::int64_t tau = 0;
  bool eps1_separated = false;

  // Running sum of regret over all rounds, aligned with `rounds`.
  std::vector<double> cumulative_regret() const;
};

// Limit on agents for a bandit run: the truth is scored by enumeration and
// played sets are stored as 64-bit masks.
inline constexpr std::size_t kBanditMaxAgents = kBruteForceMaxAgents;

// Runs SS-UCB for config.horizon rounds against env. Agents are sampled in
// index order within a round. Throws ConfigError for an invalid config.
RegretLedger ssucb_run(Environment& env, const SSUCBConfig& config,
                       const SubsetSolver& ssa);

}  // namespace qcss

#endif  // QCSS_BANDIT_H_
