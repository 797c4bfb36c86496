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

#include "qcss/bandit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "subset_sums.h"

namespace qcss {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> UnitUtilities(const Instance& instance) {
  std::vector<double> utility(instance.size());
  for (std::size_t i = 0; i < instance.size(); ++i) {
    utility[i] = instance.unit_utility(i);
  }
  return utility;
}

std::vector<double> Qualities(const Instance& instance) {
  std::vector<double> quality(instance.size());
  for (std::size_t i = 0; i < instance.size(); ++i) {
    quality[i] = instance.agent(i).quality;
  }
  return quality;
}

void RequireEnumerable(std::size_t n, std::string_view who) {
  if (n > kBruteForceMaxAgents) {
    throw std::invalid_argument(std::string(who) + ": " + std::to_string(n) +
                                " agents exceeds the enumeration limit of " +
                                std::to_string(kBruteForceMaxAgents));
  }
}

}  // namespace

Environment::Environment(std::vector<double> true_qualities, std::uint64_t seed)
    : qualities_(std::move(true_qualities)), rng_(seed) {
  for (double q : qualities_) {
    if (!(q >= 0.0 && q <= 1.0)) {
      throw std::invalid_argument("environment qualities must lie in [0,1]");
    }
  }
}

int Environment::draw(std::size_t agent) {
  return unit_uniform(rng_) < qualities_.at(agent) ? 1 : 0;
}

BanditState::BanditState(std::size_t n) : pulls_(n, 0), successes_(n, 0) {}

void BanditState::observe(std::size_t agent, int outcome) {
  ++pulls_.at(agent);
  successes_[agent] += outcome;
}

double BanditState::emp_mean(std::size_t agent) const {
  if (pulls_.at(agent) == 0) {
    throw std::logic_error("agent " + std::to_string(agent) +
                           " has not been pulled yet");
  }
  return static_cast<double>(successes_[agent]) /
         static_cast<double>(pulls_[agent]);
}

std::int64_t BanditState::total_pulls() const {
  std::int64_t total = 0;
  for (std::int64_t w : pulls_) total += w;
  return total;
}

std::int64_t compute_tau(double horizon, double eps2) {
  if (!(horizon >= 2.0)) throw ConfigError("horizon must be at least 2");
  if (!(eps2 > 0.0)) throw ConfigError("eps2 must be positive");
  const double exact =
      3.0 * std::log(horizon) / (2.0 * eps2 * eps2);
  // A value within rounding noise of an integer is not bumped to the next one.
  const double nearest = std::round(exact);
  const double tau = std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact)
                         ? nearest
                         : std::ceil(exact);
  if (tau >= horizon) {
    throw ConfigError("exploration length tau = " +
                      std::to_string(static_cast<std::int64_t>(tau)) +
                      " leaves no exploit rounds within horizon " +
                      std::to_string(horizon) + "; increase eps2 or the horizon");
  }
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(tau));
}

double ucb_estimate(const BanditState& state, std::size_t agent, double t) {
  if (!(t >= 1.0)) throw std::invalid_argument("ucb_estimate: t must be >= 1");
  const double mean = state.emp_mean(agent);
  const double w = static_cast<double>(state.pulls(agent));
  return mean + std::sqrt(3.0 * std::log(t) / (2.0 * w));
}

std::int64_t SSUCBConfig::validate(std::size_t agents) const {
  if (agents == 0) throw ConfigError("no agents");
  if (agents > kBanditMaxAgents) {
    throw ConfigError("bandit runs support at most " +
                      std::to_string(kBanditMaxAgents) + " agents");
  }
  if (costs.size() != agents) {
    throw ConfigError("expected " + std::to_string(agents) + " costs, got " +
                      std::to_string(costs.size()));
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0,1]");
  if (!(eps1 > 0.0)) throw ConfigError("eps1 must be positive");
  if (!(revenue_scale > 0.0)) throw ConfigError("revenue scale must be positive");
  return compute_tau(static_cast<double>(horizon), eps2);
}

OptimalFeasible optimal_feasible(const Instance& truth) {
  RequireEnumerable(truth.size(), "optimal_feasible");
  if (!truth.has_unit_capacity()) {
    throw std::invalid_argument("optimal_feasible: instance must have unit capacities");
  }
  const std::size_t n = truth.size();
  std::uint64_t best_mask = 0;
  double best = 0.0;
  double worst = 0.0;
  internal::ForEachSubset(
      UnitUtilities(truth), Qualities(truth),
      [&](std::uint64_t mask, double utility, double quality, int units) {
        if (!meets_threshold(quality, units, truth.alpha())) return;
        if (utility > best) {
          best = utility;
          best_mask = mask;
        }
        worst = std::min(worst, utility);
      });
  OptimalFeasible result;
  result.best = Selection::Empty(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.best.counts[i] = internal::HasAgent(best_mask, n, i) ? 1 : 0;
  }
  result.opt_utility = best;
  result.penalty = best - worst;
  return result;
}

bool eps_separated(std::span<const double> qualities, double alpha, double eps) {
  RequireEnumerable(qualities.size(), "eps_separated");
  const std::vector<double> zeros(qualities.size(), 0.0);
  bool separated = true;
  internal::ForEachSubset(zeros, qualities,
                          [&](std::uint64_t, double, double quality, int units) {
                            if (units == 0 || !separated) return;
                            const double mean = quality / units;
                            if (mean >= alpha - eps && mean < alpha) separated = false;
                          });
  return separated;
}

RoundScore regret_round(const Instance& truth, const Selection& played,
                        double eps1, const OptimalFeasible& optimum) {
  const Evaluation eval = evaluate_selection(truth, played);
  RoundScore score;
  score.expected_qav = eval.expected_avg_quality.value_or(kNaN);
  score.qc_satisfied =
      !eval.expected_avg_quality.has_value() ||
      *eval.expected_avg_quality >= truth.alpha() - eps1 - kFeasibilityTolerance;
  if (score.qc_satisfied) {
    score.regret = std::clamp(optimum.opt_utility - eval.utility, 0.0,
                              optimum.penalty);
  } else {
    score.regret = optimum.penalty;
  }
  return score;
}

std::vector<double> RegretLedger::cumulative_regret() const {
  std::vector<double> cumulative(rounds.size());
  double running = 0.0;
  for (std::size_t k = 0; k < rounds.size(); ++k) {
    running += rounds[k].regret;
    cumulative[k] = running;
  }
  return cumulative;
}

RegretLedger ssucb_run(Environment& env, const SSUCBConfig& config,
                       const SubsetSolver& ssa) {
  const std::size_t n = env.size();
  const std::int64_t tau = config.validate(n);

  std::vector<Agent> truth_agents(n);
  for (std::size_t i = 0; i < n; ++i) {
    truth_agents[i] = {env.true_qualities()[i], config.costs[i], 1};
  }
  const Instance truth(truth_agents, config.alpha, config.revenue_scale);

  RegretLedger ledger;
  ledger.tau = tau;
  const OptimalFeasible optimum = optimal_feasible(truth);
  ledger.opt_utility = optimum.opt_utility;
  ledger.penalty = optimum.penalty;
  ledger.eps1_separated =
      eps_separated(env.true_qualities(), config.alpha, config.eps1);
  ledger.rounds.reserve(static_cast<std::size_t>(config.horizon));

  BanditState state(n);
  std::vector<Agent> optimistic = truth_agents;
  Selection played = Selection::Empty(n);
  for (std::int64_t t = 1; t <= config.horizon; ++t) {
    RoundRecord record;
    record.round = t;
    if (t <= tau) {
      record.phase = Phase::kExplore;
      record.mean_bonus = kNaN;
      std::fill(played.counts.begin(), played.counts.end(), 1);
    } else {
      record.phase = Phase::kExploit;
      std::vector<double> bonus(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double ucb = ucb_estimate(state, i, static_cast<double>(t));
        bonus[i] = ucb - state.emp_mean(i);
        optimistic[i].quality = ucb;
      }
      const Instance estimate(optimistic, config.alpha + config.eps2,
                              config.revenue_scale, QualityDomain::kEstimate);
      played = ssa(estimate).selection;
      double bonus_sum = 0.0;
      int size = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (played.counts[i] == 0) continue;
        bonus_sum += bonus[i];
        ++size;
      }
      record.mean_bonus = size > 0 ? bonus_sum / size : kNaN;
    }

    int ones = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (played.counts[i] == 0) continue;
      const int x = env.draw(i);
      state.observe(i, x);
      ones += x;
      record.members |= std::uint64_t{1} << i;
      ++record.subset_size;
    }
    state.advance_round();
    record.realized_qav =
        record.subset_size > 0 ? static_cast<double>(ones) / record.subset_size
                               : kNaN;

    const RoundScore score = regret_round(truth, played, config.eps1, optimum);
    record.qc_satisfied = score.qc_satisfied;
    record.expected_qav = score.expected_qav;
    record.regret = score.regret;
    ledger.rounds.push_back(record);
  }
  return ledger;
}

}  // namespace qcss
