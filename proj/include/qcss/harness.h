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

// Experiment orchestration: random instances, offline solver comparison,
// bandit runs, and their CSV encodings.
//
// Iterations are independent and fan out over a worker pool. Each iteration
// derives its own seed from the master seed, and results are merged in
// iteration order, so output never depends on scheduling.

#ifndef QCSS_HARNESS_H_
#define QCSS_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcss/bandit.h"
#include "qcss/core.h"
#include "qcss/solvers.h"

namespace qcss {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Seed of iteration `iter`: mix64(master_seed + (iter + 1) * 0x9E3779B97F4A7C15).
std::uint64_t iteration_seed(std::uint64_t master_seed, std::int64_t iter);

// Seed of the Bernoulli stream of an iteration, distinct from the stream that
// generated its instance.
std::uint64_t environment_seed(std::uint64_t iteration_seed);

// n unit-capacity agents with quality and cost drawn independently from
// U[0,1]. Deterministic in seed.
Instance generate_instance(int n, double alpha, double revenue_scale,
                           std::uint64_t seed);

enum class Mode { kOfflineCompare, kBandit };

struct ExperimentConfig {
  Mode mode = Mode::kOfflineCompare;
  int n = 10;
  double alpha = 0.7;
  double revenue_scale = 1.0;
  int iterations = 1000;
  std::uint64_t master_seed = 1;
  // 0 picks std::thread::hardware_concurrency().
  int workers = 0;

  // Offline mode.
  std::vector<Algorithm> solvers = {Algorithm::kDpss, Algorithm::kGss,
                                    Algorithm::kOracle};

  // Bandit mode.
  double eps1 = 0.05;
  double eps2 = 0.1;
  std::int64_t horizon = 20000;
  Algorithm ssa = Algorithm::kDpss;
};

// Runs fn(0..count-1) on up to `workers` threads. The first exception thrown
// by any task is rethrown after all workers stop.
void parallel_for(std::int64_t count, int workers,
                  const std::function<void(std::int64_t)>& fn);

// ---------------------------------------------------------------------------
// Offline comparison.

struct OfflineRow {
  int iter = 0;
  std::uint64_t seed = 0;
  int n = 0;
  double alpha = 0.0;
  // NaN when the solver was not requested or refused the instance.
  double z_dpss = 0.0;
  double z_gss = 0.0;
  double z_oracle = 0.0;
  // z_gss / z_dpss, 1 when both are 0, NaN when undefined.
  double ratio_gss_dpss = 0.0;
  std::int64_t t_dpss_ns = 0;
  std::int64_t t_gss_ns = 0;
  // Not part of the CSV: why a field is NaN, or "anomalous" when z_dpss == 0
  // but z_gss != 0.
  std::string note;
};

inline constexpr const char* kOfflineCsvHeader =
    "iter,seed,n,alpha,z_dpss,z_gss,z_oracle,ratio_gss_dpss,t_dpss_ns,t_gss_ns";

// Throws std::invalid_argument when the config is not in offline mode or has
// iterations < 1.
std::vector<OfflineRow> run_offline_compare(const ExperimentConfig& config);

// Ratio convention shared by the runner and any recomputation from CSV.
double utility_ratio(double z_gss, double z_dpss);

struct OfflineSummary {
  int n = 0;
  double alpha = 0.0;
  std::int64_t rows = 0;
  double mean_ratio = 0.0;
  double median_ratio = 0.0;
  double median_t_dpss_ns = 0.0;
  double median_t_gss_ns = 0.0;
  // median_t_dpss_ns / median_t_gss_ns.
  double time_ratio = 0.0;
};

// One summary per distinct (n, alpha), in order of first appearance. Rows
// with a NaN ratio are left out of the ratio statistics.
std::vector<OfflineSummary> summarize_offline(const std::vector<OfflineRow>& rows);

void write_offline_csv(std::ostream& out, const std::vector<OfflineRow>& rows);
// Throws std::invalid_argument on a header mismatch or malformed row.
std::vector<OfflineRow> read_offline_csv(std::istream& in);

// ---------------------------------------------------------------------------
// Bandit experiment.

struct BanditIteration {
  int iter = 0;
  std::uint64_t seed = 0;
  RegretLedger ledger;
};

struct BanditExperiment {
  std::int64_t tau = 0;
  std::vector<BanditIteration> iterations;
};

struct BanditSummaryRow {
  std::int64_t round = 0;
  double satisfaction_rate = 0.0;
  // Mean over iterations of the regret accumulated in rounds tau+1..round;
  // 0 during exploration.
  double mean_cum_regret = 0.0;
};

inline constexpr const char* kBanditRoundsCsvHeader =
    "iter,round,phase,subset_size,qc_satisfied,expected_qav,realized_qav,"
    "regret_increment,cum_regret";
inline constexpr const char* kBanditSummaryCsvHeader =
    "round,satisfaction_rate,mean_cum_regret";

// Throws ConfigError when tau >= horizon, std::invalid_argument for a config
// that is not in bandit mode.
BanditExperiment run_bandit_experiment(const ExperimentConfig& config);

std::vector<BanditSummaryRow> summarize_bandit(const BanditExperiment& experiment);

void write_bandit_rounds_csv(std::ostream& out, const BanditExperiment& experiment);
void write_bandit_summary_csv(std::ostream& out,
                              const std::vector<BanditSummaryRow>& summary);

// Parsed row of the per-round CSV.
struct BanditCsvRow {
  int iter = 0;
  std::int64_t round = 0;
  Phase phase = Phase::kExplore;
  int subset_size = 0;
  bool qc_satisfied = false;
  double expected_qav = 0.0;
  double realized_qav = 0.0;
  double regret_increment = 0.0;
  double cum_regret = 0.0;
};

std::vector<BanditCsvRow> read_bandit_rounds_csv(std::istream& in);
std::vector<BanditSummaryRow> read_bandit_summary_csv(std::istream& in);

// Rebuilds the summary from raw per-round rows.
std::vector<BanditSummaryRow> summarize_bandit_rows(
    const std::vector<BanditCsvRow>& rows);

// ---------------------------------------------------------------------------
// Instance files: first line "n alpha R", then n lines "q c k".

Instance read_instance(std::istream& in);
void write_instance(std::ostream& out, const Instance& instance);

}  // namespace qcss

#endif  // QCSS_HARNESS_H_
