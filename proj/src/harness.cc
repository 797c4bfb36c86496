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

#include "qcss/harness.h"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <utility>

namespace qcss {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double Median(std::vector<double> values) {
  if (values.empty()) return kNaN;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double ParseDouble(std::string_view field) {
  const std::string text(field);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw std::invalid_argument("malformed number '" + text + "'");
  }
  return value;
}

std::int64_t ParseInt(std::string_view field) {
  const std::string text(field);
  char* end = nullptr;
  const long long value = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw std::invalid_argument("malformed integer '" + text + "'");
  }
  return value;
}

std::uint64_t ParseUnsigned(std::string_view field) {
  const std::string text(field);
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw std::invalid_argument("malformed integer '" + text + "'");
  }
  return value;
}

// Reads the header line, then hands every non-empty data line to fn.
template <typename Fn>
void ForEachCsvRow(std::istream& in, std::string_view header,
                   std::size_t fields, Fn&& fn) {
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw std::invalid_argument("unexpected CSV header: '" + line + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto parts = SplitFields(line);
    if (parts.size() != fields) {
      throw std::invalid_argument(fmt::format(
          "line {}: expected {} fields, got {}", line_no, fields, parts.size()));
    }
    fn(parts);
  }
}

std::string_view PhaseName(Phase phase) {
  return phase == Phase::kExplore ? "explore" : "exploit";
}

Phase ParsePhase(std::string_view name) {
  if (name == "explore") return Phase::kExplore;
  if (name == "exploit") return Phase::kExploit;
  throw std::invalid_argument("unknown phase '" + std::string(name) + "'");
}

bool Requested(const ExperimentConfig& config, Algorithm algo) {
  return std::find(config.solvers.begin(), config.solvers.end(), algo) !=
         config.solvers.end();
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t iteration_seed(std::uint64_t master_seed, std::int64_t iter) {
  return mix64(master_seed +
               static_cast<std::uint64_t>(iter + 1) * 0x9E3779B97F4A7C15ULL);
}

std::uint64_t environment_seed(std::uint64_t iteration_seed) {
  return mix64(iteration_seed ^ 0xD1B54A32D192ED03ULL);
}

Instance generate_instance(int n, double alpha, double revenue_scale,
                           std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_instance: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Agent> agents(static_cast<std::size_t>(n));
  for (Agent& a : agents) {
    a.quality = unit_uniform(rng);
    a.cost = unit_uniform(rng);
    a.capacity = 1;
  }
  return Instance(std::move(agents), alpha, revenue_scale);
}

void parallel_for(std::int64_t count, int workers,
                  const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  unsigned threads = workers > 0 ? static_cast<unsigned>(workers)
                                 : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::int64_t>(threads, count));
  if (threads <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      while (!failed.load()) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------

double utility_ratio(double z_gss, double z_dpss) {
  if (std::isnan(z_gss) || std::isnan(z_dpss)) return kNaN;
  if (z_dpss == 0.0) return z_gss == 0.0 ? 1.0 : kNaN;
  return z_gss / z_dpss;
}

std::vector<OfflineRow> run_offline_compare(const ExperimentConfig& config) {
  if (config.mode != Mode::kOfflineCompare) {
    throw std::invalid_argument("run_offline_compare needs offline mode");
  }
  if (config.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (config.n < 1) throw std::invalid_argument("n must be >= 1");

  std::vector<OfflineRow> rows(static_cast<std::size_t>(config.iterations));
  parallel_for(config.iterations, config.workers, [&](std::int64_t iter) {
    OfflineRow& row = rows[static_cast<std::size_t>(iter)];
    row.iter = static_cast<int>(iter);
    row.seed = iteration_seed(config.master_seed, iter);
    row.n = config.n;
    row.alpha = config.alpha;
    row.z_dpss = row.z_gss = row.z_oracle = kNaN;
    const Instance instance =
        generate_instance(config.n, config.alpha, config.revenue_scale, row.seed);
    if (Requested(config, Algorithm::kDpss)) {
      const SolveResult r = dpss_solve(instance);
      row.z_dpss = r.evaluation.utility;
      row.t_dpss_ns = r.elapsed.count();
    }
    if (Requested(config, Algorithm::kGss)) {
      const SolveResult r = gss_solve(instance);
      row.z_gss = r.evaluation.utility;
      row.t_gss_ns = r.elapsed.count();
    }
    if (Requested(config, Algorithm::kOracle)) {
      if (instance.size() <= kBruteForceMaxAgents) {
        row.z_oracle = brute_force_solve(instance).evaluation.utility;
      } else {
        row.note = "oracle skipped: n exceeds brute-force limit";
      }
    }
    row.ratio_gss_dpss = utility_ratio(row.z_gss, row.z_dpss);
    if (row.z_dpss == 0.0 && !std::isnan(row.z_gss) && row.z_gss != 0.0) {
      row.note = "anomalous: z_dpss is 0 but z_gss is not";
    }
  });
  return rows;
}

std::vector<OfflineSummary> summarize_offline(const std::vector<OfflineRow>& rows) {
  std::vector<std::pair<int, double>> order;
  std::map<std::pair<int, double>, std::vector<const OfflineRow*>> groups;
  for (const OfflineRow& row : rows) {
    const auto key = std::make_pair(row.n, row.alpha);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&row);
  }
  std::vector<OfflineSummary> summaries;
  for (const auto& key : order) {
    const auto& group = groups[key];
    OfflineSummary s;
    s.n = key.first;
    s.alpha = key.second;
    s.rows = static_cast<std::int64_t>(group.size());
    std::vector<double> ratios, t_dpss, t_gss;
    double sum = 0.0;
    for (const OfflineRow* row : group) {
      if (!std::isnan(row->ratio_gss_dpss)) {
        ratios.push_back(row->ratio_gss_dpss);
        sum += row->ratio_gss_dpss;
      }
      t_dpss.push_back(static_cast<double>(row->t_dpss_ns));
      t_gss.push_back(static_cast<double>(row->t_gss_ns));
    }
    s.mean_ratio = ratios.empty() ? kNaN : sum / static_cast<double>(ratios.size());
    s.median_ratio = Median(ratios);
    s.median_t_dpss_ns = Median(t_dpss);
    s.median_t_gss_ns = Median(t_gss);
    s.time_ratio = s.median_t_dpss_ns / s.median_t_gss_ns;
    summaries.push_back(s);
  }
  return summaries;
}

void write_offline_csv(std::ostream& out, const std::vector<OfflineRow>& rows) {
  out << kOfflineCsvHeader << '\n';
  for (const OfflineRow& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.iter, r.seed, r.n,
                       r.alpha, r.z_dpss, r.z_gss, r.z_oracle, r.ratio_gss_dpss,
                       r.t_dpss_ns, r.t_gss_ns);
  }
}

std::vector<OfflineRow> read_offline_csv(std::istream& in) {
  std::vector<OfflineRow> rows;
  ForEachCsvRow(in, kOfflineCsvHeader, 10, [&](const auto& f) {
    OfflineRow r;
    r.iter = static_cast<int>(ParseInt(f[0]));
    r.seed = ParseUnsigned(f[1]);
    r.n = static_cast<int>(ParseInt(f[2]));
    r.alpha = ParseDouble(f[3]);
    r.z_dpss = ParseDouble(f[4]);
    r.z_gss = ParseDouble(f[5]);
    r.z_oracle = ParseDouble(f[6]);
    r.ratio_gss_dpss = ParseDouble(f[7]);
    r.t_dpss_ns = ParseInt(f[8]);
    r.t_gss_ns = ParseInt(f[9]);
    rows.push_back(std::move(r));
  });
  return rows;
}

// ---------------------------------------------------------------------------

BanditExperiment run_bandit_experiment(const ExperimentConfig& config) {
  if (config.mode != Mode::kBandit) {
    throw std::invalid_argument("run_bandit_experiment needs bandit mode");
  }
  if (config.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (config.n < 1) throw std::invalid_argument("n must be >= 1");

  BanditExperiment experiment;
  experiment.tau = compute_tau(static_cast<double>(config.horizon), config.eps2);
  experiment.iterations.resize(static_cast<std::size_t>(config.iterations));
  const SubsetSolver ssa = solver_for(config.ssa);
  parallel_for(config.iterations, config.workers, [&](std::int64_t iter) {
    BanditIteration& out = experiment.iterations[static_cast<std::size_t>(iter)];
    out.iter = static_cast<int>(iter);
    out.seed = iteration_seed(config.master_seed, iter);
    const Instance instance =
        generate_instance(config.n, config.alpha, config.revenue_scale, out.seed);
    std::vector<double> qualities(instance.size());
    SSUCBConfig run;
    run.alpha = config.alpha;
    run.eps1 = config.eps1;
    run.eps2 = config.eps2;
    run.horizon = config.horizon;
    run.revenue_scale = config.revenue_scale;
    for (std::size_t i = 0; i < instance.size(); ++i) {
      qualities[i] = instance.agent(i).quality;
      run.costs.push_back(instance.agent(i).cost);
    }
    Environment env(std::move(qualities), environment_seed(out.seed));
    out.ledger = ssucb_run(env, run, ssa);
  });
  return experiment;
}

std::vector<BanditSummaryRow> summarize_bandit(const BanditExperiment& experiment) {
  if (experiment.iterations.empty()) return {};
  const std::size_t rounds = experiment.iterations.front().ledger.rounds.size();
  std::vector<std::int64_t> satisfied(rounds, 0);
  std::vector<double> regret(rounds, 0.0);
  for (const BanditIteration& it : experiment.iterations) {
    const RegretLedger& ledger = it.ledger;
    if (ledger.rounds.size() != rounds) {
      throw std::invalid_argument("iterations have different horizons");
    }
    const std::vector<double> cumulative = ledger.cumulative_regret();
    double base = 0.0;
    for (std::size_t k = 0; k < rounds; ++k) {
      const RoundRecord& rec = ledger.rounds[k];
      if (rec.qc_satisfied) ++satisfied[k];
      if (rec.phase == Phase::kExplore) {
        base = cumulative[k];
      } else {
        regret[k] += cumulative[k] - base;
      }
    }
  }
  const double iters = static_cast<double>(experiment.iterations.size());
  std::vector<BanditSummaryRow> summary(rounds);
  for (std::size_t k = 0; k < rounds; ++k) {
    summary[k].round = experiment.iterations.front().ledger.rounds[k].round;
    summary[k].satisfaction_rate = static_cast<double>(satisfied[k]) / iters;
    summary[k].mean_cum_regret = regret[k] / iters;
  }
  return summary;
}

void write_bandit_rounds_csv(std::ostream& out, const BanditExperiment& experiment) {
  out << kBanditRoundsCsvHeader << '\n';
  fmt::memory_buffer buf;
  for (const BanditIteration& it : experiment.iterations) {
    const std::vector<double> cumulative = it.ledger.cumulative_regret();
    for (std::size_t k = 0; k < it.ledger.rounds.size(); ++k) {
      const RoundRecord& r = it.ledger.rounds[k];
      buf.clear();
      fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{},{},{}\n",
                     it.iter, r.round, PhaseName(r.phase), r.subset_size,
                     r.qc_satisfied ? 1 : 0, r.expected_qav, r.realized_qav,
                     r.regret, cumulative[k]);
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
  }
}

void write_bandit_summary_csv(std::ostream& out,
                              const std::vector<BanditSummaryRow>& summary) {
  out << kBanditSummaryCsvHeader << '\n';
  for (const BanditSummaryRow& s : summary) {
    out << fmt::format("{},{},{}\n", s.round, s.satisfaction_rate,
                       s.mean_cum_regret);
  }
}

std::vector<BanditCsvRow> read_bandit_rounds_csv(std::istream& in) {
  std::vector<BanditCsvRow> rows;
  ForEachCsvRow(in, kBanditRoundsCsvHeader, 9, [&](const auto& f) {
    BanditCsvRow r;
    r.iter = static_cast<int>(ParseInt(f[0]));
    r.round = ParseInt(f[1]);
    r.phase = ParsePhase(f[2]);
    r.subset_size = static_cast<int>(ParseInt(f[3]));
    const std::int64_t flag = ParseInt(f[4]);
    if (flag != 0 && flag != 1) throw std::invalid_argument("qc_satisfied must be 0/1");
    r.qc_satisfied = flag == 1;
    r.expected_qav = ParseDouble(f[5]);
    r.realized_qav = ParseDouble(f[6]);
    r.regret_increment = ParseDouble(f[7]);
    r.cum_regret = ParseDouble(f[8]);
    rows.push_back(r);
  });
  return rows;
}

std::vector<BanditSummaryRow> read_bandit_summary_csv(std::istream& in) {
  std::vector<BanditSummaryRow> rows;
  ForEachCsvRow(in, kBanditSummaryCsvHeader, 3, [&](const auto& f) {
    rows.push_back({ParseInt(f[0]), ParseDouble(f[1]), ParseDouble(f[2])});
  });
  return rows;
}

std::vector<BanditSummaryRow> summarize_bandit_rows(
    const std::vector<BanditCsvRow>& rows) {
  // Rows arrive grouped by iteration, rounds ascending.
  std::map<std::int64_t, std::pair<std::int64_t, double>> by_round;
  std::map<std::int64_t, bool> seen_iter;
  int current_iter = -1;
  double base = 0.0;
  for (const BanditCsvRow& r : rows) {
    if (r.iter != current_iter) {
      current_iter = r.iter;
      base = 0.0;
      seen_iter[r.iter] = true;
    }
    auto& [satisfied, regret] = by_round[r.round];
    if (r.qc_satisfied) ++satisfied;
    if (r.phase == Phase::kExplore) {
      base = r.cum_regret;
    } else {
      regret += r.cum_regret - base;
    }
  }
  const double iters = static_cast<double>(seen_iter.size());
  std::vector<BanditSummaryRow> summary;
  summary.reserve(by_round.size());
  for (const auto& [round, acc] : by_round) {
    summary.push_back({round, static_cast<double>(acc.first) / iters,
                       acc.second / iters});
  }
  return summary;
}

// ---------------------------------------------------------------------------

Instance read_instance(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::istringstream {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        return std::istringstream(line);
      }
    }
    throw std::invalid_argument(
        fmt::format("instance file ended early after line {}", line_no));
  };
  std::istringstream head = next_line();
  long long n = 0;
  double alpha = 0.0;
  double scale = 0.0;
  if (!(head >> n >> alpha >> scale) || n < 1) {
    throw std::invalid_argument(
        fmt::format("line {}: expected 'n alpha R' with n >= 1", line_no));
  }
  std::vector<Agent> agents;
  agents.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    std::istringstream row = next_line();
    Agent a;
    if (!(row >> a.quality >> a.cost >> a.capacity)) {
      throw std::invalid_argument(
          fmt::format("line {}: expected 'q c k'", line_no));
    }
    agents.push_back(a);
  }
  return Instance(std::move(agents), alpha, scale);
}

void write_instance(std::ostream& out, const Instance& instance) {
  out << fmt::format("{} {} {}\n", instance.size(), instance.alpha(),
                     instance.revenue_scale());
  for (const Agent& a : instance.agents()) {
    out << fmt::format("{} {} {}\n", a.quality, a.cost, a.capacity);
  }
}

}  // namespace qcss
