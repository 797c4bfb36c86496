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

// qcss: command-line driver for the offline solvers and experiments.
//
//   qcss offline --n 12 --alpha 0.7 --R 1 --iters 1000 --seed 7 \
//       --solvers dpss,gss,oracle --out offline.csv
//   qcss bandit --n 10 --alpha 0.7 --R 1 --T 20000 --eps1 0.05 --eps2 0.1 \
//       --ssa dpss --iters 100 --seed 7 --out rounds.csv
//   qcss solve --in instance.txt --algo dpss

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "qcss/bandit.h"
#include "qcss/core.h"
#include "qcss/harness.h"
#include "qcss/solvers.h"

namespace {

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::string DefaultSummaryPath(const std::string& out) {
  std::filesystem::path p(out);
  return (p.parent_path() / (p.stem().string() + "_summary.csv")).string();
}

int RunOffline(const qcss::ExperimentConfig& config, const std::string& out_path) {
  const auto rows = qcss::run_offline_compare(config);
  std::ofstream out = OpenOutput(out_path);
  qcss::write_offline_csv(out, rows);
  for (const auto& row : rows) {
    if (!row.note.empty()) std::cerr << "iter " << row.iter << ": " << row.note << '\n';
  }
  for (const auto& s : qcss::summarize_offline(rows)) {
    std::cout << fmt::format(
        "n={} alpha={} rows={} mean_ratio={:.4f} median_ratio={:.4f} "
        "median_t_dpss_ns={} median_t_gss_ns={} t_dpss/t_gss={:.2f}\n",
        s.n, s.alpha, s.rows, s.mean_ratio, s.median_ratio, s.median_t_dpss_ns,
        s.median_t_gss_ns, s.time_ratio);
  }
  return 0;
}

int RunBandit(const qcss::ExperimentConfig& config, const std::string& out_path,
              std::string summary_path) {
  const auto experiment = qcss::run_bandit_experiment(config);
  {
    std::ofstream out = OpenOutput(out_path);
    qcss::write_bandit_rounds_csv(out, experiment);
  }
  const auto summary = qcss::summarize_bandit(experiment);
  if (summary_path.empty()) summary_path = DefaultSummaryPath(out_path);
  {
    std::ofstream out = OpenOutput(summary_path);
    qcss::write_bandit_summary_csv(out, summary);
  }
  double exploit_rate = 0.0;
  std::int64_t exploit_rounds = 0;
  for (const auto& s : summary) {
    if (s.round <= experiment.tau) continue;
    exploit_rate += s.satisfaction_rate;
    ++exploit_rounds;
  }
  int separated = 0;
  for (const auto& it : experiment.iterations) separated += it.ledger.eps1_separated;
  std::cout << fmt::format(
      "tau={} satisfaction_after_tau={:.4f} mean_cum_regret_at_T={:.4f} "
      "eps1_separated_instances={}/{}\nwrote {} and {}\n",
      experiment.tau,
      exploit_rounds > 0 ? exploit_rate / static_cast<double>(exploit_rounds) : 0.0,
      summary.empty() ? 0.0 : summary.back().mean_cum_regret, separated,
      experiment.iterations.size(), out_path, summary_path);
  return 0;
}

int RunSolve(const std::string& in_path, qcss::Algorithm algo) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open '" + in_path + "'");
  const qcss::Instance instance = qcss::read_instance(in);
  const qcss::SplitInstance split = qcss::split_units(instance);
  const qcss::SolveResult result = qcss::solver_for(algo)(split.units);
  const qcss::Selection counts =
      qcss::merge_units(split, result.selection, instance.size());
  const qcss::Evaluation eval = qcss::evaluate_selection(instance, counts);

  std::string joined;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i > 0) joined += ' ';
    joined += std::to_string(counts.counts[i]);
  }
  std::cout << fmt::format("algorithm: {}\n", result.solver_name);
  std::cout << "counts: " << joined << '\n';
  std::cout << fmt::format("utility: {:.12g}\n", eval.utility);
  if (eval.expected_avg_quality) {
    std::cout << fmt::format("expected_avg_quality: {:.12g}\n", *eval.expected_avg_quality);
  } else {
    std::cout << "expected_avg_quality: undefined (empty selection)\n";
  }
  std::cout << fmt::format("feasible: {}\n", eval.feasible ? "yes" : "no");
  std::cout << fmt::format("elapsed_ns: {}\n", result.elapsed.count());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quality-constrained subset selection: solvers and experiments"};
  app.require_subcommand(1);

  qcss::ExperimentConfig offline;
  offline.mode = qcss::Mode::kOfflineCompare;
  std::string offline_out;
  std::vector<std::string> solver_names = {"dpss", "gss", "oracle"};
  auto* off = app.add_subcommand("offline", "compare GSS against DPSS on random instances");
  off->add_option("--n", offline.n, "number of agents")->required()->check(CLI::PositiveNumber);
  off->add_option("--alpha", offline.alpha, "quality threshold")->check(CLI::Range(0.0, 1.0));
  off->add_option("--R", offline.revenue_scale, "revenue scale")->check(CLI::PositiveNumber);
  off->add_option("--iters", offline.iterations, "iterations")->check(CLI::PositiveNumber);
  off->add_option("--seed", offline.master_seed, "master seed");
  off->add_option("--solvers", solver_names, "comma-separated subset of dpss,gss,oracle")
      ->delimiter(',');
  off->add_option("--workers", offline.workers, "worker threads (0 = all cores)");
  off->add_option("--out", offline_out, "output CSV")->required();

  qcss::ExperimentConfig bandit;
  bandit.mode = qcss::Mode::kBandit;
  bandit.iterations = 100;
  std::string bandit_out;
  std::string summary_out;
  std::string ssa_name = "dpss";
  auto* ban = app.add_subcommand("bandit", "run SS-UCB on random instances");
  ban->add_option("--n", bandit.n, "number of agents")->check(CLI::Range(1, 25));
  ban->add_option("--alpha", bandit.alpha, "quality threshold")->check(CLI::Range(0.0, 1.0));
  ban->add_option("--R", bandit.revenue_scale, "revenue scale")->check(CLI::PositiveNumber);
  ban->add_option("--T", bandit.horizon, "horizon")->check(CLI::PositiveNumber);
  ban->add_option("--eps1", bandit.eps1, "tolerance below alpha")->check(CLI::PositiveNumber);
  ban->add_option("--eps2", bandit.eps2, "margin added to alpha")->check(CLI::PositiveNumber);
  ban->add_option("--ssa", ssa_name, "offline solver: dpss or gss")
      ->check(CLI::IsMember({"dpss", "gss"}));
  ban->add_option("--iters", bandit.iterations, "iterations")->check(CLI::PositiveNumber);
  ban->add_option("--seed", bandit.master_seed, "master seed");
  ban->add_option("--workers", bandit.workers, "worker threads (0 = all cores)");
  ban->add_option("--out", bandit_out, "per-round CSV")->required();
  ban->add_option("--summary", summary_out,
                  "summary CSV (default: <out stem>_summary.csv)");

  std::string in_path;
  std::string algo_name = "dpss";
  auto* solve = app.add_subcommand("solve", "solve one instance file");
  solve->add_option("--in", in_path, "instance file")->required()->check(CLI::ExistingFile);
  solve->add_option("--algo", algo_name, "dpss, gss or oracle")
      ->check(CLI::IsMember({"dpss", "gss", "oracle"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*off) {
      offline.solvers.clear();
      for (const auto& name : solver_names) {
        offline.solvers.push_back(qcss::parse_algorithm(name));
      }
      return RunOffline(offline, offline_out);
    }
    if (*ban) {
      bandit.ssa = qcss::parse_algorithm(ssa_name);
      return RunBandit(bandit, bandit_out, summary_out);
    }
    return RunSolve(in_path, qcss::parse_algorithm(algo_name));
  } catch (const std::exception& e) {
    std::cerr << "qcss: " << e.what() << '\n';
    return 1;
  }
}
