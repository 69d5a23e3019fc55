// Copyright 2026 The uqeval Authors
//
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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "uqeval/eval.hpp"
#include "uqeval/io.hpp"
#include "uqeval/synth.hpp"

namespace
{

using nlohmann::json;

std::filesystem::path resolve_out_dir(const std::string & flag_value)
{
  if (!flag_value.empty()) {
    return flag_value;
  }
  if (const char * env = std::getenv("UQEVAL_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  throw uqeval::ConfigError("--out is required (or set UQEVAL_OUT)");
}

struct SpecBundle
{
  uqeval::SynthSpec spec;
  uqeval::RegressionSynthParams regression;
  uqeval::TrajectorySynthParams trajectory;
  uqeval::TranslationSynthParams translation;
};

/// Generator spec files are configuration: every problem in one maps to exit
/// code 3.
SpecBundle load_spec(const std::filesystem::path & path)
{
  json j;
  try {
    j = json::parse(uqeval::read_text_file(path));
  } catch (const json::exception & e) {
    throw uqeval::ConfigError("spec file " + path.string() + ": " + e.what());
  }
  SpecBundle bundle;
  try {
    bundle.spec.task = uqeval::parse_task(j.at("task").get<std::string>());
    bundle.spec.n_in = j.at("n_in").get<int>();
    bundle.spec.n_shifted = j.at("n_shifted").get<int>();
    bundle.spec.seed = j.value("seed", std::uint64_t{0});
    bundle.spec.shift_severity = j.value("shift_severity", 0.0);
    if (j.contains("regression")) {
      const json & sub = j.at("regression");
      bundle.regression.k = sub.value("k", bundle.regression.k);
      bundle.regression.obs_sigma = sub.value("obs_sigma", bundle.regression.obs_sigma);
      bundle.regression.target_sigma = sub.value("target_sigma", bundle.regression.target_sigma);
      bundle.regression.severity_gain =
        sub.value("severity_gain", bundle.regression.severity_gain);
    }
    if (j.contains("trajectory")) {
      const json & sub = j.at("trajectory");
      bundle.trajectory.k = sub.value("k", bundle.trajectory.k);
      bundle.trajectory.q = sub.value("q", bundle.trajectory.q);
      bundle.trajectory.d = sub.value("d", bundle.trajectory.d);
      if (sub.contains("traj_agg")) {
        bundle.trajectory.traj_agg =
          uqeval::parse_agg_operator(sub.at("traj_agg").get<std::string>());
      }
      if (sub.contains("req_agg")) {
        bundle.trajectory.req_agg =
          uqeval::parse_agg_operator(sub.at("req_agg").get<std::string>());
      }
      bundle.trajectory.process_noise =
        sub.value("process_noise", bundle.trajectory.process_noise);
    }
    if (j.contains("translation")) {
      const json & sub = j.at("translation");
      bundle.translation.h = sub.value("h", bundle.translation.h);
      bundle.translation.vocab = sub.value("vocab", bundle.translation.vocab);
      bundle.translation.min_len = sub.value("min_len", bundle.translation.min_len);
      bundle.translation.max_len = sub.value("max_len", bundle.translation.max_len);
    }
  } catch (const json::exception & e) {
    throw uqeval::ConfigError("spec file " + path.string() + ": " + e.what());
  } catch (const uqeval::Error & e) {
    throw uqeval::ConfigError("spec file " + path.string() + ": " + e.what());
  }
  return bundle;
}

uqeval::Dataset generate(const SpecBundle & bundle, unsigned threads)
{
  uqeval::Dataset dataset;
  dataset.task = bundle.spec.task;
  switch (bundle.spec.task) {
    case uqeval::Task::regression:
      dataset.regression = uqeval::gen_regression(bundle.spec, bundle.regression);
      break;
    case uqeval::Task::trajectory:
      dataset.trajectory =
        uqeval::gen_trajectory_records(bundle.spec, bundle.trajectory, threads);
      break;
    case uqeval::Task::translation:
      dataset.translation = uqeval::gen_translation(bundle.spec, bundle.translation);
      break;
  }
  return dataset;
}

int run_validate(const std::string & file)
{
  const uqeval::ValidationSummary summary = uqeval::validate_file(file);
  for (const uqeval::LineIssue & issue : summary.issues) {
    std::cerr << file << ":" << issue.line << ": " << issue.message << "\n";
  }
  std::cout << "validated " << summary.records << " records, " << summary.issues.size()
            << " invalid, " << summary.skipped << " flagged skip\n";
  return summary.issues.empty() ? 0 : 1;
}

struct EvalArgs
{
  std::string file;
  std::string out;
  std::optional<double> threshold;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string grid = "exact";
};

int run_eval(const EvalArgs & args)
{
  const std::filesystem::path out_dir = resolve_out_dir(args.out);
  const uqeval::Dataset dataset = uqeval::read_jsonl(args.file);
  uqeval::EvalOptions options;
  options.threshold = args.threshold;
  options.seed = args.seed;
  options.threads = args.threads;
  options.grid =
    args.grid == "exact" ? uqeval::CurveGrid::exact : uqeval::CurveGrid::subsampled_1000;
  const uqeval::EvalReport report = uqeval::evaluate(dataset, options);
  uqeval::write_report(report, out_dir, options.grid);
  std::cout << "wrote " << (out_dir / "metrics.json").string() << " and "
            << report.curves.size() << " curves\n";
  return 0;
}

struct RetentionArgs
{
  std::string file;
  std::string metric;
  std::string out;
  std::optional<double> threshold;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

int run_retention(const RetentionArgs & args)
{
  const std::filesystem::path out_dir = resolve_out_dir(args.out);
  const uqeval::Dataset dataset = uqeval::read_jsonl(args.file);
  uqeval::EvalOptions options;
  options.threshold = args.threshold;
  options.seed = args.seed;
  options.threads = args.threads;
  const std::vector<uqeval::ScoredSample> samples =
    uqeval::retention_samples(dataset, args.metric, options);
  if (samples.empty()) {
    throw uqeval::EmptyDatasetError("no evaluable records in " + args.file);
  }
  uqeval::EvalReport report;
  report.metrics["task"] = uqeval::to_string(dataset.task);
  report.metrics["metric"] = args.metric;
  uqeval::add_retention_suite(
    report, samples, args.metric, "." + args.metric, "retained error", args.threshold,
    args.seed);
  uqeval::write_report(report, out_dir, uqeval::CurveGrid::exact);
  std::cout << "wrote " << (out_dir / "metrics.json").string() << " and "
            << report.curves.size() << " curves\n";
  return 0;
}

struct RipArgs
{
  std::string scores;
  std::string synth_spec;
  std::string out;
  int k = 0;  // 0 = take from the spec / matrix
  int q = 0;
  int d = 0;
  std::string traj_agg;
  std::string req_agg;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

int run_rip(const RipArgs & args)
{
  const std::filesystem::path out_dir = resolve_out_dir(args.out);
  if (args.scores.empty() == args.synth_spec.empty()) {
    throw uqeval::ConfigError("rip needs exactly one of --scores or --synth");
  }
  if (!args.scores.empty()) {
    const uqeval::ScoreMatrix matrix = uqeval::read_score_matrix_csv(args.scores);
    if (args.k != 0 && static_cast<std::size_t>(args.k) != matrix.models) {
      throw uqeval::ConfigError(
        "--k=" + std::to_string(args.k) + " but the score matrix has " +
        std::to_string(matrix.models) + " columns");
    }
    uqeval::RipConfig config;
    config.k = static_cast<int>(matrix.models);
    config.q = 1;
    config.g = static_cast<int>(matrix.candidates);
    config.d = args.d != 0 ? args.d : 5;
    if (!args.traj_agg.empty()) config.traj_agg = uqeval::parse_agg_operator(args.traj_agg);
    if (!args.req_agg.empty()) config.req_agg = uqeval::parse_agg_operator(args.req_agg);
    const uqeval::RipResult result = uqeval::aggregate_and_select(matrix, config);
    json out;
    out["selected"] = result.selected;
    out["confidences"] = result.confidences;
    out["per_trajectory_scores"] = result.per_trajectory_scores;
    out["request_uncertainty"] = result.request_uncertainty;
    uqeval::write_text_file(out_dir / "rip_result.json", out.dump(2) + "\n");
    std::cout << "wrote " << (out_dir / "rip_result.json").string() << "\n";
    return 0;
  }
  SpecBundle bundle = load_spec(args.synth_spec);
  if (bundle.spec.task != uqeval::Task::trajectory) {
    throw uqeval::ConfigError("rip --synth needs a trajectory spec file");
  }
  if (args.seed.has_value()) bundle.spec.seed = *args.seed;
  if (args.k != 0) bundle.trajectory.k = args.k;
  if (args.q != 0) bundle.trajectory.q = args.q;
  if (args.d != 0) bundle.trajectory.d = args.d;
  if (!args.traj_agg.empty()) {
    bundle.trajectory.traj_agg = uqeval::parse_agg_operator(args.traj_agg);
  }
  if (!args.req_agg.empty()) {
    bundle.trajectory.req_agg = uqeval::parse_agg_operator(args.req_agg);
  }
  uqeval::Dataset dataset = generate(bundle, args.threads);
  uqeval::write_jsonl(dataset, out_dir / "records.jsonl");
  std::cout << "wrote " << dataset.size() << " records to "
            << (out_dir / "records.jsonl").string() << "\n";
  return 0;
}

struct SynthArgs
{
  std::string spec;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

int run_synth(const SynthArgs & args)
{
  if (args.out.empty()) {
    throw uqeval::ConfigError("synth requires --out <file>");
  }
  SpecBundle bundle = load_spec(args.spec);
  if (args.seed.has_value()) {
    bundle.spec.seed = *args.seed;
  }
  const uqeval::Dataset dataset = generate(bundle, args.threads);
  uqeval::write_jsonl(dataset, args.out);
  std::cout << "wrote " << dataset.size() << " records to " << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"predictive robustness and uncertainty-quality evaluation"};
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App * validate_cmd = app.add_subcommand("validate", "check every record in a JSONL file");
  validate_cmd->add_option("file", validate_path, "record file")->required();

  EvalArgs eval_args;
  double eval_threshold = 0.0;
  CLI::App * eval_cmd = app.add_subcommand("eval", "compute metrics, curves, and plots");
  eval_cmd->add_option("file", eval_args.file, "record file")->required();
  eval_cmd->add_option("--out", eval_args.out, "output directory (default $UQEVAL_OUT)");
  CLI::Option * eval_thr =
    eval_cmd->add_option("--threshold", eval_threshold, "acceptable-error threshold for F1");
  eval_cmd->add_option("--seed", eval_args.seed, "seed for the random baseline and measure");
  eval_cmd->add_option("--threads", eval_args.threads, "worker threads");
  eval_cmd->add_option("--f1-grid", eval_args.grid, "curve grid written to CSV")
    ->check(CLI::IsMember({"exact", "1000"}))
    ->default_val("exact");

  RetentionArgs retention_args;
  double retention_threshold = 0.0;
  CLI::App * retention_cmd =
    app.add_subcommand("retention", "retention curves for one metric only");
  retention_cmd->add_option("file", retention_args.file, "record file")->required();
  retention_cmd->add_option("--metric", retention_args.metric, "uncertainty measure or error metric")
    ->required();
  retention_cmd->add_option("--out", retention_args.out, "output directory (default $UQEVAL_OUT)");
  CLI::Option * retention_thr = retention_cmd->add_option(
    "--threshold", retention_threshold, "acceptable-error threshold for F1");
  retention_cmd->add_option("--seed", retention_args.seed, "seed for the random baseline");
  retention_cmd->add_option("--threads", retention_args.threads, "worker threads");

  RipArgs rip_args;
  std::uint64_t rip_seed = 0;
  CLI::App * rip_cmd = app.add_subcommand("rip", "run the ensemble aggregation pipeline");
  rip_cmd->add_option("--scores", rip_args.scores, "G x K log-probability CSV");
  rip_cmd->add_option("--synth", rip_args.synth_spec, "trajectory generator spec file");
  rip_cmd->add_option("--out", rip_args.out, "output directory (default $UQEVAL_OUT)");
  rip_cmd->add_option("--k", rip_args.k, "ensemble members");
  rip_cmd->add_option("--q", rip_args.q, "candidates per member");
  rip_cmd->add_option("--d", rip_args.d, "trajectories reported");
  rip_cmd->add_option("--traj-agg", rip_args.traj_agg, "min|mean|lower_quartile");
  rip_cmd->add_option("--req-agg", rip_args.req_agg, "min|mean|lower_quartile");
  CLI::Option * rip_seed_opt =
    rip_cmd->add_option("--seed", rip_seed, "override the spec file seed");
  rip_cmd->add_option("--threads", rip_args.threads, "worker threads");

  SynthArgs synth_args;
  std::uint64_t synth_seed = 0;
  CLI::App * synth_cmd = app.add_subcommand("synth", "generate a synthetic record file");
  synth_cmd->add_option("specfile", synth_args.spec, "generator spec file")->required();
  synth_cmd->add_option("--out", synth_args.out, "output record file")->required();
  CLI::Option * synth_seed_opt =
    synth_cmd->add_option("--seed", synth_seed, "override the spec file seed");
  synth_cmd->add_option("--threads", synth_args.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return 3;
  }

  try {
    if (*validate_cmd) {
      return run_validate(validate_path);
    }
    if (*eval_cmd) {
      if (eval_thr->count() > 0) {
        eval_args.threshold = eval_threshold;
      }
      return run_eval(eval_args);
    }
    if (*retention_cmd) {
      if (retention_thr->count() > 0) {
        retention_args.threshold = retention_threshold;
      }
      return run_retention(retention_args);
    }
    if (*rip_cmd) {
      if (rip_seed_opt->count() > 0) {
        rip_args.seed = rip_seed;
      }
      return run_rip(rip_args);
    }
    if (*synth_cmd) {
      if (synth_seed_opt->count() > 0) {
        synth_args.seed = synth_seed;
      }
      return run_synth(synth_args);
    }
  } catch (const uqeval::ConfigError & e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const uqeval::IoError & e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const uqeval::Error & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
