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

#include "uqeval/eval.hpp"

#include <array>
#include <cmath>

#include "uqeval/regression_metrics.hpp"
#include "uqeval/trajectory_metrics.hpp"
#include "uqeval/translation_metrics.hpp"

namespace uqeval
{

namespace
{

constexpr double kDefaultRegressionThreshold = 1.0;

const std::array<const char *, 3> kPartitionNames = {"in", "shifted", "full"};

std::vector<ScoredSample> partition_subset(
  const std::vector<ScoredSample> & samples, const char * partition)
{
  if (std::string(partition) == "full") {
    return samples;
  }
  const Partition want =
    std::string(partition) == "in" ? Partition::in_domain : Partition::shifted;
  std::vector<ScoredSample> out;
  for (const ScoredSample & s : samples) {
    if (s.tag.partition == want) {
      out.push_back(s);
    }
  }
  return out;
}

bool has_both_classes(const std::vector<ScoredSample> & samples)
{
  bool any_in = false;
  bool any_shifted = false;
  for (const ScoredSample & s : samples) {
    (s.tag.partition == Partition::shifted ? any_shifted : any_in) = true;
  }
  return any_in && any_shifted;
}

}  // namespace

// The random and optimal baselines do not depend on the uncertainty source,
// so their metric keys are shared across suites of the same task (rewritten
// with identical values when a task has several measures).
void add_retention_suite(
  EvalReport & report, const std::vector<ScoredSample> & samples, const std::string & curve_base,
  const std::string & key_suffix, const std::string & y_label, std::optional<double> threshold,
  std::uint64_t seed)
{
  for (const char * part : kPartitionNames) {
    const std::vector<ScoredSample> subset = partition_subset(samples, part);
    if (subset.empty()) {
      continue;
    }
    const RetentionCurve err = error_retention_curve(subset);
    const RetentionCurve err_random = error_retention_curve(subset, Ordering::random(seed));
    const RetentionCurve err_optimal = error_retention_curve(subset, Ordering::optimal());

    report.metrics["r_auc" + key_suffix][part] = err.auc;
    report.metrics["r_auc.optimal"][part] = err_optimal.auc;
    report.metrics["r_auc.random"][part] = err_random.auc;
    report.curves.push_back(
      {"retention_" + curve_base, part, y_label, err, err_random, err_optimal});

    if (threshold.has_value()) {
      const RetentionCurve f1 = f1_retention_curve(subset, *threshold);
      const RetentionCurve f1_random =
        f1_retention_curve(subset, *threshold, Ordering::random(seed));
      const RetentionCurve f1_optimal =
        f1_retention_curve(subset, *threshold, Ordering::optimal());
      report.metrics["f1_auc" + key_suffix][part] = f1.auc;
      report.metrics["f1_at_95" + key_suffix][part] = f1_at(f1, 0.95);
      report.metrics["f1_auc.optimal"][part] = f1_optimal.auc;
      report.metrics["f1_auc.random"][part] = f1_random.auc;
      report.curves.push_back({"f1_" + curve_base, part, "F1", f1, f1_random, f1_optimal});
    }
  }
  if (has_both_classes(samples)) {
    report.metrics["roc_auc" + key_suffix]["full"] = roc_auc(samples);
  }
}

namespace
{

void add_counts(EvalReport & report, const std::vector<ScoredSample> & samples)
{
  for (const char * part : kPartitionNames) {
    report.metrics["count"][part] =
      static_cast<std::uint64_t>(partition_subset(samples, part).size());
  }
}

/// Mean of `values` restricted to one partition, sequential in record order.
double partition_mean(
  const std::vector<double> & values, const std::vector<Partition> & parts, const char * name,
  std::size_t * count_out = nullptr)
{
  const bool full = std::string(name) == "full";
  const Partition want = std::string(name) == "in" ? Partition::in_domain : Partition::shifted;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (full || parts[i] == want) {
      sum += values[i];
      ++n;
    }
  }
  if (count_out != nullptr) {
    *count_out = n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

EvalReport evaluate_regression(
  const std::vector<RegressionRecord> & records, const EvalOptions & options)
{
  if (records.empty()) {
    throw EmptyDatasetError("evaluate: empty regression dataset");
  }
  for (const RegressionRecord & r : records) {
    validate_regression_record(r);
  }
  const double threshold = options.threshold.value_or(kDefaultRegressionThreshold);
  const std::size_t n = records.size();

  std::vector<double> sq_err(n);
  std::vector<double> abs_err(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    sq_err[i] = per_sample_mse(records[i]);
    abs_err[i] = std::sqrt(sq_err[i]);
  });
  std::vector<Partition> parts(n);
  for (std::size_t i = 0; i < n; ++i) {
    parts[i] = records[i].tag.partition;
  }

  EvalReport report;
  report.metrics["task"] = "regression";
  for (const char * part : kPartitionNames) {
    std::size_t count = 0;
    const double mse = partition_mean(sq_err, parts, part, &count);
    if (count == 0) {
      continue;
    }
    report.metrics["rmse"][part] = std::sqrt(mse);
    report.metrics["mae"][part] = partition_mean(abs_err, parts, part);
  }

  static constexpr std::array<UncertaintyMeasureKind, 6> kMeasures = {
    UncertaintyMeasureKind::mvar,   UncertaintyMeasureKind::varm,
    UncertaintyMeasureKind::tvar,   UncertaintyMeasureKind::epkl,
    UncertaintyMeasureKind::single_variance, UncertaintyMeasureKind::random};
  for (const UncertaintyMeasureKind kind : kMeasures) {
    std::vector<ScoredSample> samples(n);
    parallel_for(n, options.threads, [&](std::size_t i) {
      samples[i] = {
        records[i].id, sq_err[i], uncertainty_measure(records[i], kind, options.seed),
        records[i].tag};
    });
    const std::string name = to_string(kind);
    add_retention_suite(
      report, samples, "mse." + name, "." + name, "retained MSE", threshold, options.seed);
    if (kind == kMeasures.front()) {
      add_counts(report, samples);
    }
  }
  return report;
}

EvalReport evaluate_trajectory(
  const std::vector<TrajectoryRecord> & records, const EvalOptions & options)
{
  if (records.empty()) {
    throw EmptyDatasetError("evaluate: empty trajectory dataset");
  }
  if (!options.threshold.has_value()) {
    throw ConfigError("the trajectory task requires --threshold (acceptable weighted ADE)");
  }
  std::vector<const TrajectoryRecord *> kept;
  std::size_t skipped = 0;
  for (const TrajectoryRecord & r : records) {
    if (validate_trajectory_record(r) == RecordStatus::skip) {
      ++skipped;  // partially observed future: excluded from every count
    } else {
      kept.push_back(&r);
    }
  }
  if (kept.empty()) {
    throw EmptyDatasetError("evaluate: every trajectory record was skipped");
  }
  const std::size_t n = kept.size();

  struct PerRecord
  {
    std::array<double, 8> values;  // min/avg/top1/weighted x ade/fde
  };
  static constexpr std::array<const char *, 8> kNames = {
    "min_ade", "avg_ade", "top1_ade", "weighted_ade",
    "min_fde", "avg_fde", "top1_fde", "weighted_fde"};
  std::vector<PerRecord> metrics(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    const TrajectoryRecord & r = *kept[i];
    std::size_t slot = 0;
    for (const DisplacementKind kind : {DisplacementKind::ade, DisplacementKind::fde}) {
      metrics[i].values[slot++] = agg_displacement(r, AggregationKind::min, kind);
      metrics[i].values[slot++] = agg_displacement(r, AggregationKind::avg, kind);
      metrics[i].values[slot++] = top1_displacement(r, kind);
      metrics[i].values[slot++] = weighted_displacement(r, kind);
    }
  });
  std::vector<Partition> parts(n);
  for (std::size_t i = 0; i < n; ++i) {
    parts[i] = kept[i]->tag.partition;
  }

  EvalReport report;
  report.metrics["task"] = "trajectory";
  report.metrics["skipped"]["full"] = static_cast<std::uint64_t>(skipped);
  for (std::size_t m = 0; m < kNames.size(); ++m) {
    std::vector<double> column(n);
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = metrics[i].values[m];
    }
    for (const char * part : kPartitionNames) {
      std::size_t count = 0;
      const double mean = partition_mean(column, parts, part, &count);
      if (count > 0) {
        report.metrics[kNames[m]][part] = mean;
      }
    }
  }

  std::vector<ScoredSample> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i] = {kept[i]->id, metrics[i].values[3], kept[i]->request_uncertainty, kept[i]->tag};
  }
  add_counts(report, samples);
  add_retention_suite(
    report, samples, "weighted_ade", "", "retained weighted ADE", options.threshold,
    options.seed);
  return report;
}

EvalReport evaluate_translation(
  const std::vector<TranslationRecord> & records, const EvalOptions & options)
{
  if (records.empty()) {
    throw EmptyDatasetError("evaluate: empty translation dataset");
  }
  if (!options.threshold.has_value()) {
    throw ConfigError("the translation task requires --threshold (acceptable eGLEU error)");
  }
  for (const TranslationRecord & r : records) {
    validate_translation_record(r);
  }
  const std::size_t n = records.size();
  std::vector<double> expected(n);
  std::vector<double> best(n);
  std::vector<double> entropy(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    expected[i] = record_expected_score(records[i]);
    double b = 0.0;
    for (const Tokens & hyp : records[i].hypotheses) {
      b = std::max(b, sentence_gleu(hyp, records[i].reference));
    }
    best[i] = b;
    entropy[i] = weight_entropy(records[i]);
  });
  std::vector<Partition> parts(n);
  for (std::size_t i = 0; i < n; ++i) {
    parts[i] = records[i].tag.partition;
  }

  EvalReport report;
  report.metrics["task"] = "translation";
  for (const char * part : kPartitionNames) {
    std::size_t count = 0;
    const double mean_expected = partition_mean(expected, parts, part, &count);
    if (count == 0) {
      continue;
    }
    const double eg = 100.0 * mean_expected;
    report.metrics["egleu"][part] = eg;
    report.metrics["max_gleu"][part] = 100.0 * partition_mean(best, parts, part);
    report.metrics["egleu_error"][part] = 100.0 - eg;
  }

  std::vector<ScoredSample> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i] = {records[i].id, 100.0 * (1.0 - expected[i]), entropy[i], records[i].tag};
  }
  add_counts(report, samples);
  add_retention_suite(
    report, samples, "egleu_error", "", "retained eGLEU error", options.threshold, options.seed);
  return report;
}

}  // namespace

EvalReport evaluate(const Dataset & dataset, const EvalOptions & options)
{
  switch (dataset.task) {
    case Task::regression:
      return evaluate_regression(dataset.regression, options);
    case Task::trajectory:
      return evaluate_trajectory(dataset.trajectory, options);
    case Task::translation:
      return evaluate_translation(dataset.translation, options);
  }
  throw ConfigError("evaluate: unknown task");
}

std::vector<ScoredSample> retention_samples(
  const Dataset & dataset, const std::string & metric, const EvalOptions & options)
{
  std::vector<ScoredSample> samples;
  switch (dataset.task) {
    case Task::regression: {
      const UncertaintyMeasureKind kind = parse_uncertainty_measure(metric);
      samples.resize(dataset.regression.size());
      parallel_for(dataset.regression.size(), options.threads, [&](std::size_t i) {
        const RegressionRecord & r = dataset.regression[i];
        validate_regression_record(r);
        samples[i] = {r.id, per_sample_mse(r), uncertainty_measure(r, kind, options.seed), r.tag};
      });
      break;
    }
    case Task::trajectory: {
      static const std::vector<std::string> kAde = {"min_ade", "avg_ade", "top1_ade",
                                                    "weighted_ade"};
      static const std::vector<std::string> kFde = {"min_fde", "avg_fde", "top1_fde",
                                                    "weighted_fde"};
      const auto metric_value = [&metric](const TrajectoryRecord & r) {
        const DisplacementKind kind = metric.ends_with("fde") ? DisplacementKind::fde
                                                              : DisplacementKind::ade;
        if (metric.starts_with("min_")) return agg_displacement(r, AggregationKind::min, kind);
        if (metric.starts_with("avg_")) return agg_displacement(r, AggregationKind::avg, kind);
        if (metric.starts_with("top1_")) return top1_displacement(r, kind);
        return weighted_displacement(r, kind);
      };
      bool known = false;
      for (const std::string & name : kAde) known = known || name == metric;
      for (const std::string & name : kFde) known = known || name == metric;
      if (!known) {
        throw ConfigError("unknown trajectory metric \"" + metric + "\"");
      }
      for (const TrajectoryRecord & r : dataset.trajectory) {
        if (validate_trajectory_record(r) == RecordStatus::accepted) {
          samples.push_back({r.id, metric_value(r), r.request_uncertainty, r.tag});
        }
      }
      break;
    }
    case Task::translation: {
      if (metric != "egleu_error") {
        throw ConfigError("unknown translation metric \"" + metric + "\"");
      }
      samples.resize(dataset.translation.size());
      parallel_for(dataset.translation.size(), options.threads, [&](std::size_t i) {
        const TranslationRecord & r = dataset.translation[i];
        validate_translation_record(r);
        samples[i] = {r.id, record_egleu_error(r), weight_entropy(r), r.tag};
      });
      break;
    }
  }
  return samples;
}

void write_report(const EvalReport & report, const std::filesystem::path & dir, CurveGrid grid)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  write_text_file(dir / "metrics.json", report.metrics.dump(2) + "\n");
  for (const NamedCurve & curve : report.curves) {
    const std::string base = curve.name + "." + curve.partition;
    const RetentionCurve csv_curve = grid == CurveGrid::exact
                                       ? curve.model
                                       : subsample_curve(curve.model, 1001);
    write_curve_csv(csv_curve, dir / (base + ".csv"));
    write_curve_svg(
      dir / (base + ".svg"), base, curve.y_label, curve.model, &curve.random_baseline,
      &curve.optimal_baseline);
  }
}

}  // namespace uqeval
