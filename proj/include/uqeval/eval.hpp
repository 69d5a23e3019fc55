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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uqeval/io.hpp"
#include "uqeval/retention.hpp"

namespace uqeval
{

enum class CurveGrid { exact, subsampled_1000 };

struct EvalOptions
{
  /// Acceptability threshold for F1 curves.  Regression defaults to an MSE of
  /// 1; the trajectory and translation tasks have no defensible default, so
  /// there it must be supplied.
  std::optional<double> threshold;
  std::uint64_t seed = 0;      // random baseline ordering + the random measure
  unsigned threads = 1;
  CurveGrid grid = CurveGrid::exact;
};

/// One plotted curve with its baselines.  `name` identifies curve kind and
/// error metric (e.g. "retention_mse.tvar"), `partition` is in/shifted/full.
struct NamedCurve
{
  std::string name;
  std::string partition;
  std::string y_label;
  RetentionCurve model;
  RetentionCurve random_baseline;
  RetentionCurve optimal_baseline;
};

/// metrics.json content plus every curve the report carries.  Scalar metrics
/// are keyed metric -> partition -> value; AUCs always come from the exact
/// retention grid regardless of the plotting grid.
struct EvalReport
{
  nlohmann::json metrics;
  std::vector<NamedCurve> curves;
};

EvalReport evaluate(const Dataset & dataset, const EvalOptions & options);

/// Retention samples for one dataset, as used by `evaluate` and the retention
/// subcommand.  `metric` names the uncertainty measure for regression and the
/// error metric for trajectories; translation has the single "egleu_error".
std::vector<ScoredSample> retention_samples(
  const Dataset & dataset, const std::string & metric, const EvalOptions & options);

/// Adds the full retention analysis of one sample set to a report: error- and
/// F1-retention curves with random/optimal baselines for each nonempty
/// partition, the corresponding AUC metrics under keys "r_auc<key_suffix>"
/// etc., and ROC-AUC when both partitions are present.  Without a threshold
/// the F1 side is left out.
void add_retention_suite(
  EvalReport & report, const std::vector<ScoredSample> & samples, const std::string & curve_base,
  const std::string & key_suffix, const std::string & y_label, std::optional<double> threshold,
  std::uint64_t seed);

/// Writes metrics.json plus one CSV and one SVG per curve into `dir`.
void write_report(const EvalReport & report, const std::filesystem::path & dir, CurveGrid grid);

}  // namespace uqeval
