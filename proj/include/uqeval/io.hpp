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

#include "uqeval/core.hpp"
#include "uqeval/retention.hpp"
#include "uqeval/rip.hpp"

namespace uqeval
{

/// A task-homogeneous record file held in memory.
struct Dataset
{
  Task task = Task::regression;
  std::vector<RegressionRecord> regression;
  std::vector<TrajectoryRecord> trajectory;
  std::vector<TranslationRecord> translation;

  [[nodiscard]] std::size_t size() const
  {
    return regression.size() + trajectory.size() + translation.size();
  }
};

nlohmann::json to_json(const RegressionRecord & record);
nlohmann::json to_json(const TrajectoryRecord & record);
nlohmann::json to_json(const TranslationRecord & record);

RegressionRecord regression_from_json(const nlohmann::json & j);
TrajectoryRecord trajectory_from_json(const nlohmann::json & j);
TranslationRecord translation_from_json(const nlohmann::json & j);

/// One record per line.  All records must carry the same task.  Parse and
/// shape problems throw ParseError with the 1-based line number; unreadable
/// files throw IoError.  Records are not validated here.
Dataset read_jsonl(const std::filesystem::path & path);

/// Serializes a dataset to JSONL.  Numbers round-trip exactly (shortest
/// representation that parses back to the same double).
std::string to_jsonl(const Dataset & dataset);
void write_jsonl(const Dataset & dataset, const std::filesystem::path & path);

struct LineIssue
{
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct ValidationSummary
{
  std::size_t records = 0;
  std::size_t skipped = 0;  // structurally fine but not evaluable
  std::vector<LineIssue> issues;
};

/// Line-by-line parse + validation pass for the `validate` subcommand.
ValidationSummary validate_file(const std::filesystem::path & path);

/// Two-column CSV, header "retention,value", 17 significant digits.
void write_curve_csv(const RetentionCurve & curve, const std::filesystem::path & path);
RetentionCurve read_curve_csv(const std::filesystem::path & path);

/// Static SVG plot of a retention-style curve with optional baseline overlays.
void write_curve_svg(
  const std::filesystem::path & path, const std::string & title, const std::string & y_label,
  const RetentionCurve & model, const RetentionCurve * random_baseline,
  const RetentionCurve * optimal_baseline);

/// G rows x K comma-separated log-probabilities, no header.
ScoreMatrix read_score_matrix_csv(const std::filesystem::path & path);

void write_text_file(const std::filesystem::path & path, const std::string & content);
std::string read_text_file(const std::filesystem::path & path);

}  // namespace uqeval
