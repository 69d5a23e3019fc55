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

#include "uqeval/trajectory_metrics.hpp"

#include <cmath>
#include <limits>

namespace uqeval
{

namespace
{

void check_pair(const Trajectory & prediction, const Trajectory & truth)
{
  if (prediction.length() != truth.length()) {
    throw ShapeError(
      "prediction has " + std::to_string(prediction.length()) + " states, ground truth has " +
      std::to_string(truth.length()));
  }
  if (truth.length() == 0) {
    throw ShapeError("empty trajectory");
  }
  if (!truth.fully_valid()) {
    throw ValidityError("ground truth is not fully valid; record should have been skipped");
  }
}

double euclidean(const Point2 & a, const Point2 & b)
{
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

double ade(const Trajectory & prediction, const Trajectory & truth)
{
  check_pair(prediction, truth);
  double sum = 0.0;
  for (std::size_t t = 0; t < truth.length(); ++t) {
    sum += euclidean(prediction.states[t], truth.states[t]);
  }
  return sum / static_cast<double>(truth.length());
}

double fde(const Trajectory & prediction, const Trajectory & truth)
{
  check_pair(prediction, truth);
  return euclidean(prediction.states.back(), truth.states.back());
}

double displacement(const Trajectory & prediction, const Trajectory & truth, DisplacementKind kind)
{
  return kind == DisplacementKind::ade ? ade(prediction, truth) : fde(prediction, truth);
}

double agg_displacement(const TrajectoryRecord & record, AggregationKind agg, DisplacementKind kind)
{
  if (record.predictions.empty()) {
    throw ShapeError("record " + record.id + ": no predictions");
  }
  double min_v = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const Trajectory & p : record.predictions) {
    const double d = displacement(p, record.ground_truth, kind);
    min_v = std::min(min_v, d);
    sum += d;
  }
  return agg == AggregationKind::min ? min_v
                                     : sum / static_cast<double>(record.predictions.size());
}

double top1_displacement(const TrajectoryRecord & record, DisplacementKind kind)
{
  if (record.predictions.empty()) {
    throw ShapeError("record " + record.id + ": no predictions");
  }
  if (record.predictions.size() != record.confidences.size()) {
    throw ShapeError("record " + record.id + ": confidences misaligned with predictions");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < record.confidences.size(); ++i) {
    // Strict comparison keeps the lowest index on ties.
    if (record.confidences[i] > record.confidences[best]) {
      best = i;
    }
  }
  return displacement(record.predictions[best], record.ground_truth, kind);
}

double weighted_displacement(const TrajectoryRecord & record, DisplacementKind kind)
{
  if (record.predictions.empty()) {
    throw ShapeError("record " + record.id + ": no predictions");
  }
  if (record.predictions.size() != record.confidences.size()) {
    throw ShapeError("record " + record.id + ": confidences misaligned with predictions");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < record.predictions.size(); ++i) {
    sum += record.confidences[i] * displacement(record.predictions[i], record.ground_truth, kind);
  }
  return sum;
}

const char * to_string(DisplacementKind kind)
{
  return kind == DisplacementKind::ade ? "ade" : "fde";
}

const char * to_string(AggregationKind agg)
{
  return agg == AggregationKind::min ? "min" : "avg";
}

}  // namespace uqeval
