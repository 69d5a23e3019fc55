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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uqeval/core.hpp"

namespace uqeval
{

/// One evaluated prediction request, reduced to what retention analysis needs.
struct ScoredSample
{
  std::string id;
  double error = 0.0;        // >= 0, finite
  double uncertainty = 0.0;  // finite, larger = more uncertain
  ShiftTag tag;
};

struct CurvePoint
{
  double retention = 0.0;  // fraction of predictions kept, grid k/N
  double value = 0.0;
};

/// N+1 points on the uniform grid 0, 1/N, ..., 1 plus the trapezoidal AUC.
struct RetentionCurve
{
  std::vector<CurvePoint> points;
  double auc = 0.0;
};

/// How samples are ranked for retention.  The most-uncertain predictions are
/// replaced by ground truth first, i.e. the retained set at level k/N is the
/// k samples ranked most certain.  Ties break by ascending sample id.
struct Ordering
{
  enum class Kind { by_uncertainty, random, optimal };

  Kind kind = Kind::by_uncertainty;
  std::uint64_t seed = 0;

  static Ordering by_uncertainty() { return {Kind::by_uncertainty, 0}; }
  static Ordering random(std::uint64_t seed) { return {Kind::random, seed}; }
  /// Replaces the largest errors first; lower bound for any uncertainty rule.
  static Ordering optimal() { return {Kind::optimal, 0}; }
};

/// Dataset error as predictions are replaced by ground truth.  The value at
/// retention k/N is (1/N) * sum of the errors of the k retained samples.
/// Throws EmptyDatasetError / ValidityError (non-finite inputs).
RetentionCurve error_retention_curve(
  std::span<const ScoredSample> samples, Ordering ordering = Ordering::by_uncertainty());

/// Trapezoidal area under a retention curve (already stored in `auc`;
/// recomputes from the points).
double r_auc(const RetentionCurve & curve);

/// F1 of "predicted acceptable" (the retained set) against "actually
/// acceptable" (error < threshold), swept over the retention grid.  F1 is 0
/// where precision + recall is 0, including at retention 0.
RetentionCurve f1_retention_curve(
  std::span<const ScoredSample> samples, double threshold,
  Ordering ordering = Ordering::by_uncertainty());

/// Curve value at the smallest grid retention >= r.
double f1_at(const RetentionCurve & curve, double r);

/// Probability that a shifted sample ranks more uncertain than an in-domain
/// one (ties count half), computed by rank sums in O(N log N).  Throws
/// SingleClassError unless both partitions are present.
double roc_auc(std::span<const ScoredSample> samples);

/// At most max_points evenly spaced points, endpoints kept, for plotting.
/// The stored AUC is copied unchanged; it always reflects the full grid.
RetentionCurve subsample_curve(const RetentionCurve & curve, std::size_t max_points);

}  // namespace uqeval
