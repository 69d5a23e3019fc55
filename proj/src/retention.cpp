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

#include "uqeval/retention.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uqeval/prng.hpp"

namespace uqeval
{

namespace
{

void check_samples(std::span<const ScoredSample> samples)
{
  if (samples.empty()) {
    throw EmptyDatasetError("retention analysis of an empty sample set");
  }
  for (const ScoredSample & s : samples) {
    if (!std::isfinite(s.error) || s.error < 0.0) {
      throw ValidityError("sample " + s.id + ": error must be finite and >= 0");
    }
    if (!std::isfinite(s.uncertainty)) {
      throw ValidityError("sample " + s.id + ": non-finite uncertainty");
    }
  }
}

/// Indices ordered most-certain-first; position k is the k-th sample retained.
std::vector<std::size_t> retention_order(std::span<const ScoredSample> samples, Ordering ordering)
{
  std::vector<std::size_t> idx(samples.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto by_key = [&samples, &idx](auto key) {
    std::sort(idx.begin(), idx.end(), [&samples, key](std::size_t a, std::size_t b) {
      const double ka = key(samples[a]);
      const double kb = key(samples[b]);
      if (ka != kb) return ka < kb;
      if (samples[a].id != samples[b].id) return samples[a].id < samples[b].id;
      return a < b;  // total order even with duplicate ids
    });
  };
  switch (ordering.kind) {
    case Ordering::Kind::by_uncertainty:
      by_key([](const ScoredSample & s) { return s.uncertainty; });
      break;
    case Ordering::Kind::optimal:
      by_key([](const ScoredSample & s) { return s.error; });
      break;
    case Ordering::Kind::random: {
      Prng rng(ordering.seed);
      rng.shuffle(idx);
      break;
    }
  }
  return idx;
}

double trapezoid(const std::vector<CurvePoint> & points)
{
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    area += 0.5 * (points[i].value + points[i + 1].value) *
            (points[i + 1].retention - points[i].retention);
  }
  return area;
}

}  // namespace

RetentionCurve error_retention_curve(std::span<const ScoredSample> samples, Ordering ordering)
{
  check_samples(samples);
  const std::vector<std::size_t> order = retention_order(samples, ordering);
  const double n = static_cast<double>(samples.size());
  RetentionCurve curve;
  curve.points.reserve(samples.size() + 1);
  curve.points.push_back({0.0, 0.0});
  double retained_error = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    retained_error += samples[order[k]].error;
    curve.points.push_back({static_cast<double>(k + 1) / n, retained_error / n});
  }
  curve.auc = trapezoid(curve.points);
  return curve;
}

double r_auc(const RetentionCurve & curve)
{
  if (curve.points.size() < 2) {
    throw EmptyDatasetError("r_auc needs at least two curve points");
  }
  return trapezoid(curve.points);
}

RetentionCurve f1_retention_curve(
  std::span<const ScoredSample> samples, double threshold, Ordering ordering)
{
  check_samples(samples);
  if (!std::isfinite(threshold)) {
    throw ConfigError("f1_retention_curve: non-finite threshold");
  }
  const std::vector<std::size_t> order = retention_order(samples, ordering);
  std::size_t acceptable = 0;
  for (const ScoredSample & s : samples) {
    if (s.error < threshold) {
      ++acceptable;
    }
  }
  const double n = static_cast<double>(samples.size());
  RetentionCurve curve;
  curve.points.reserve(samples.size() + 1);
  // With TP true positives among k retained: FP = k - TP, FN = acceptable - TP,
  // so F1 = 2TP / (k + acceptable); zero denominator means no positives at all.
  std::size_t tp = 0;
  curve.points.push_back({0.0, 0.0});
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (samples[order[k]].error < threshold) {
      ++tp;
    }
    const std::size_t denom = (k + 1) + acceptable;
    const double f1 = denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
    curve.points.push_back({static_cast<double>(k + 1) / n, f1});
  }
  curve.auc = trapezoid(curve.points);
  return curve;
}

double f1_at(const RetentionCurve & curve, double r)
{
  if (curve.points.empty()) {
    throw EmptyDatasetError("f1_at on an empty curve");
  }
  for (const CurvePoint & p : curve.points) {
    if (p.retention >= r - 1e-12) {
      return p.value;
    }
  }
  return curve.points.back().value;
}

double roc_auc(std::span<const ScoredSample> samples)
{
  check_samples(samples);
  std::vector<std::size_t> idx(samples.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&samples](std::size_t a, std::size_t b) {
    return samples[a].uncertainty < samples[b].uncertainty;
  });
  std::size_t n_shifted = 0;
  for (const ScoredSample & s : samples) {
    if (s.tag.partition == Partition::shifted) {
      ++n_shifted;
    }
  }
  const std::size_t n_in = samples.size() - n_shifted;
  if (n_shifted == 0 || n_in == 0) {
    throw SingleClassError("roc_auc needs both in-domain and shifted samples");
  }
  // Rank-sum with midranks for ties; AUC is the normalized Mann-Whitney U.
  double shifted_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() &&
           samples[idx[j]].uncertainty == samples[idx[i]].uncertainty) {
      ++j;
    }
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t t = i; t < j; ++t) {
      if (samples[idx[t]].tag.partition == Partition::shifted) {
        shifted_rank_sum += midrank;
      }
    }
    i = j;
  }
  const double ns = static_cast<double>(n_shifted);
  const double u = shifted_rank_sum - ns * (ns + 1.0) / 2.0;
  return u / (ns * static_cast<double>(n_in));
}

RetentionCurve subsample_curve(const RetentionCurve & curve, std::size_t max_points)
{
  if (max_points < 2 || curve.points.size() <= max_points) {
    return curve;
  }
  RetentionCurve out;
  out.auc = curve.auc;
  out.points.reserve(max_points);
  const std::size_t n = curve.points.size();
  std::size_t last = n;  // sentinel
  for (std::size_t i = 0; i < max_points; ++i) {
    const std::size_t pick =
      static_cast<std::size_t>(std::llround(
        static_cast<double>(i) * static_cast<double>(n - 1) / static_cast<double>(max_points - 1)));
    if (pick != last) {
      out.points.push_back(curve.points[pick]);
      last = pick;
    }
  }
  return out;
}

}  // namespace uqeval
