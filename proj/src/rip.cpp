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

#include "uqeval/rip.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace uqeval
{

namespace
{

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 * pi)

}  // namespace

double gaussian2_logpdf(const Point2 & s, const GaussianStep & step)
{
  const Cov2 & c = step.cov;
  const double det = c.det();
  if (!(c.xx > 0.0) || !(det > 0.0)) {
    throw CovarianceError(
      "covariance is not positive definite (xx=" + std::to_string(c.xx) +
      ", det=" + std::to_string(det) + ")");
  }
  const double dx = s.x - step.mean.x;
  const double dy = s.y - step.mean.y;
  const double quad = (dx * dx * c.yy - 2.0 * dx * dy * c.xy + dy * dy * c.xx) / det;
  return -kLog2Pi - 0.5 * std::log(det) - 0.5 * quad;
}

double log_prob_trajectory(const LikelihoodModel & model, const Trajectory & candidate)
{
  const std::vector<GaussianStep> steps = model.conditional_steps(candidate);
  if (steps.size() != candidate.length()) {
    throw ShapeError(
      "model emitted " + std::to_string(steps.size()) + " steps for a candidate of length " +
      std::to_string(candidate.length()));
  }
  double logp = 0.0;
  for (std::size_t t = 0; t < steps.size(); ++t) {
    logp += gaussian2_logpdf(candidate.states[t], steps[t]);
  }
  return logp;
}

double aggregate(std::span<const double> scores, AggOperator op)
{
  if (scores.empty()) {
    throw EmptyInputError("aggregate of an empty score sample");
  }
  switch (op) {
    case AggOperator::min:
      return *std::min_element(scores.begin(), scores.end());
    case AggOperator::mean: {
      double sum = 0.0;
      for (const double s : scores) {
        sum += s;
      }
      return sum / static_cast<double>(scores.size());
    }
    case AggOperator::lower_quartile: {
      double sum = 0.0;
      for (const double s : scores) {
        sum += s;
      }
      const double mean = sum / static_cast<double>(scores.size());
      double sq = 0.0;
      for (const double s : scores) {
        sq += (s - mean) * (s - mean);
      }
      return mean - std::sqrt(sq / static_cast<double>(scores.size()));
    }
  }
  throw ConfigError("unknown aggregation operator");
}

ScoreMatrix score_matrix(
  std::span<const LikelihoodModel * const> models, std::span<const Trajectory> candidates,
  unsigned threads)
{
  if (models.empty()) {
    throw EmptyInputError("score_matrix with no models");
  }
  if (candidates.empty()) {
    throw EmptyInputError("score_matrix with no candidates");
  }
  ScoreMatrix m;
  m.candidates = candidates.size();
  m.models = models.size();
  m.logp.resize(m.candidates * m.models);
  parallel_for(m.candidates, threads, [&](std::size_t g) {
    for (std::size_t k = 0; k < m.models; ++k) {
      m.at(g, k) = log_prob_trajectory(*models[k], candidates[g]);
    }
  });
  return m;
}

RipResult aggregate_and_select(const ScoreMatrix & scores, const RipConfig & config)
{
  if (scores.candidates == 0 || scores.models == 0) {
    throw EmptyInputError("empty score matrix");
  }
  if (config.k != static_cast<int>(scores.models)) {
    throw ShapeError(
      "rip: config expects k=" + std::to_string(config.k) + " members but the matrix has " +
      std::to_string(scores.models));
  }
  if (config.resolved_g() != static_cast<int>(scores.candidates)) {
    throw ShapeError(
      "rip: config expects " + std::to_string(config.resolved_g()) +
      " candidates but the matrix has " + std::to_string(scores.candidates));
  }
  if (config.d < 1) {
    throw ConfigError("rip: d must be >= 1");
  }
  if (static_cast<std::size_t>(config.d) > scores.candidates) {
    throw ConfigError(
      "rip: d=" + std::to_string(config.d) + " exceeds the " +
      std::to_string(scores.candidates) + " scored candidates");
  }
  RipResult result;
  result.per_trajectory_scores.resize(scores.candidates);
  for (std::size_t g = 0; g < scores.candidates; ++g) {
    const std::span<const double> row(scores.logp.data() + g * scores.models, scores.models);
    result.per_trajectory_scores[g] = aggregate(row, config.traj_agg);
  }
  const double request_score = aggregate(result.per_trajectory_scores, config.req_agg);
  result.request_uncertainty = uncertainty_from_score(request_score);

  std::vector<std::size_t> order(scores.candidates);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&result](std::size_t a, std::size_t b) {
    const double sa = result.per_trajectory_scores[a];
    const double sb = result.per_trajectory_scores[b];
    if (sa != sb) return sa > sb;
    return a < b;
  });
  result.selected.assign(order.begin(), order.begin() + config.d);

  // Max-subtracted softmax; the best selected score is first by construction.
  const double top = result.per_trajectory_scores[result.selected.front()];
  result.confidences.resize(result.selected.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < result.selected.size(); ++i) {
    result.confidences[i] = std::exp(result.per_trajectory_scores[result.selected[i]] - top);
    norm += result.confidences[i];
  }
  for (double & c : result.confidences) {
    c /= norm;
  }
  return result;
}

RipResult run_rip(
  std::span<const LikelihoodModel * const> models, std::span<const Trajectory> candidates,
  const RipConfig & config, unsigned threads)
{
  if (config.k != static_cast<int>(models.size())) {
    throw ConfigError(
      "rip: k=" + std::to_string(config.k) + " but " + std::to_string(models.size()) +
      " models were supplied");
  }
  if (config.resolved_g() != static_cast<int>(candidates.size())) {
    throw ConfigError(
      "rip: expected " + std::to_string(config.resolved_g()) + " candidates, got " +
      std::to_string(candidates.size()));
  }
  for (const Trajectory & c : candidates) {
    if (c.length() != candidates.front().length()) {
      throw ShapeError("rip: candidates disagree on trajectory length");
    }
  }
  const ScoreMatrix matrix = score_matrix(models, candidates, threads);
  RipResult result = aggregate_and_select(matrix, config);
  result.trajectories.reserve(result.selected.size());
  for (const std::size_t g : result.selected) {
    result.trajectories.push_back(candidates[g]);
  }
  return result;
}

const char * to_string(AggOperator op)
{
  switch (op) {
    case AggOperator::min:
      return "min";
    case AggOperator::mean:
      return "mean";
    case AggOperator::lower_quartile:
      return "lower_quartile";
  }
  return "?";
}

AggOperator parse_agg_operator(const std::string & name)
{
  if (name == "min") return AggOperator::min;
  if (name == "mean") return AggOperator::mean;
  if (name == "lower_quartile") return AggOperator::lower_quartile;
  throw ConfigError("unknown aggregation operator \"" + name + "\"");
}

}  // namespace uqeval
