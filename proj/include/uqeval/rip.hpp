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

/// Symmetric 2x2 covariance.  Symmetry is guaranteed by construction; positive
/// definiteness is checked where the matrix is used.
struct Cov2
{
  double xx = 1.0;
  double xy = 0.0;
  double yy = 1.0;

  [[nodiscard]] double det() const { return xx * yy - xy * xy; }
  [[nodiscard]] bool positive_definite() const { return xx > 0.0 && det() > 0.0; }
};

/// One step of a per-step bivariate Gaussian density over positions.
struct GaussianStep
{
  Point2 mean;
  Cov2 cov;
};

/// A trajectory likelihood backend: given a candidate trajectory (plus
/// whatever scene context the implementation holds), yields the sequence of
/// per-step Gaussians the candidate is scored under.
class LikelihoodModel
{
public:
  virtual ~LikelihoodModel() = default;

  virtual std::vector<GaussianStep> conditional_steps(const Trajectory & candidate) const = 0;
};

/// Log density of position `s` under one Gaussian step.  Throws
/// CovarianceError if the covariance is not positive definite.
double gaussian2_logpdf(const Point2 & s, const GaussianStep & step);

/// Sum of per-step log densities of the candidate under the model.  Throws
/// ShapeError if the model emits a step count different from the candidate's.
double log_prob_trajectory(const LikelihoodModel & model, const Trajectory & candidate);

/// Per-member aggregation operators.  lower_quartile is mean minus population
/// standard deviation, a pessimistic summary of the score sample.
enum class AggOperator { min, mean, lower_quartile };

/// Aggregates a nonempty score sample; throws EmptyInputError.
double aggregate(std::span<const double> scores, AggOperator op);

/// Log-probability matrix: candidates x models, candidate-major.
struct ScoreMatrix
{
  std::size_t candidates = 0;
  std::size_t models = 0;
  std::vector<double> logp;  // candidates * models

  double at(std::size_t g, std::size_t k) const { return logp[g * models + k]; }
  double & at(std::size_t g, std::size_t k) { return logp[g * models + k]; }
};

ScoreMatrix score_matrix(
  std::span<const LikelihoodModel * const> models, std::span<const Trajectory> candidates,
  unsigned threads = 1);

/// Robust imitative planning configuration.  g == 0 means k * q.
struct RipConfig
{
  int k = 5;   // ensemble members
  int q = 10;  // candidates generated per member
  int g = 0;   // candidates scored per request
  int d = 5;   // trajectories reported
  AggOperator traj_agg = AggOperator::lower_quartile;
  AggOperator req_agg = AggOperator::lower_quartile;

  [[nodiscard]] int resolved_g() const { return g > 0 ? g : k * q; }
};

struct RipResult
{
  std::vector<std::size_t> selected;          // candidate indices, best first
  std::vector<double> per_trajectory_scores;  // size G, aggregated over members
  std::vector<double> confidences;            // size D, aligned with `selected`
  double request_uncertainty = 0.0;           // negated request-level score
  std::vector<Trajectory> trajectories;       // size D; empty when scored externally
};

/// Pipeline steps downstream of scoring: per-trajectory aggregation over
/// members, request-level aggregation (negated once into an uncertainty),
/// top-D selection (score descending, ties to the lower candidate index), and
/// a max-subtracted softmax over the selected scores.
RipResult aggregate_and_select(const ScoreMatrix & scores, const RipConfig & config);

/// Full pipeline over an ensemble of backends and a shared candidate set.
RipResult run_rip(
  std::span<const LikelihoodModel * const> models, std::span<const Trajectory> candidates,
  const RipConfig & config, unsigned threads = 1);

const char * to_string(AggOperator op);
AggOperator parse_agg_operator(const std::string & name);

}  // namespace uqeval
