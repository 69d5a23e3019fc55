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
#include <string>
#include <vector>

#include "uqeval/core.hpp"
#include "uqeval/prng.hpp"
#include "uqeval/rip.hpp"

namespace uqeval
{

/// Trajectory horizon: 25 states at 5 Hz.
inline constexpr std::size_t kHorizon = 25;
inline constexpr double kStepSeconds = 0.2;

/// Seeded generator request.  shift_severity scales how far the shifted
/// partition departs from the in-domain one; severity 0 makes the partitions
/// statistically indistinguishable.
struct SynthSpec
{
  std::uint64_t seed = 0;
  int n_in = 0;
  int n_shifted = 0;
  double shift_severity = 0.0;
  Task task = Task::regression;
};

struct RegressionSynthParams
{
  int k = 5;                   // ensemble members per record
  double target_sigma = 2.0;   // spread of the latent targets
  double obs_sigma = 0.8;      // member observation noise, shared by partitions
  double severity_gain = 0.3;  // per-unit-severity growth of member disagreement
};

/// Ensemble members are noisy observers of the target.  On shifted records
/// their disagreement (and hence the ensemble-mean error) grows with
/// severity, while the reported variances stay flat, so knowledge-uncertainty
/// measures carry the shift signal and mvar does not.
std::vector<RegressionRecord> gen_regression(
  const SynthSpec & spec, const RegressionSynthParams & params = {});

enum class SceneKind { constant_velocity, constant_turn, stopping, fork };

/// Closed-form kinematic scene.  `velocity` is the initial velocity; the turn
/// rate drives a constant-curvature arc and `decel` a straight-line stop.
struct SceneParams
{
  SceneKind kind = SceneKind::constant_velocity;
  Point2 start;
  Point2 velocity;
  double turn_rate = 0.0;  // rad/s, constant_turn and the fork's turning mode
  double decel = 0.0;      // m/s^2, stopping only
};

/// Positions at kStepSeconds, 2*kStepSeconds, ..., kHorizon steps out.
std::vector<Point2> kinematic_rollout(const SceneParams & params);

/// Likelihood backend with one or more maneuver modes and a shared per-step
/// covariance.  Scoring conditions on the candidate by snapping to the mode
/// nearest to it; the density of any candidate is then bounded by the mode
/// rollout's own score, which keeps the model-mean trajectory maximal.
class AnalyticGaussianModel : public LikelihoodModel
{
public:
  AnalyticGaussianModel(std::vector<std::vector<Point2>> modes, std::vector<Cov2> step_covs);

  std::vector<GaussianStep> conditional_steps(const Trajectory & candidate) const override;

  /// Draws a trajectory: uniform mode choice, then per-step Gaussian noise.
  Trajectory sample(Prng & rng) const;

  const std::vector<std::vector<Point2>> & modes() const { return modes_; }

private:
  std::size_t nearest_mode(const Trajectory & candidate) const;

  std::vector<std::vector<Point2>> modes_;
  std::vector<Cov2> step_covs_;
};

struct TrajectorySynthParams
{
  int k = 5;   // ensemble members
  int q = 10;  // candidates sampled per member
  int d = 5;   // trajectories reported per record
  AggOperator traj_agg = AggOperator::lower_quartile;
  AggOperator req_agg = AggOperator::lower_quartile;
  double process_noise = 0.05;    // ground-truth jitter, m per step
  double model_vel_sigma = 0.06;  // member velocity misestimate, m/s, at severity 0
  double step_sigma = 0.18;       // candidate sampling spread, m
};

/// One generated prediction request before the pipeline runs: ground truth,
/// the true maneuver modes, K perturbed member backends, and the K*Q
/// candidates sampled from them.  Member perturbations grow with severity on
/// shifted scenes, so the ensemble disagrees exactly where errors grow.
struct SyntheticScene
{
  std::string id;
  ShiftTag tag;
  Trajectory ground_truth;
  std::vector<std::vector<Point2>> true_modes;
  std::vector<AnalyticGaussianModel> members;
  std::vector<Trajectory> candidates;
};

std::vector<SyntheticScene> gen_trajectory_scenes(
  const SynthSpec & spec, const TrajectorySynthParams & params = {});

/// Scenes pushed through the aggregation pipeline into complete records.
std::vector<TrajectoryRecord> gen_trajectory_records(
  const SynthSpec & spec, const TrajectorySynthParams & params = {}, unsigned threads = 1);

struct TranslationSynthParams
{
  int h = 5;                    // hypotheses per record
  int vocab = 50;               // synthetic vocabulary size
  int min_len = 5;              // reference length bounds, tokens
  int max_len = 14;
  double in_domain_rate = 0.25;  // in-domain perturbation intensity per unit severity
};

/// References are random token sequences; hypotheses start as copies and
/// receive severity-scaled edit anomalies (drops, swaps, substitutions),
/// tagged in `meta`.  Weights sharpen toward the cleaner hypotheses, flatter
/// on the heavier-perturbed shifted records.
std::vector<TranslationRecord> gen_translation(
  const SynthSpec & spec, const TranslationSynthParams & params = {});

}  // namespace uqeval
