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

#include "uqeval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace uqeval
{

namespace
{

// Substream keys. Every draw is reachable as (seed, record, purpose, ...), so
// generation order and thread schedule never matter.
enum Stream : std::uint64_t {
  kSceneStream = 1,
  kTruthStream = 2,
  kMemberStream = 3,
  kCandidateStream = 4,
  kTargetStream = 5,
  kDifficultyStream = 6,
  kReferenceStream = 7,
  kHypothesisStream = 8,
};

std::string make_id(const char * prefix, int index)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%05d", prefix, index);
  return buf;
}

ShiftTag make_tag(bool shifted)
{
  ShiftTag tag;
  tag.partition = shifted ? Partition::shifted : Partition::in_domain;
  return tag;
}

void check_counts(const SynthSpec & spec)
{
  if (spec.n_in < 0 || spec.n_shifted < 0 || spec.n_in + spec.n_shifted == 0) {
    throw ConfigError("synth: need a positive number of records");
  }
  if (spec.shift_severity < 0.0) {
    throw ConfigError("synth: shift_severity must be >= 0");
  }
}

}  // namespace

std::vector<RegressionRecord> gen_regression(
  const SynthSpec & spec, const RegressionSynthParams & params)
{
  check_counts(spec);
  if (params.k < 1) {
    throw ConfigError("synth: regression ensemble size must be >= 1");
  }
  const Prng root(spec.seed);
  const int total = spec.n_in + spec.n_shifted;
  std::vector<RegressionRecord> records;
  records.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    const bool shifted = i >= spec.n_in;
    const Prng rec = root.fork(static_cast<std::uint64_t>(i));
    RegressionRecord r;
    r.id = make_id("reg", i);
    r.tag = make_tag(shifted);
    Prng target_rng = rec.fork(kTargetStream);
    r.target = params.target_sigma * target_rng.next_gaussian();
    Prng difficulty_rng = rec.fork(kDifficultyStream);
    const double difficulty =
      shifted ? params.severity_gain * spec.shift_severity * std::abs(difficulty_rng.next_gaussian())
              : 0.0;
    // Member disagreement grows with difficulty; reported variances do not, so
    // only the knowledge measures see the shift.
    const double spread =
      std::sqrt(params.obs_sigma * params.obs_sigma + difficulty * difficulty);
    r.members.reserve(static_cast<std::size_t>(params.k));
    for (int k = 0; k < params.k; ++k) {
      Prng member_rng = rec.fork(kMemberStream, static_cast<std::uint64_t>(k));
      GaussianMember m;
      m.mean = r.target + spread * member_rng.next_gaussian();
      m.variance =
        params.obs_sigma * params.obs_sigma * std::exp(0.25 * member_rng.next_gaussian());
      r.members.push_back(m);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<Point2> kinematic_rollout(const SceneParams & params)
{
  std::vector<Point2> states;
  states.reserve(kHorizon);
  const double speed = std::hypot(params.velocity.x, params.velocity.y);
  switch (params.kind) {
    case SceneKind::constant_velocity:
    case SceneKind::fork: {  // the fork's straight mode
      for (std::size_t t = 1; t <= kHorizon; ++t) {
        const double tau = static_cast<double>(t) * kStepSeconds;
        states.push_back({params.start.x + params.velocity.x * tau,
                          params.start.y + params.velocity.y * tau});
      }
      break;
    }
    case SceneKind::constant_turn: {
      const double omega = params.turn_rate;
      const double theta0 = std::atan2(params.velocity.y, params.velocity.x);
      for (std::size_t t = 1; t <= kHorizon; ++t) {
        const double tau = static_cast<double>(t) * kStepSeconds;
        if (std::abs(omega) < 1e-9) {
          states.push_back({params.start.x + params.velocity.x * tau,
                            params.start.y + params.velocity.y * tau});
        } else {
          const double r = speed / omega;
          states.push_back(
            {params.start.x + r * (std::sin(theta0 + omega * tau) - std::sin(theta0)),
             params.start.y + r * (std::cos(theta0) - std::cos(theta0 + omega * tau))});
        }
      }
      break;
    }
    case SceneKind::stopping: {
      const double a = params.decel;
      const double t_stop = a > 0.0 ? speed / a : std::numeric_limits<double>::infinity();
      const double ux = speed > 0.0 ? params.velocity.x / speed : 0.0;
      const double uy = speed > 0.0 ? params.velocity.y / speed : 0.0;
      for (std::size_t t = 1; t <= kHorizon; ++t) {
        const double tau = static_cast<double>(t) * kStepSeconds;
        const double dist = tau < t_stop ? speed * tau - 0.5 * a * tau * tau
                                         : 0.5 * speed * t_stop;
        states.push_back({params.start.x + ux * dist, params.start.y + uy * dist});
      }
      break;
    }
  }
  return states;
}

AnalyticGaussianModel::AnalyticGaussianModel(
  std::vector<std::vector<Point2>> modes, std::vector<Cov2> step_covs)
: modes_(std::move(modes)), step_covs_(std::move(step_covs))
{
  if (modes_.empty()) {
    throw ConfigError("analytic model needs at least one mode");
  }
  for (const std::vector<Point2> & mode : modes_) {
    if (mode.size() != step_covs_.size()) {
      throw ShapeError("analytic model: mode length does not match covariance count");
    }
  }
  for (const Cov2 & c : step_covs_) {
    if (!c.positive_definite()) {
      throw CovarianceError("analytic model: step covariance is not positive definite");
    }
  }
}

std::size_t AnalyticGaussianModel::nearest_mode(const Trajectory & candidate) const
{
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    double cost = 0.0;
    const std::size_t n = std::min(candidate.states.size(), modes_[m].size());
    for (std::size_t t = 0; t < n; ++t) {
      const double dx = candidate.states[t].x - modes_[m][t].x;
      const double dy = candidate.states[t].y - modes_[m][t].y;
      cost += dx * dx + dy * dy;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = m;
    }
  }
  return best;
}

std::vector<GaussianStep> AnalyticGaussianModel::conditional_steps(
  const Trajectory & candidate) const
{
  const std::vector<Point2> & mode = modes_[nearest_mode(candidate)];
  std::vector<GaussianStep> steps;
  steps.reserve(mode.size());
  for (std::size_t t = 0; t < mode.size(); ++t) {
    steps.push_back({mode[t], step_covs_[t]});
  }
  return steps;
}

Trajectory AnalyticGaussianModel::sample(Prng & rng) const
{
  const std::vector<Point2> & mode = modes_[rng.next_index(modes_.size())];
  std::vector<Point2> states;
  states.reserve(mode.size());
  for (std::size_t t = 0; t < mode.size(); ++t) {
    const Cov2 & c = step_covs_[t];
    // Cholesky factor of the 2x2 covariance.
    const double l11 = std::sqrt(c.xx);
    const double l21 = c.xy / l11;
    const double l22 = std::sqrt(c.yy - l21 * l21);
    const double z1 = rng.next_gaussian();
    const double z2 = rng.next_gaussian();
    states.push_back({mode[t].x + l11 * z1, mode[t].y + l21 * z1 + l22 * z2});
  }
  return Trajectory(std::move(states));
}

namespace
{

std::vector<Cov2> member_step_covs(const TrajectorySynthParams & params, double heading, double u)
{
  const double base = params.step_sigma * (1.0 + 0.1 * u);
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  std::vector<Cov2> covs;
  covs.reserve(kHorizon);
  for (std::size_t t = 0; t < kHorizon; ++t) {
    const double sigma = base * (1.0 + 0.03 * static_cast<double>(t));
    const double lon = 1.25 * sigma;  // spread along the travel direction
    const double lat = 0.8 * sigma;
    const double l2 = lon * lon;
    const double t2 = lat * lat;
    covs.push_back({c * c * l2 + s * s * t2, c * s * (l2 - t2), s * s * l2 + c * c * t2});
  }
  return covs;
}

struct SceneDraw
{
  std::vector<SceneParams> modes;  // true maneuver modes
  std::size_t true_mode = 0;
};

SceneDraw draw_scene(Prng & rng)
{
  SceneDraw draw;
  const SceneKind kind = static_cast<SceneKind>(rng.next_index(4));
  const double speed = rng.next_uniform(3.0, 12.0);
  const double heading = rng.next_uniform(0.0, 2.0 * std::numbers::pi);
  const Point2 velocity{speed * std::cos(heading), speed * std::sin(heading)};
  SceneParams base;
  base.start = {0.0, 0.0};
  base.velocity = velocity;
  switch (kind) {
    case SceneKind::constant_velocity: {
      base.kind = SceneKind::constant_velocity;
      draw.modes.push_back(base);
      break;
    }
    case SceneKind::constant_turn: {
      base.kind = SceneKind::constant_turn;
      const double sign = rng.next_unit() < 0.5 ? -1.0 : 1.0;
      base.turn_rate = sign * rng.next_uniform(0.08, 0.3);
      draw.modes.push_back(base);
      break;
    }
    case SceneKind::stopping: {
      base.kind = SceneKind::stopping;
      base.decel = rng.next_uniform(speed / 6.0, speed / 3.0);
      draw.modes.push_back(base);
      break;
    }
    case SceneKind::fork: {
      SceneParams straight = base;
      straight.kind = SceneKind::constant_velocity;
      SceneParams turning = base;
      turning.kind = SceneKind::constant_turn;
      const double sign = rng.next_unit() < 0.5 ? -1.0 : 1.0;
      turning.turn_rate = sign * rng.next_uniform(0.15, 0.35);
      draw.modes.push_back(straight);
      draw.modes.push_back(turning);
      draw.true_mode = rng.next_unit() < 0.5 ? 0 : 1;
      break;
    }
  }
  return draw;
}

const char * maneuver_tag(const SceneDraw & draw)
{
  if (draw.modes.size() == 2) return "maneuver:fork";
  switch (draw.modes.front().kind) {
    case SceneKind::constant_velocity:
      return "maneuver:constant_velocity";
    case SceneKind::constant_turn:
      return "maneuver:constant_turn";
    case SceneKind::stopping:
      return "maneuver:stopping";
    default:
      return "maneuver:unknown";
  }
}

}  // namespace

std::vector<SyntheticScene> gen_trajectory_scenes(
  const SynthSpec & spec, const TrajectorySynthParams & params)
{
  check_counts(spec);
  if (params.k < 1 || params.q < 1) {
    throw ConfigError("synth: trajectory k and q must be >= 1");
  }
  const Prng root(spec.seed);
  const int total = spec.n_in + spec.n_shifted;
  std::vector<SyntheticScene> scenes;
  scenes.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    const bool shifted = i >= spec.n_in;
    const Prng rec = root.fork(static_cast<std::uint64_t>(i));
    Prng scene_rng = rec.fork(kSceneStream);
    const SceneDraw draw = draw_scene(scene_rng);
    const double heading =
      std::atan2(draw.modes.front().velocity.y, draw.modes.front().velocity.x);

    SyntheticScene scene;
    scene.id = make_id("traj", i);
    scene.tag = make_tag(shifted);
    scene.tag.meta.push_back(maneuver_tag(draw));
    for (const SceneParams & mode : draw.modes) {
      scene.true_modes.push_back(kinematic_rollout(mode));
    }

    Prng truth_rng = rec.fork(kTruthStream);
    std::vector<Point2> truth = scene.true_modes[draw.true_mode];
    for (Point2 & p : truth) {
      p.x += params.process_noise * truth_rng.next_gaussian();
      p.y += params.process_noise * truth_rng.next_gaussian();
    }
    scene.ground_truth = Trajectory(std::move(truth));

    // Members misestimate the scene kinematics; on shifted scenes the
    // misestimates scale up, so the ensemble disagrees exactly where the
    // candidates go wrong.
    const double scale = 1.0 + (shifted ? spec.shift_severity : 0.0);
    scene.members.reserve(static_cast<std::size_t>(params.k));
    for (int k = 0; k < params.k; ++k) {
      Prng member_rng = rec.fork(kMemberStream, static_cast<std::uint64_t>(k));
      const Point2 dv{params.model_vel_sigma * scale * member_rng.next_gaussian(),
                      params.model_vel_sigma * scale * member_rng.next_gaussian()};
      const double domega = 0.02 * scale * member_rng.next_gaussian();
      const double ddecel = 0.05 * scale * member_rng.next_gaussian();
      const double cov_u = member_rng.next_unit();
      std::vector<std::vector<Point2>> member_modes;
      member_modes.reserve(draw.modes.size());
      for (SceneParams mode : draw.modes) {
        mode.velocity.x += dv.x;
        mode.velocity.y += dv.y;
        if (mode.kind == SceneKind::constant_turn) {
          mode.turn_rate += domega;
        }
        if (mode.kind == SceneKind::stopping) {
          mode.decel = std::max(0.05, mode.decel + ddecel);
        }
        member_modes.push_back(kinematic_rollout(mode));
      }
      scene.members.emplace_back(
        std::move(member_modes), member_step_covs(params, heading, cov_u));
    }

    scene.candidates.reserve(static_cast<std::size_t>(params.k * params.q));
    for (int k = 0; k < params.k; ++k) {
      for (int j = 0; j < params.q; ++j) {
        Prng cand_rng = rec.fork(
          kCandidateStream, static_cast<std::uint64_t>(k * params.q + j));
        scene.candidates.push_back(scene.members[static_cast<std::size_t>(k)].sample(cand_rng));
      }
    }
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

std::vector<TrajectoryRecord> gen_trajectory_records(
  const SynthSpec & spec, const TrajectorySynthParams & params, unsigned threads)
{
  const std::vector<SyntheticScene> scenes = gen_trajectory_scenes(spec, params);
  RipConfig config;
  config.k = params.k;
  config.q = params.q;
  config.d = params.d;
  config.traj_agg = params.traj_agg;
  config.req_agg = params.req_agg;
  std::vector<TrajectoryRecord> records(scenes.size());
  parallel_for(scenes.size(), threads, [&](std::size_t i) {
    const SyntheticScene & scene = scenes[i];
    std::vector<const LikelihoodModel *> models;
    models.reserve(scene.members.size());
    for (const AnalyticGaussianModel & m : scene.members) {
      models.push_back(&m);
    }
    const RipResult rip = run_rip(models, scene.candidates, config);
    TrajectoryRecord & r = records[i];
    r.id = scene.id;
    r.tag = scene.tag;
    r.ground_truth = scene.ground_truth;
    r.predictions = rip.trajectories;
    r.confidences = rip.confidences;
    r.request_uncertainty = rip.request_uncertainty;
  });
  return records;
}

std::vector<TranslationRecord> gen_translation(
  const SynthSpec & spec, const TranslationSynthParams & params)
{
  check_counts(spec);
  if (params.h < 1 || params.vocab < 2 || params.min_len < 1 ||
      params.max_len < params.min_len) {
    throw ConfigError("synth: bad translation generator parameters");
  }
  const Prng root(spec.seed);
  const int total = spec.n_in + spec.n_shifted;
  std::vector<TranslationRecord> records;
  records.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    const bool shifted = i >= spec.n_in;
    const Prng rec = root.fork(static_cast<std::uint64_t>(i));
    TranslationRecord r;
    r.id = make_id("nmt", i);
    r.tag = make_tag(shifted);

    Prng ref_rng = rec.fork(kReferenceStream);
    const int len = params.min_len +
                    static_cast<int>(ref_rng.next_index(
                      static_cast<std::size_t>(params.max_len - params.min_len + 1)));
    r.reference.reserve(static_cast<std::size_t>(len));
    for (int t = 0; t < len; ++t) {
      r.reference.push_back("w" + std::to_string(ref_rng.next_index(
                                    static_cast<std::size_t>(params.vocab))));
    }

    const double intensity =
      spec.shift_severity * (shifted ? 1.0 : params.in_domain_rate);
    bool used_drop = false;
    bool used_swap = false;
    bool used_sub = false;
    std::vector<double> quality(static_cast<std::size_t>(params.h), 0.0);
    std::vector<double> noise(static_cast<std::size_t>(params.h), 0.0);
    r.hypotheses.reserve(static_cast<std::size_t>(params.h));
    for (int h = 0; h < params.h; ++h) {
      Prng hyp_rng = rec.fork(kHypothesisStream, static_cast<std::uint64_t>(h));
      Tokens hyp = r.reference;
      const int ops = static_cast<int>(intensity) +
                      (hyp_rng.next_unit() < intensity - std::floor(intensity) ? 1 : 0);
      int applied = 0;
      for (int op = 0; op < ops && !hyp.empty(); ++op) {
        switch (hyp_rng.next_index(3)) {
          case 0: {  // drop
            hyp.erase(hyp.begin() + static_cast<std::ptrdiff_t>(hyp_rng.next_index(hyp.size())));
            used_drop = true;
            ++applied;
            break;
          }
          case 1: {  // swap adjacent
            if (hyp.size() >= 2) {
              const std::size_t p = hyp_rng.next_index(hyp.size() - 1);
              std::swap(hyp[p], hyp[p + 1]);
              used_swap = true;
              ++applied;
            }
            break;
          }
          default: {  // substitute
            hyp[hyp_rng.next_index(hyp.size())] =
              "w" + std::to_string(hyp_rng.next_index(static_cast<std::size_t>(params.vocab)));
            used_sub = true;
            ++applied;
            break;
          }
        }
      }
      quality[static_cast<std::size_t>(h)] = -static_cast<double>(applied);
      noise[static_cast<std::size_t>(h)] = hyp_rng.next_gaussian();
      r.hypotheses.push_back(std::move(hyp));
    }
    if (used_drop) r.tag.meta.push_back("anomaly:drop");
    if (used_swap) r.tag.meta.push_back("anomaly:swap");
    if (used_sub) r.tag.meta.push_back("anomaly:substitute");

    // Sharper weights on clean records, flatter as perturbation grows, so the
    // weight entropy tracks how degraded the request is.
    const double temperature = 0.5 * (1.0 + intensity);
    double top = -std::numeric_limits<double>::infinity();
    std::vector<double> logits(quality.size());
    for (std::size_t h = 0; h < logits.size(); ++h) {
      logits[h] = (quality[h] + 0.5 * noise[h]) / temperature;
      top = std::max(top, logits[h]);
    }
    double norm = 0.0;
    r.weights.resize(logits.size());
    for (std::size_t h = 0; h < logits.size(); ++h) {
      r.weights[h] = std::exp(logits[h] - top);
      norm += r.weights[h];
    }
    for (double & w : r.weights) {
      w /= norm;
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace uqeval
