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

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "uqeval/io.hpp"
#include "uqeval/prng.hpp"
#include "uqeval/regression_metrics.hpp"
#include "uqeval/synth.hpp"
#include "uqeval/trajectory_metrics.hpp"
#include "uqeval/translation_metrics.hpp"

using namespace uqeval;

namespace
{

SynthSpec spec_of(Task task, int n_in, int n_shifted, double severity, std::uint64_t seed)
{
  SynthSpec spec;
  spec.task = task;
  spec.n_in = n_in;
  spec.n_shifted = n_shifted;
  spec.shift_severity = severity;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("generation is deterministic in the seed, byte for byte")
{
  for (Task task : {Task::regression, Task::trajectory, Task::translation}) {
    const SynthSpec spec = spec_of(task, 6, 6, 2.0, 99);
    Dataset a;
    a.task = task;
    Dataset b;
    b.task = task;
    switch (task) {
      case Task::regression:
        a.regression = gen_regression(spec);
        b.regression = gen_regression(spec);
        break;
      case Task::trajectory:
        a.trajectory = gen_trajectory_records(spec, {}, 1);
        b.trajectory = gen_trajectory_records(spec, {}, 4);  // threads must not matter
        break;
      case Task::translation:
        a.translation = gen_translation(spec);
        b.translation = gen_translation(spec);
        break;
    }
    CHECK(to_jsonl(a) == to_jsonl(b));

    // and a different seed gives different data
    SynthSpec other = spec;
    other.seed = 100;
    Dataset c;
    c.task = task;
    switch (task) {
      case Task::regression: c.regression = gen_regression(other); break;
      case Task::trajectory: c.trajectory = gen_trajectory_records(other); break;
      case Task::translation: c.translation = gen_translation(other); break;
    }
    CHECK(to_jsonl(a) != to_jsonl(c));
  }
}

TEST_CASE("every generated record passes validation with the declared partition split")
{
  SUBCASE("regression")
  {
    const auto records = gen_regression(spec_of(Task::regression, 30, 20, 4.0, 1));
    REQUIRE(records.size() == 50);
    int in_count = 0;
    std::set<std::string> ids;
    for (const auto & r : records) {
      CHECK_NOTHROW(validate_regression_record(r));
      ids.insert(r.id);
      if (r.tag.partition == Partition::in_domain) in_count += 1;
    }
    CHECK(in_count == 30);
    CHECK(ids.size() == records.size());
  }
  SUBCASE("trajectory")
  {
    const auto records = gen_trajectory_records(spec_of(Task::trajectory, 8, 8, 3.0, 2));
    REQUIRE(records.size() == 16);
    for (const auto & r : records) {
      CHECK(validate_trajectory_record(r) == RecordStatus::accepted);
      CHECK(r.predictions.size() == 5);  // d
      CHECK(r.ground_truth.states.size() == static_cast<std::size_t>(kHorizon));
      CHECK(std::isfinite(r.request_uncertainty));
    }
  }
  SUBCASE("translation")
  {
    const auto records = gen_translation(spec_of(Task::translation, 25, 25, 2.0, 3));
    REQUIRE(records.size() == 50);
    for (const auto & r : records) {
      CHECK_NOTHROW(validate_translation_record(r));
      CHECK(r.hypotheses.size() == 5);
    }
  }
}

TEST_CASE("kinematic rollouts follow the closed-form motion")
{
  SUBCASE("constant velocity")
  {
    SceneParams params;
    params.kind = SceneKind::constant_velocity;
    params.start = {1.0, 2.0};
    params.velocity = {3.0, -1.0};
    const auto path = kinematic_rollout(params);
    REQUIRE(path.size() == static_cast<std::size_t>(kHorizon));
    for (std::size_t t = 0; t < path.size(); ++t) {
      const double dt = kStepSeconds * static_cast<double>(t + 1);
      CHECK(path[t].x == doctest::Approx(1.0 + 3.0 * dt).epsilon(1e-12));
      CHECK(path[t].y == doctest::Approx(2.0 - 1.0 * dt).epsilon(1e-12));
    }
  }
  SUBCASE("constant turn keeps the speed and bends the heading")
  {
    SceneParams params;
    params.kind = SceneKind::constant_turn;
    params.start = {0.0, 0.0};
    params.velocity = {5.0, 0.0};
    params.turn_rate = 0.3;
    const auto path = kinematic_rollout(params);
    // successive chord lengths are constant for a constant-rate arc
    std::vector<double> chords;
    Point2 prev = params.start;
    for (const Point2 & p : path) {
      chords.push_back(std::hypot(p.x - prev.x, p.y - prev.y));
      prev = p;
    }
    for (double c : chords) {
      CHECK(c == doctest::Approx(chords.front()).epsilon(1e-9));
    }
    // and the path actually curves
    CHECK(std::abs(path.back().y) > 1.0);
  }
  SUBCASE("stopping clamps at the stop time")
  {
    SceneParams params;
    params.kind = SceneKind::stopping;
    params.start = {0.0, 0.0};
    params.velocity = {4.0, 0.0};
    params.decel = 2.0;  // stops after 2 seconds, half the horizon
    const auto path = kinematic_rollout(params);
    const double stop_x = 4.0 * 2.0 - 0.5 * 2.0 * 4.0;  // v t - a t^2 / 2
    CHECK(path.back().x == doctest::Approx(stop_x).epsilon(1e-12));
    CHECK(path[static_cast<std::size_t>(kHorizon) - 2].x ==
          doctest::Approx(stop_x).epsilon(1e-12));
    CHECK(path.front().x < stop_x);
    for (const Point2 & p : path) {
      CHECK(p.y == doctest::Approx(0.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("zero process noise pins the ground truth to the maneuver rollout")
{
  TrajectorySynthParams params;
  params.process_noise = 0.0;
  const auto scenes = gen_trajectory_scenes(spec_of(Task::trajectory, 6, 0, 0.0, 5), params);
  REQUIRE(scenes.size() == 6);
  for (const auto & scene : scenes) {
    REQUIRE(!scene.true_modes.empty());
    // the ground truth must coincide with one of the true maneuver modes
    double best = 1e18;
    for (const auto & mode : scene.true_modes) {
      double worst_step = 0.0;
      for (std::size_t t = 0; t < mode.size(); ++t) {
        worst_step = std::max(
          worst_step, std::hypot(
                        scene.ground_truth.states[t].x - mode[t].x,
                        scene.ground_truth.states[t].y - mode[t].y));
      }
      best = std::min(best, worst_step);
    }
    CHECK(best <= 1e-9);
  }
}

TEST_CASE("scene structure: members, candidates, and maneuver tags")
{
  const auto scenes = gen_trajectory_scenes(spec_of(Task::trajectory, 10, 10, 2.0, 6));
  REQUIRE(scenes.size() == 20);
  std::set<std::string> kinds;
  for (const auto & scene : scenes) {
    CHECK(scene.members.size() == 5);
    CHECK(scene.candidates.size() == 50);
    for (const auto & candidate : scene.candidates) {
      CHECK(candidate.states.size() == static_cast<std::size_t>(kHorizon));
    }
    bool found = false;
    for (const auto & tag : scene.tag.meta) {
      if (tag.rfind("maneuver:", 0) == 0) {
        kinds.insert(tag);
        found = true;
      }
    }
    CHECK(found);
  }
  CHECK(kinds.size() > 1);  // the kind mix actually varies
}

TEST_CASE("in-domain candidates cover the fork maneuvers")
{
  // at least one sampled candidate must land near each true mode, otherwise
  // the min-over-candidates displacement loses its meaning
  const auto scenes = gen_trajectory_scenes(spec_of(Task::trajectory, 40, 0, 0.0, 7));
  for (const auto & scene : scenes) {
    for (const auto & mode : scene.true_modes) {
      const Trajectory mode_path{std::vector<Point2>(mode.begin(), mode.end())};
      double best = 1e18;
      for (const auto & candidate : scene.candidates) {
        best = std::min(best, ade(candidate, mode_path));
      }
      CHECK(best < 0.5);
    }
  }
}

TEST_CASE("severity widens shifted regression disagreement but not reported variance")
{
  const auto calm = gen_regression(spec_of(Task::regression, 0, 400, 0.0, 8));
  const auto rough = gen_regression(spec_of(Task::regression, 0, 400, 5.0, 8));
  double calm_varm = 0.0;
  double rough_varm = 0.0;
  double calm_mvar = 0.0;
  double rough_mvar = 0.0;
  for (std::size_t i = 0; i < calm.size(); ++i) {
    calm_varm += uncertainty_measure(calm[i], UncertaintyMeasureKind::varm);
    rough_varm += uncertainty_measure(rough[i], UncertaintyMeasureKind::varm);
    calm_mvar += uncertainty_measure(calm[i], UncertaintyMeasureKind::mvar);
    rough_mvar += uncertainty_measure(rough[i], UncertaintyMeasureKind::mvar);
  }
  CHECK(rough_varm > 2.0 * calm_varm);  // disagreement grows a lot
  CHECK(std::abs(rough_mvar - calm_mvar) < 0.12 * calm_mvar);  // reported variance does not
}

TEST_CASE("zero severity makes partitions statistically interchangeable")
{
  const auto records = gen_regression(spec_of(Task::regression, 300, 300, 0.0, 9));
  double in_err = 0.0;
  double sh_err = 0.0;
  for (const auto & r : records) {
    const double err = std::abs(ensemble_mean(r) - r.target);
    (r.tag.partition == Partition::in_domain ? in_err : sh_err) += err;
  }
  in_err /= 300.0;
  sh_err /= 300.0;
  CHECK(std::abs(in_err - sh_err) < 0.2 * std::max(in_err, sh_err));
}

TEST_CASE("translation anomalies appear on shifted records and flatten the weights")
{
  const auto records = gen_translation(spec_of(Task::translation, 60, 60, 3.0, 10));
  double in_entropy = 0.0;
  double sh_entropy = 0.0;
  int in_anomalies = 0;
  int sh_anomalies = 0;
  const std::set<std::string> known = {
    "anomaly:drop", "anomaly:swap", "anomaly:substitute"};
  for (const auto & r : records) {
    int anomalies = 0;
    for (const auto & tag : r.tag.meta) {
      if (tag.rfind("anomaly:", 0) == 0) {
        CHECK(known.count(tag) == 1);
        anomalies += 1;
      }
    }
    if (r.tag.partition == Partition::in_domain) {
      in_entropy += weight_entropy(r);
      in_anomalies += anomalies;
    } else {
      sh_entropy += weight_entropy(r);
      sh_anomalies += anomalies;
    }
  }
  CHECK(sh_anomalies > in_anomalies);
  CHECK(sh_entropy / 60.0 > in_entropy / 60.0);

  // heavier perturbation must show up as lower corpus quality
  std::vector<TranslationRecord> in_records;
  std::vector<TranslationRecord> sh_records;
  for (const auto & r : records) {
    (r.tag.partition == Partition::in_domain ? in_records : sh_records).push_back(r);
  }
  CHECK(egleu(sh_records) < egleu(in_records));
}

TEST_CASE("egleu decreases monotonically with severity")
{
  double previous = 101.0;
  for (double severity : {0.0, 1.0, 2.0}) {
    const auto records = gen_translation(spec_of(Task::translation, 0, 200, severity, 11));
    const double score = egleu(records);
    CHECK(score < previous);
    previous = score;
  }
}

TEST_CASE("record ids follow the documented pattern")
{
  const auto reg = gen_regression(spec_of(Task::regression, 2, 1, 0.0, 12));
  CHECK(reg[0].id == "reg-00000");
  CHECK(reg[2].id == "reg-00002");
  const auto nmt = gen_translation(spec_of(Task::translation, 1, 1, 0.0, 12));
  CHECK(nmt[1].id == "nmt-00001");
  const auto traj = gen_trajectory_records(spec_of(Task::trajectory, 1, 1, 0.0, 12));
  CHECK(traj[0].id == "traj-00000");
}

TEST_CASE("analytic model sampling respects the mode set")
{
  std::vector<Point2> mode_a = {{0.0, 0.0}, {1.0, 0.0}};
  std::vector<Point2> mode_b = {{0.0, 0.0}, {0.0, 1.0}};
  std::vector<Cov2> covs(2, Cov2{1e-8, 0.0, 1e-8});
  const AnalyticGaussianModel model({mode_a, mode_b}, covs);
  Prng rng(13);
  bool saw_a = false;
  bool saw_b = false;
  for (int i = 0; i < 64; ++i) {
    const Trajectory draw = model.sample(rng);
    REQUIRE(draw.states.size() == 2);
    if (std::abs(draw.states[1].x - 1.0) < 0.01) saw_a = true;
    if (std::abs(draw.states[1].y - 1.0) < 0.01) saw_b = true;
  }
  CHECK(saw_a);
  CHECK(saw_b);

  // covariance rows must match the horizon
  CHECK_THROWS_AS(
    AnalyticGaussianModel({mode_a}, std::vector<Cov2>(1, Cov2{1.0, 0.0, 1.0})), ShapeError);
}
