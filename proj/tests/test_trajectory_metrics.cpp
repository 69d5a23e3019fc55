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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "uqeval/prng.hpp"
#include "uqeval/trajectory_metrics.hpp"

using namespace uqeval;

namespace
{

Trajectory straight(double x0, double y0, double dx, double dy, std::size_t n)
{
  std::vector<Point2> states;
  for (std::size_t t = 0; t < n; ++t) {
    states.push_back({x0 + dx * static_cast<double>(t), y0 + dy * static_cast<double>(t)});
  }
  return Trajectory(std::move(states));
}

Trajectory random_trajectory(Prng & rng, std::size_t n)
{
  std::vector<Point2> states;
  for (std::size_t t = 0; t < n; ++t) {
    states.push_back({rng.next_uniform(-20.0, 20.0), rng.next_uniform(-20.0, 20.0)});
  }
  return Trajectory(std::move(states));
}

TrajectoryRecord record_with(
  std::vector<Trajectory> predictions, std::vector<double> confidences, Trajectory truth)
{
  TrajectoryRecord record;
  record.id = "traj-x";
  record.predictions = std::move(predictions);
  record.confidences = std::move(confidences);
  record.ground_truth = std::move(truth);
  return record;
}

}  // namespace

TEST_CASE("hand-checked displacement values")
{
  const Trajectory truth({{0.0, 0.0}, {0.0, 0.0}});
  const Trajectory pred({{1.0, 0.0}, {2.0, 0.0}});
  CHECK(ade(pred, truth) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(fde(pred, truth) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(fde(Trajectory({{3.0, 4.0}}), Trajectory({{0.0, 0.0}})) ==
        doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("displacement shape and validity errors")
{
  const Trajectory t2({{0.0, 0.0}, {1.0, 1.0}});
  CHECK_THROWS_AS(ade(Trajectory({{0.0, 0.0}}), t2), ShapeError);
  CHECK_THROWS_AS(ade(Trajectory(), Trajectory()), ShapeError);
  Trajectory masked({{0.0, 0.0}, {1.0, 1.0}}, {true, false});
  CHECK_THROWS_AS(ade(t2, masked), ValidityError);
}

TEST_CASE("aggregated displacement over the prediction set")
{
  const Trajectory truth({{0.0, 0.0}});
  auto record = record_with(
    {Trajectory({{2.0, 0.0}}), Trajectory({{0.5, 0.0}}), Trajectory({{1.0, 0.0}})},
    {0.2, 0.5, 0.3}, truth);

  CHECK(agg_displacement(record, AggregationKind::min, DisplacementKind::ade) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(agg_displacement(record, AggregationKind::avg, DisplacementKind::ade) ==
        doctest::Approx(7.0 / 6.0).epsilon(1e-15));
  CHECK(top1_displacement(record, DisplacementKind::ade) == doctest::Approx(0.5).epsilon(1e-15));

  SUBCASE("top1 keeps the lowest index on confidence ties")
  {
    record.confidences = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    CHECK(top1_displacement(record, DisplacementKind::ade) ==
          doctest::Approx(2.0).epsilon(1e-15));
  }
}

TEST_CASE("weighted displacement")
{
  const Trajectory truth({{0.0, 0.0}});
  const auto record = record_with(
    {Trajectory({{1.0, 0.0}}), Trajectory({{3.0, 0.0}})}, {0.75, 0.25}, truth);
  CHECK(weighted_displacement(record, DisplacementKind::ade) ==
        doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("single-step trajectories make ade equal fde")
{
  Prng rng(100);
  for (int trial = 0; trial < 50; ++trial) {
    const Trajectory truth = random_trajectory(rng, 1);
    const Trajectory pred = random_trajectory(rng, 1);
    CHECK(ade(pred, truth) == fde(pred, truth));
  }
}

TEST_CASE("displacements are invariant under rigid translation")
{
  Prng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.next_index(30);
    const Trajectory truth = random_trajectory(rng, n);
    const Trajectory pred = random_trajectory(rng, n);
    const double ox = rng.next_uniform(-100.0, 100.0);
    const double oy = rng.next_uniform(-100.0, 100.0);
    Trajectory truth_shift = truth;
    Trajectory pred_shift = pred;
    for (std::size_t t = 0; t < n; ++t) {
      truth_shift.states[t].x += ox;
      truth_shift.states[t].y += oy;
      pred_shift.states[t].x += ox;
      pred_shift.states[t].y += oy;
    }
    CHECK(ade(pred_shift, truth_shift) == doctest::Approx(ade(pred, truth)).epsilon(1e-9));
    CHECK(fde(pred_shift, truth_shift) == doctest::Approx(fde(pred, truth)).epsilon(1e-9));
  }
}

TEST_CASE("aggregation order relations hold on random records")
{
  Prng rng(102);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.next_index(20);
    const std::size_t k = 1 + rng.next_index(6);
    const Trajectory truth = random_trajectory(rng, n);
    std::vector<Trajectory> predictions;
    std::vector<double> raw(k);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      predictions.push_back(random_trajectory(rng, n));
      raw[i] = 0.05 + rng.next_unit();
      total += raw[i];
    }
    for (double & w : raw) w /= total;
    const auto record = record_with(std::move(predictions), std::move(raw), truth);

    for (DisplacementKind kind : {DisplacementKind::ade, DisplacementKind::fde}) {
      const double lo = agg_displacement(record, AggregationKind::min, kind);
      const double av = agg_displacement(record, AggregationKind::avg, kind);
      const double wt = weighted_displacement(record, kind);
      const double t1 = top1_displacement(record, kind);
      CHECK(lo <= av + 1e-12);
      CHECK(lo <= wt + 1e-12);
      CHECK(lo <= t1 + 1e-12);
      // the weighted displacement is a convex combination
      double hi = lo;
      for (std::size_t i = 0; i < record.predictions.size(); ++i) {
        hi = std::max(hi, displacement(record.predictions[i], truth, kind));
      }
      CHECK(wt <= hi + 1e-12);
    }
  }
}

TEST_CASE("uniform confidences make weighted equal average")
{
  Prng rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.next_index(15);
    const std::size_t k = 1 + rng.next_index(7);
    const Trajectory truth = random_trajectory(rng, n);
    std::vector<Trajectory> predictions;
    for (std::size_t i = 0; i < k; ++i) predictions.push_back(random_trajectory(rng, n));
    const auto record = record_with(
      std::move(predictions), std::vector<double>(k, 1.0 / static_cast<double>(k)), truth);
    for (DisplacementKind kind : {DisplacementKind::ade, DisplacementKind::fde}) {
      CHECK(weighted_displacement(record, kind) ==
            doctest::Approx(agg_displacement(record, AggregationKind::avg, kind))
              .epsilon(1e-12));
    }
  }
}

TEST_CASE("displacement metrics match the oracle on random records")
{
  Prng rng(104);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.next_index(25);
    const std::size_t k = 1 + rng.next_index(6);
    const Trajectory truth = random_trajectory(rng, n);
    std::vector<Trajectory> predictions;
    std::vector<double> weights(k);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      predictions.push_back(random_trajectory(rng, n));
      weights[i] = 0.01 + rng.next_unit();
      total += weights[i];
    }
    for (double & w : weights) w /= total;
    const auto record = record_with(predictions, weights, truth);

    std::vector<double> per_ade;
    std::vector<double> per_fde;
    for (const auto & p : predictions) {
      per_ade.push_back(oracle::ade(p, truth));
      per_fde.push_back(oracle::fde(p, truth));
    }
    CHECK(agg_displacement(record, AggregationKind::min, DisplacementKind::ade) ==
          doctest::Approx(oracle::min_disp(per_ade)).epsilon(1e-12));
    CHECK(agg_displacement(record, AggregationKind::avg, DisplacementKind::fde) ==
          doctest::Approx(oracle::avg_disp(per_fde)).epsilon(1e-12));
    CHECK(top1_displacement(record, DisplacementKind::ade) ==
          doctest::Approx(oracle::top1_disp(per_ade, weights)).epsilon(1e-12));
    CHECK(weighted_displacement(record, DisplacementKind::fde) ==
          doctest::Approx(oracle::weighted_disp(per_fde, weights)).epsilon(1e-12));
  }
}
