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

#include "uqeval/core.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace uqeval
{

namespace
{

void check_distribution(
  const std::vector<double> & w, bool strictly_positive, const std::string & what)
{
  double sum = 0.0;
  for (const double v : w) {
    if (!std::isfinite(v)) {
      throw DistributionError(what + " contains a non-finite entry");
    }
    if (strictly_positive ? v <= 0.0 : v < 0.0) {
      throw DistributionError(
        what + " entries must be " + (strictly_positive ? "> 0" : ">= 0"));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kDistributionTol) {
    throw DistributionError(
      what + " sums to " + std::to_string(sum) + ", expected 1 within 1e-9");
  }
}

}  // namespace

RecordStatus validate_trajectory_record(const TrajectoryRecord & record)
{
  if (record.predictions.empty()) {
    throw ShapeError("record " + record.id + ": no predicted trajectories");
  }
  if (record.predictions.size() != record.confidences.size()) {
    throw ShapeError(
      "record " + record.id + ": " + std::to_string(record.predictions.size()) +
      " predictions but " + std::to_string(record.confidences.size()) + " confidences");
  }
  const std::size_t horizon = record.ground_truth.length();
  if (horizon == 0) {
    throw ShapeError("record " + record.id + ": empty ground truth");
  }
  if (record.ground_truth.validity.size() != horizon) {
    throw ShapeError("record " + record.id + ": ground-truth validity mask length mismatch");
  }
  for (std::size_t i = 0; i < record.predictions.size(); ++i) {
    const Trajectory & p = record.predictions[i];
    if (p.length() != horizon) {
      throw ShapeError(
        "record " + record.id + ": prediction " + std::to_string(i) + " has " +
        std::to_string(p.length()) + " states, ground truth has " + std::to_string(horizon));
    }
    if (p.validity.size() != p.states.size()) {
      throw ShapeError(
        "record " + record.id + ": prediction " + std::to_string(i) +
        " validity mask length mismatch");
    }
  }
  check_distribution(record.confidences, false, "record " + record.id + ": confidences");
  if (!std::isfinite(record.request_uncertainty)) {
    throw ValidityError("record " + record.id + ": non-finite request_uncertainty");
  }
  // Partially observed futures are not an error; the caller must drop them.
  if (!record.ground_truth.fully_valid()) {
    return RecordStatus::skip;
  }
  return RecordStatus::accepted;
}

void validate_regression_record(const RegressionRecord & record)
{
  if (record.members.empty()) {
    throw EmptyEnsembleError("record " + record.id + ": no ensemble members");
  }
  for (std::size_t k = 0; k < record.members.size(); ++k) {
    const GaussianMember & m = record.members[k];
    if (!std::isfinite(m.mean) || !std::isfinite(m.variance)) {
      throw ValidityError(
        "record " + record.id + ": member " + std::to_string(k) + " is non-finite");
    }
    if (m.variance < 0.0) {
      throw NegativeVarianceError(
        "record " + record.id + ": member " + std::to_string(k) + " has variance " +
        std::to_string(m.variance));
    }
  }
  if (!std::isfinite(record.target)) {
    throw ValidityError("record " + record.id + ": non-finite target");
  }
}

void validate_translation_record(const TranslationRecord & record)
{
  if (record.hypotheses.empty()) {
    throw ShapeError("record " + record.id + ": no hypotheses");
  }
  if (record.hypotheses.size() != record.weights.size()) {
    throw ShapeError(
      "record " + record.id + ": " + std::to_string(record.hypotheses.size()) +
      " hypotheses but " + std::to_string(record.weights.size()) + " weights");
  }
  if (record.reference.empty()) {
    throw EmptyReferenceError("record " + record.id + ": empty reference");
  }
  check_distribution(record.weights, true, "record " + record.id + ": weights");
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> & body)
{
  if (n == 0) {
    return;
  }
  if (threads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
  const unsigned workers = static_cast<unsigned>(
    std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::mutex err_mutex;
  std::exception_ptr first_error;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      // Contiguous index blocks; each index is touched exactly once.
      const std::size_t lo = n * w / workers;
      const std::size_t hi = n * (w + 1) / workers;
      try {
        for (std::size_t i = lo; i < hi; ++i) {
          body(i);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread & t : pool) {
    t.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

const char * to_string(Task task)
{
  switch (task) {
    case Task::regression:
      return "regression";
    case Task::trajectory:
      return "trajectory";
    case Task::translation:
      return "translation";
  }
  return "?";
}

const char * to_string(Partition partition)
{
  return partition == Partition::in_domain ? "in_domain" : "shifted";
}

Task parse_task(const std::string & name)
{
  if (name == "regression") return Task::regression;
  if (name == "trajectory") return Task::trajectory;
  if (name == "translation") return Task::translation;
  throw ParseError("unknown task \"" + name + "\"");
}

Partition parse_partition(const std::string & name)
{
  if (name == "in_domain") return Partition::in_domain;
  if (name == "shifted") return Partition::shifted;
  throw ParseError("unknown partition \"" + name + "\"");
}

}  // namespace uqeval
