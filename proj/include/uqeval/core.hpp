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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace uqeval
{

/// Absolute tolerance for "weights sum to one" checks.
inline constexpr double kDistributionTol = 1e-9;

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Confidence or weight vector is not a valid distribution.
class DistributionError : public Error
{
public:
  using Error::Error;
};

/// Mismatched lengths / dimensions between related containers.
class ShapeError : public Error
{
public:
  using Error::Error;
};

/// A ground-truth validity precondition was violated.
class ValidityError : public Error
{
public:
  using Error::Error;
};

class NegativeVarianceError : public Error
{
public:
  using Error::Error;
};

class EmptyEnsembleError : public Error
{
public:
  using Error::Error;
};

class EmptyDatasetError : public Error
{
public:
  using Error::Error;
};

class EmptyInputError : public Error
{
public:
  using Error::Error;
};

class EmptyReferenceError : public Error
{
public:
  using Error::Error;
};

/// Shift-detection needs both in-domain and shifted samples.
class SingleClassError : public Error
{
public:
  using Error::Error;
};

class CovarianceError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

class ParseError : public Error
{
public:
  using Error::Error;
};

enum class Task { regression, trajectory, translation };

enum class Partition { in_domain, shifted };

/// Distributional-shift annotation carried by every record.  `meta` holds
/// free-form tags (maneuver family, injected anomaly kinds, ...).
struct ShiftTag
{
  Partition partition = Partition::in_domain;
  std::vector<std::string> meta;
};

struct Point2
{
  double x = 0.0;
  double y = 0.0;
};

/// A fixed-rate 2D state sequence with a per-step validity mask.
struct Trajectory
{
  std::vector<Point2> states;
  std::vector<bool> validity;  // same length as states

  Trajectory() = default;
  explicit Trajectory(std::vector<Point2> s)
  : states(std::move(s)), validity(states.size(), true)
  {
  }
  Trajectory(std::vector<Point2> s, std::vector<bool> v)
  : states(std::move(s)), validity(std::move(v))
  {
  }

  [[nodiscard]] std::size_t length() const { return states.size(); }

  [[nodiscard]] bool fully_valid() const
  {
    for (const bool b : validity) {
      if (!b) return false;
    }
    return validity.size() == states.size();
  }
};

/// One prediction request: a set of predicted trajectories with per-trajectory
/// confidences, a request-level uncertainty, and the observed future.
struct TrajectoryRecord
{
  std::string id;
  std::vector<Trajectory> predictions;
  std::vector<double> confidences;     // aligned with predictions, sums to 1
  double request_uncertainty = 0.0;    // larger = more uncertain
  Trajectory ground_truth;
  ShiftTag tag;
};

struct GaussianMember
{
  double mean = 0.0;
  double variance = 0.0;
};

/// Scalar regression request scored by an ensemble of Gaussian predictors.
struct RegressionRecord
{
  std::string id;
  std::vector<GaussianMember> members;
  double target = 0.0;
  ShiftTag tag;
};

using Tokens = std::vector<std::string>;

/// Weighted multi-hypothesis translation request.
struct TranslationRecord
{
  std::string id;
  std::vector<Tokens> hypotheses;
  std::vector<double> weights;  // aligned with hypotheses, strictly positive, sums to 1
  Tokens reference;
  ShiftTag tag;
};

/// Validation outcome for records that can be structurally sound yet not
/// evaluable (partially observed ground truth).
enum class RecordStatus { accepted, skip };

/// Accepts iff confidences form a distribution and every prediction matches the
/// ground-truth length.  A record whose ground truth is only partially valid is
/// flagged `skip`, not rejected.  Throws DistributionError / ShapeError.
RecordStatus validate_trajectory_record(const TrajectoryRecord & record);

/// Throws EmptyEnsembleError / NegativeVarianceError.
void validate_regression_record(const RegressionRecord & record);

/// Throws ShapeError / DistributionError / EmptyReferenceError.  Hypothesis
/// weights must be strictly positive; empty hypotheses are permitted.
void validate_translation_record(const TranslationRecord & record);

/// The single point where likelihood-style scores (larger = better) are turned
/// into uncertainties (larger = more uncertain).  Callers must not negate
/// again downstream.
constexpr double uncertainty_from_score(double score) { return -score; }

/// Runs `body(i)` for i in [0, n).  Iterations write to disjoint state; any
/// reduction over the results must stay sequential so that output is identical
/// for every thread count.  threads <= 1 runs inline.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> & body);

const char * to_string(Task task);
const char * to_string(Partition partition);
Task parse_task(const std::string & name);
Partition parse_partition(const std::string & name);

}  // namespace uqeval
