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

#include "uqeval/regression_metrics.hpp"

#include <cmath>

#include "uqeval/prng.hpp"

namespace uqeval
{

namespace
{

// Degenerate members (variance 0) are floored so pairwise KL stays finite.
constexpr double kVarianceFloor = 1e-12;

struct VarianceSplit
{
  double mvar = 0.0;
  double varm = 0.0;
};

VarianceSplit variance_split(const RegressionRecord & record)
{
  const std::size_t k = record.members.size();
  const double mean = ensemble_mean(record);
  VarianceSplit out;
  for (const GaussianMember & m : record.members) {
    out.mvar += m.variance;
    out.varm += (m.mean - mean) * (m.mean - mean);
  }
  out.mvar /= static_cast<double>(k);
  out.varm /= static_cast<double>(k);
  return out;
}

double kl_gaussian(const GaussianMember & p, const GaussianMember & q)
{
  const double vp = std::max(p.variance, kVarianceFloor);
  const double vq = std::max(q.variance, kVarianceFloor);
  const double dm = p.mean - q.mean;
  return 0.5 * (std::log(vq / vp) + (vp + dm * dm) / vq - 1.0);
}

double epkl(const RegressionRecord & record)
{
  const std::size_t k = record.members.size();
  if (k < 2) {
    return 0.0;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j) {
        sum += kl_gaussian(record.members[i], record.members[j]);
      }
    }
  }
  return sum / static_cast<double>(k * (k - 1));
}

}  // namespace

double ensemble_mean(const RegressionRecord & record)
{
  if (record.members.empty()) {
    throw EmptyEnsembleError("record " + record.id + ": no ensemble members");
  }
  double sum = 0.0;
  for (const GaussianMember & m : record.members) {
    sum += m.mean;
  }
  return sum / static_cast<double>(record.members.size());
}

double per_sample_mse(const RegressionRecord & record)
{
  const double err = ensemble_mean(record) - record.target;
  return err * err;
}

double rmse(std::span<const RegressionRecord> records)
{
  if (records.empty()) {
    throw EmptyDatasetError("rmse of an empty dataset");
  }
  double sum = 0.0;
  for (const RegressionRecord & r : records) {
    sum += per_sample_mse(r);
  }
  return std::sqrt(sum / static_cast<double>(records.size()));
}

double mae(std::span<const RegressionRecord> records)
{
  if (records.empty()) {
    throw EmptyDatasetError("mae of an empty dataset");
  }
  double sum = 0.0;
  for (const RegressionRecord & r : records) {
    sum += std::abs(ensemble_mean(r) - r.target);
  }
  return sum / static_cast<double>(records.size());
}

double uncertainty_measure(
  const RegressionRecord & record, UncertaintyMeasureKind kind, std::uint64_t seed)
{
  if (record.members.empty()) {
    throw EmptyEnsembleError("record " + record.id + ": no ensemble members");
  }
  switch (kind) {
    case UncertaintyMeasureKind::mvar:
      return variance_split(record).mvar;
    case UncertaintyMeasureKind::varm:
      return variance_split(record).varm;
    case UncertaintyMeasureKind::tvar: {
      const VarianceSplit s = variance_split(record);
      return s.mvar + s.varm;
    }
    case UncertaintyMeasureKind::epkl:
      return epkl(record);
    case UncertaintyMeasureKind::single_variance:
      return record.members.front().variance;
    case UncertaintyMeasureKind::random:
      return Prng(seed).fork(hash_str(record.id)).next_unit();
  }
  throw ConfigError("unknown uncertainty measure");
}

const char * to_string(UncertaintyMeasureKind kind)
{
  switch (kind) {
    case UncertaintyMeasureKind::mvar:
      return "mvar";
    case UncertaintyMeasureKind::varm:
      return "varm";
    case UncertaintyMeasureKind::tvar:
      return "tvar";
    case UncertaintyMeasureKind::epkl:
      return "epkl";
    case UncertaintyMeasureKind::single_variance:
      return "single_variance";
    case UncertaintyMeasureKind::random:
      return "random";
  }
  return "?";
}

UncertaintyMeasureKind parse_uncertainty_measure(const std::string & name)
{
  if (name == "mvar") return UncertaintyMeasureKind::mvar;
  if (name == "varm") return UncertaintyMeasureKind::varm;
  if (name == "tvar") return UncertaintyMeasureKind::tvar;
  if (name == "epkl") return UncertaintyMeasureKind::epkl;
  if (name == "single_variance") return UncertaintyMeasureKind::single_variance;
  if (name == "random") return UncertaintyMeasureKind::random;
  throw ConfigError("unknown uncertainty measure \"" + name + "\"");
}

}  // namespace uqeval
