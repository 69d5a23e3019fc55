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

#include "uqeval/core.hpp"

namespace uqeval
{

/// Ensemble uncertainty decompositions for Gaussian regression ensembles.
///
///   mvar             mean of member variances (data uncertainty)
///   varm             variance of member means (knowledge uncertainty)
///   tvar             mvar + varm (total uncertainty)
///   epkl             mean pairwise KL divergence between members
///   single_variance  member 0's predicted variance (single-model baseline)
///   random           seed-deterministic uniform draw (control)
enum class UncertaintyMeasureKind { mvar, varm, tvar, epkl, single_variance, random };

/// Mean of the member means.
double ensemble_mean(const RegressionRecord & record);

/// Squared error of the ensemble mean against the target.
double per_sample_mse(const RegressionRecord & record);

double rmse(std::span<const RegressionRecord> records);
double mae(std::span<const RegressionRecord> records);

/// Scalar uncertainty for one record; larger = more uncertain.  `seed` only
/// matters for the `random` measure, which hashes it with the record id so the
/// draw is independent of dataset order.
double uncertainty_measure(
  const RegressionRecord & record, UncertaintyMeasureKind kind, std::uint64_t seed = 0);

const char * to_string(UncertaintyMeasureKind kind);
UncertaintyMeasureKind parse_uncertainty_measure(const std::string & name);

}  // namespace uqeval
