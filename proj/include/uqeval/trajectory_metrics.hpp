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

#include <string>

#include "uqeval/core.hpp"

namespace uqeval
{

enum class DisplacementKind { ade, fde };

enum class AggregationKind { min, avg };

/// Average displacement error: mean Euclidean distance over the horizon.
/// Throws ShapeError on length mismatch, ValidityError if the ground truth is
/// not fully valid.
double ade(const Trajectory & prediction, const Trajectory & truth);

/// Final displacement error: Euclidean distance at the last step.
double fde(const Trajectory & prediction, const Trajectory & truth);

double displacement(const Trajectory & prediction, const Trajectory & truth, DisplacementKind kind);

/// min / mean over the per-trajectory displacements of a record.
double agg_displacement(const TrajectoryRecord & record, AggregationKind agg, DisplacementKind kind);

/// Displacement of the most-confident prediction.  Confidence ties resolve to
/// the lowest index.
double top1_displacement(const TrajectoryRecord & record, DisplacementKind kind);

/// Confidence-weighted displacement over all predictions.
double weighted_displacement(const TrajectoryRecord & record, DisplacementKind kind);

const char * to_string(DisplacementKind kind);
const char * to_string(AggregationKind agg);

}  // namespace uqeval
