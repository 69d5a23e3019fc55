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

// Brute-force reference implementations used by the unit and acceptance
// tests. Everything here is written from the metric definitions in the most
// literal way possible, shares no code with the library, and favours long
// double accumulation over speed. When a library routine and its oracle
// disagree, trust the oracle.

#ifndef UQEVAL_TESTS_ORACLES_HPP_
#define UQEVAL_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "uqeval/core.hpp"
#include "uqeval/retention.hpp"
#include "uqeval/rip.hpp"

namespace oracle
{

// ---------------------------------------------------------------------------
// displacement metrics

inline double ade(const uqeval::Trajectory & pred, const uqeval::Trajectory & truth)
{
  long double total = 0.0L;
  for (std::size_t t = 0; t < truth.states.size(); ++t) {
    const long double dx = pred.states[t].x - truth.states[t].x;
    const long double dy = pred.states[t].y - truth.states[t].y;
    total += std::sqrt(static_cast<double>(dx * dx + dy * dy));
  }
  return static_cast<double>(total / static_cast<long double>(truth.states.size()));
}

inline double fde(const uqeval::Trajectory & pred, const uqeval::Trajectory & truth)
{
  const std::size_t last = truth.states.size() - 1;
  const long double dx = pred.states[last].x - truth.states[last].x;
  const long double dy = pred.states[last].y - truth.states[last].y;
  return std::sqrt(static_cast<double>(dx * dx + dy * dy));
}

inline double min_disp(const std::vector<double> & per_prediction)
{
  double best = per_prediction[0];
  for (double v : per_prediction) best = std::min(best, v);
  return best;
}

inline double avg_disp(const std::vector<double> & per_prediction)
{
  long double total = 0.0L;
  for (double v : per_prediction) total += v;
  return static_cast<double>(total / static_cast<long double>(per_prediction.size()));
}

inline double top1_disp(
  const std::vector<double> & per_prediction, const std::vector<double> & confidences)
{
  std::size_t arg = 0;
  for (std::size_t i = 1; i < confidences.size(); ++i) {
    if (confidences[i] > confidences[arg]) arg = i;
  }
  return per_prediction[arg];
}

inline double weighted_disp(
  const std::vector<double> & per_prediction, const std::vector<double> & confidences)
{
  long double total = 0.0L;
  for (std::size_t i = 0; i < per_prediction.size(); ++i) {
    total += static_cast<long double>(confidences[i]) * per_prediction[i];
  }
  return static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// regression measures

inline double mean_of(const std::vector<double> & xs)
{
  long double total = 0.0L;
  for (double x : xs) total += x;
  return static_cast<double>(total / static_cast<long double>(xs.size()));
}

inline double mvar(const std::vector<uqeval::GaussianMember> & members)
{
  std::vector<double> vars;
  for (const auto & m : members) vars.push_back(m.variance);
  return mean_of(vars);
}

inline double varm(const std::vector<uqeval::GaussianMember> & members)
{
  std::vector<double> means;
  for (const auto & m : members) means.push_back(m.mean);
  const double mu = mean_of(means);
  long double total = 0.0L;
  for (double m : means) {
    total += (static_cast<long double>(m) - mu) * (static_cast<long double>(m) - mu);
  }
  return static_cast<double>(total / static_cast<long double>(means.size()));
}

inline double tvar(const std::vector<uqeval::GaussianMember> & members)
{
  return mvar(members) + varm(members);
}

inline double epkl(const std::vector<uqeval::GaussianMember> & members)
{
  const std::size_t k = members.size();
  if (k < 2) return 0.0;
  long double total = 0.0L;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double vp = std::max(members[i].variance, 1e-12);
      const double vq = std::max(members[j].variance, 1e-12);
      const double dm = members[i].mean - members[j].mean;
      total += 0.5 * (std::log(vq / vp) + (vp + dm * dm) / vq - 1.0);
    }
  }
  return static_cast<double>(total / static_cast<long double>(k * (k - 1)));
}

// ---------------------------------------------------------------------------
// GLEU

inline double gleu(const uqeval::Tokens & hyp, const uqeval::Tokens & ref, int max_order = 4)
{
  if (hyp.empty()) return 0.0;
  long long match_total = 0;
  long long hyp_total = 0;
  long long ref_total = 0;
  for (int order = 1; order <= max_order; ++order) {
    std::map<std::vector<std::string>, long long> hyp_counts;
    std::map<std::vector<std::string>, long long> ref_counts;
    for (std::size_t i = 0; i + order <= hyp.size(); ++i) {
      hyp_counts[std::vector<std::string>(hyp.begin() + i, hyp.begin() + i + order)] += 1;
    }
    for (std::size_t i = 0; i + order <= ref.size(); ++i) {
      ref_counts[std::vector<std::string>(ref.begin() + i, ref.begin() + i + order)] += 1;
    }
    for (const auto & [gram, count] : hyp_counts) {
      hyp_total += count;
      const auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) match_total += std::min(count, it->second);
    }
    for (const auto & [gram, count] : ref_counts) ref_total += count;
  }
  if (hyp_total == 0 || ref_total == 0) return 0.0;
  const double precision = static_cast<double>(match_total) / static_cast<double>(hyp_total);
  const double recall = static_cast<double>(match_total) / static_cast<double>(ref_total);
  return std::min(precision, recall);
}

inline double record_expected_gleu(const uqeval::TranslationRecord & record)
{
  long double total = 0.0L;
  for (std::size_t h = 0; h < record.hypotheses.size(); ++h) {
    total += static_cast<long double>(record.weights[h]) *
             gleu(record.hypotheses[h], record.reference);
  }
  return static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// bivariate Gaussian log density, via the explicit inverse

inline double logpdf(const uqeval::Point2 & s, const uqeval::GaussianStep & step)
{
  const long double a = step.cov.xx;
  const long double b = step.cov.xy;
  const long double c = step.cov.yy;
  const long double det = a * c - b * b;
  const long double dx = s.x - step.mean.x;
  const long double dy = s.y - step.mean.y;
  // inverse = 1/det * [c, -b; -b, a]
  const long double quad = (c * dx * dx - 2.0L * b * dx * dy + a * dy * dy) / det;
  const long double log2pi = std::log(2.0L * 3.14159265358979323846264338327950288L);
  return static_cast<double>(-log2pi - 0.5L * std::log(det) - 0.5L * quad);
}

inline double log_prob_trajectory(
  const std::vector<uqeval::GaussianStep> & steps, const uqeval::Trajectory & candidate)
{
  long double total = 0.0L;
  for (std::size_t t = 0; t < steps.size(); ++t) {
    total += logpdf(candidate.states[t], steps[t]);
  }
  return static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// retention, by rank counting: a sample is retained at level k iff fewer than
// k other samples are strictly more certain under the (uncertainty, id,
// position) order.

struct RetentionOracle
{
  std::vector<double> error_values;  // curve value at retention k/N, k = 0..N
  double error_auc = 0.0;
  std::vector<double> f1_values;
  double f1_auc = 0.0;
  double f1_at_95 = 0.0;
};

inline bool more_certain(
  const uqeval::ScoredSample & a, std::size_t ia, const uqeval::ScoredSample & b,
  std::size_t ib)
{
  return std::tie(a.uncertainty, a.id, ia) < std::tie(b.uncertainty, b.id, ib);
}

inline double trapezoid(const std::vector<double> & values, std::size_t n)
{
  long double area = 0.0L;
  for (std::size_t k = 1; k <= n; ++k) {
    area += 0.5L * (static_cast<long double>(values[k - 1]) + values[k]) /
            static_cast<long double>(n);
  }
  return static_cast<double>(area);
}

inline RetentionOracle retention(
  const std::vector<uqeval::ScoredSample> & samples, double threshold)
{
  const std::size_t n = samples.size();
  RetentionOracle result;
  std::vector<std::size_t> rank(n, 0);  // how many samples are strictly more certain
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && more_certain(samples[j], j, samples[i], i)) rank[i] += 1;
    }
  }
  std::size_t acceptable = 0;
  for (const auto & s : samples) {
    if (s.error < threshold) acceptable += 1;
  }
  result.error_values.assign(n + 1, 0.0);
  result.f1_values.assign(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) {
    long double error_sum = 0.0L;
    std::size_t true_positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (rank[i] < k) {
        error_sum += samples[i].error;
        if (samples[i].error < threshold) true_positive += 1;
      }
    }
    result.error_values[k] = static_cast<double>(error_sum / static_cast<long double>(n));
    const std::size_t denom = k + acceptable;
    result.f1_values[k] =
      denom == 0 ? 0.0 : 2.0 * static_cast<double>(true_positive) / static_cast<double>(denom);
    if (k == 0) result.f1_values[k] = 0.0;
  }
  result.error_auc = trapezoid(result.error_values, n);
  result.f1_auc = trapezoid(result.f1_values, n);
  result.f1_at_95 = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    if (static_cast<double>(k) / static_cast<double>(n) >= 0.95 - 1e-12) {
      result.f1_at_95 = result.f1_values[k];
      break;
    }
  }
  return result;
}

// all-pairs ROC-AUC, ties scored one half
inline double roc_auc(const std::vector<uqeval::ScoredSample> & samples)
{
  long double wins = 0.0L;
  long long pairs = 0;
  for (const auto & s : samples) {
    if (s.tag.partition != uqeval::Partition::shifted) continue;
    for (const auto & t : samples) {
      if (t.tag.partition != uqeval::Partition::in_domain) continue;
      pairs += 1;
      if (s.uncertainty > t.uncertainty) {
        wins += 1.0L;
      } else if (s.uncertainty == t.uncertainty) {
        wins += 0.5L;
      }
    }
  }
  return static_cast<double>(wins / static_cast<long double>(pairs));
}

// ---------------------------------------------------------------------------
// the aggregation-and-selection half of the ensemble pipeline, step by step

inline double aggregate(const std::vector<double> & xs, uqeval::AggOperator op)
{
  if (op == uqeval::AggOperator::min) {
    double best = xs[0];
    for (double x : xs) best = std::min(best, x);
    return best;
  }
  long double mean = 0.0L;
  for (double x : xs) mean += x;
  mean /= static_cast<long double>(xs.size());
  if (op == uqeval::AggOperator::mean) return static_cast<double>(mean);
  long double var = 0.0L;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<long double>(xs.size());
  return static_cast<double>(mean - std::sqrt(static_cast<double>(var)));
}

struct RipOracle
{
  std::vector<double> per_trajectory;
  std::vector<std::size_t> selected;
  std::vector<double> confidences;
  double request_uncertainty = 0.0;
};

inline RipOracle rip(
  const std::vector<std::vector<double>> & logp, std::size_t d, uqeval::AggOperator traj_agg,
  uqeval::AggOperator req_agg)
{
  RipOracle result;
  for (const auto & row : logp) {
    result.per_trajectory.push_back(aggregate(row, traj_agg));
  }
  result.request_uncertainty = -aggregate(result.per_trajectory, req_agg);
  std::vector<bool> taken(result.per_trajectory.size(), false);
  for (std::size_t pick = 0; pick < d && pick < result.per_trajectory.size(); ++pick) {
    std::size_t best = result.per_trajectory.size();
    for (std::size_t g = 0; g < result.per_trajectory.size(); ++g) {
      if (taken[g]) continue;
      if (best == result.per_trajectory.size() ||
          result.per_trajectory[g] > result.per_trajectory[best]) {
        best = g;
      }
    }
    taken[best] = true;
    result.selected.push_back(best);
  }
  // plain softmax over the selected scores; long double keeps exp() honest
  long double denom = 0.0L;
  for (std::size_t g : result.selected) {
    denom += std::exp(static_cast<long double>(result.per_trajectory[g]));
  }
  for (std::size_t g : result.selected) {
    result.confidences.push_back(static_cast<double>(
      std::exp(static_cast<long double>(result.per_trajectory[g])) / denom));
  }
  return result;
}

}  // namespace oracle

#endif  // UQEVAL_TESTS_ORACLES_HPP_
