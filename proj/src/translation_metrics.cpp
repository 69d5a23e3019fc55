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

#include "uqeval/translation_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace uqeval
{

namespace
{

const SentenceScoreFn & default_scorer()
{
  static const SentenceScoreFn fn = [](const Tokens & hyp, const Tokens & ref) {
    return sentence_gleu(hyp, ref);
  };
  return fn;
}

const SentenceScoreFn & scorer_or_default(const SentenceScoreFn & score)
{
  return score ? score : default_scorer();
}

void check_record(const TranslationRecord & record)
{
  if (record.hypotheses.size() != record.weights.size()) {
    throw ShapeError("record " + record.id + ": weights misaligned with hypotheses");
  }
  if (record.hypotheses.empty()) {
    throw ShapeError("record " + record.id + ": no hypotheses");
  }
}

}  // namespace

double sentence_gleu(const Tokens & hypothesis, const Tokens & reference, int max_order)
{
  if (reference.empty()) {
    throw EmptyReferenceError("sentence_gleu: empty reference");
  }
  if (max_order < 1) {
    throw ConfigError("sentence_gleu: max_order must be >= 1");
  }
  if (hypothesis.empty()) {
    return 0.0;
  }
  // Pooled clipped counts; the key length distinguishes the n-gram order.
  std::map<std::vector<std::string>, std::pair<long, long>> grams;
  long hyp_total = 0;
  long ref_total = 0;
  for (int n = 1; n <= max_order; ++n) {
    const std::size_t order = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + order <= hypothesis.size(); ++i) {
      ++grams[{hypothesis.begin() + i, hypothesis.begin() + i + order}].first;
      ++hyp_total;
    }
    for (std::size_t i = 0; i + order <= reference.size(); ++i) {
      ++grams[{reference.begin() + i, reference.begin() + i + order}].second;
      ++ref_total;
    }
  }
  long matched = 0;
  for (const auto & [gram, counts] : grams) {
    matched += std::min(counts.first, counts.second);
  }
  const double precision = static_cast<double>(matched) / static_cast<double>(hyp_total);
  const double recall = static_cast<double>(matched) / static_cast<double>(ref_total);
  return std::min(precision, recall);
}

double record_expected_score(const TranslationRecord & record, const SentenceScoreFn & score)
{
  check_record(record);
  const SentenceScoreFn & fn = scorer_or_default(score);
  double sum = 0.0;
  for (std::size_t h = 0; h < record.hypotheses.size(); ++h) {
    sum += record.weights[h] * fn(record.hypotheses[h], record.reference);
  }
  return sum;
}

double record_egleu_error(const TranslationRecord & record, const SentenceScoreFn & score)
{
  return 100.0 * (1.0 - record_expected_score(record, score));
}

double egleu(std::span<const TranslationRecord> records, const SentenceScoreFn & score)
{
  if (records.empty()) {
    throw EmptyDatasetError("egleu of an empty dataset");
  }
  double sum = 0.0;
  for (const TranslationRecord & r : records) {
    sum += record_expected_score(r, score);
  }
  return 100.0 * sum / static_cast<double>(records.size());
}

double max_gleu(std::span<const TranslationRecord> records, const SentenceScoreFn & score)
{
  if (records.empty()) {
    throw EmptyDatasetError("max_gleu of an empty dataset");
  }
  const SentenceScoreFn & fn = scorer_or_default(score);
  double sum = 0.0;
  for (const TranslationRecord & r : records) {
    check_record(r);
    double best = 0.0;
    for (const Tokens & hyp : r.hypotheses) {
      best = std::max(best, fn(hyp, r.reference));
    }
    sum += best;
  }
  return 100.0 * sum / static_cast<double>(records.size());
}

double egleu_error(std::span<const TranslationRecord> records, const SentenceScoreFn & score)
{
  return 100.0 - egleu(records, score);
}

double weight_entropy(const TranslationRecord & record)
{
  check_record(record);
  double h = 0.0;
  for (const double w : record.weights) {
    if (w > 0.0) {
      h -= w * std::log(w);
    }
  }
  return h;
}

}  // namespace uqeval
