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

#include <functional>
#include <span>

#include "uqeval/core.hpp"

namespace uqeval
{

/// Sentence-level match score on [0, 1]; hypothesis first, reference second.
using SentenceScoreFn = std::function<double(const Tokens &, const Tokens &)>;

/// Sentence GLEU: clipped n-gram matches pooled over orders 1..max_order, then
/// min(precision, recall).  Sentences shorter than max_order contribute only
/// the orders they have.  Empty hypothesis scores 0; empty reference throws
/// EmptyReferenceError.  Returns a value in [0, 1].
double sentence_gleu(const Tokens & hypothesis, const Tokens & reference, int max_order = 4);

/// Weight-expected sentence score of one record, on [0, 1].
double record_expected_score(const TranslationRecord & record, const SentenceScoreFn & score = {});

/// 100 * (1 - expected score) for one record, on [0, 100].
double record_egleu_error(const TranslationRecord & record, const SentenceScoreFn & score = {});

/// Expected GLEU over the dataset, reported on the 0..100 scale.
double egleu(std::span<const TranslationRecord> records, const SentenceScoreFn & score = {});

/// Best-hypothesis GLEU over the dataset, on the 0..100 scale.
double max_gleu(std::span<const TranslationRecord> records, const SentenceScoreFn & score = {});

/// 100 - egleu.
double egleu_error(std::span<const TranslationRecord> records, const SentenceScoreFn & score = {});

/// Shannon entropy of the hypothesis weights, in nats.  Serves as the
/// per-record uncertainty for retention analysis: a flat distribution over
/// hypotheses reads as an uncertain request.
double weight_entropy(const TranslationRecord & record);

}  // namespace uqeval
