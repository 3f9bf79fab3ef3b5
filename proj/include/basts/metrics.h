// Copyright 2026 The BASTS Authors.
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

// Reference-based scores for generated comments. All functions lowercase
// their inputs first and return values in [0, 1].

#ifndef BASTS_METRICS_H_
#define BASTS_METRICS_H_

#include <string>
#include <utility>
#include <vector>

namespace basts {

using Words = std::vector<std::string>;

// Geometric mean of clipped n-gram precisions (n = 1..max_n) times the
// brevity penalty min(1, exp(1 - |ref| / |hyp|)). With smoothing, when
// some order has no match, every order n >= 2 gets one added to its match
// and total counts. An empty hypothesis scores 0.
double SentenceBleu(const Words& hyp, const Words& ref, int max_n = 4, bool smoothing = true);

// Counts pooled over the corpus before the precisions and brevity penalty
// are formed; unsmoothed.
double CorpusBleu(const std::vector<std::pair<Words, Words>>& pairs, int max_n = 4);

// F-score of clipped n-gram overlap. If neither side has an n-gram of
// this order the score is 1 for identical inputs and 0 otherwise.
double RougeN(const Words& hyp, const Words& ref, int n);

// F-score from the longest common subsequence over the sequence lengths.
double RougeL(const Words& hyp, const Words& ref);

// Exact-match METEOR: the unigram alignment with the most matches and,
// among those, the fewest chunks; F = 10PR / (R + 9P), penalty
// 0.5 (chunks / matches)^3. A hypothesis equal to its reference is one
// complete chunk and takes no penalty.
double MeteorLite(const Words& hyp, const Words& ref);

struct EvalReport {
  double s_bleu = 0.0;
  double c_bleu = 0.0;
  double meteor = 0.0;
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double rougeL = 0.0;
  std::size_t count = 0;
};

// Sentence-level metrics are averaged over the pairs. Throws
// EmptyInputError for zero pairs and Error for mismatched lengths.
EvalReport Evaluate(const std::vector<Words>& hyps, const std::vector<Words>& refs,
                    bool bleu_smoothing = true);

// Scores x100 with two decimals.
std::string FormatReportTable(const EvalReport& report);
std::string FormatReportJson(const EvalReport& report);

}  // namespace basts

#endif  // BASTS_METRICS_H_
