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

#include "basts/metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "basts/errors.h"

namespace basts {
namespace {

Words Fold(const Words& w) {
  Words out = w;
  for (auto& s : out)
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::map<Words, int> NGrams(const Words& w, int n) {
  std::map<Words, int> counts;
  for (int i = 0; i + n <= static_cast<int>(w.size()); ++i)
    ++counts[Words(w.begin() + i, w.begin() + i + n)];
  return counts;
}

// (clipped matches, hypothesis n-gram count)
std::pair<long, long> Matches(const Words& hyp, const Words& ref, int n) {
  const auto h = NGrams(hyp, n);
  const auto r = NGrams(ref, n);
  long match = 0, total = 0;
  for (const auto& [g, c] : h) {
    total += c;
    if (auto it = r.find(g); it != r.end()) match += std::min(c, it->second);
  }
  return {match, total};
}

double Brevity(double hyp_len, double ref_len) {
  if (hyp_len <= 0) return 0.0;
  return std::min(1.0, std::exp(1.0 - ref_len / hyp_len));
}

double F1(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

int Lcs(const Words& a, const Words& b) {
  std::vector<int> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Best (matches, chunks) exact alignment by memoised search over hypothesis
// positions; the reference side is a 64-bit usage mask.
class Aligner {
 public:
  Aligner(const Words& hyp, const Words& ref) : hyp_(hyp), ref_(ref) {}

  std::pair<int, int> Best() { return Go(0, 0, -1); }

 private:
  struct Key {
    int i;
    std::uint64_t used;
    int prev;
    bool operator==(const Key& o) const { return i == o.i && used == o.used && prev == o.prev; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::uint64_t>()(k.used * 1000003ULL + static_cast<std::uint64_t>(k.i) * 131 +
                                        static_cast<std::uint64_t>(k.prev + 1));
    }
  };

  static bool Better(std::pair<int, int> a, std::pair<int, int> b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  }

  std::pair<int, int> Go(int i, std::uint64_t used, int prev) {
    if (i == static_cast<int>(hyp_.size())) return {0, 0};
    const Key key{i, used, prev};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::pair<int, int> best = Go(i + 1, used, -1);
    for (int j = 0; j < static_cast<int>(ref_.size()); ++j) {
      if ((used >> j) & 1U || ref_[static_cast<std::size_t>(j)] != hyp_[static_cast<std::size_t>(i)])
        continue;
      auto rest = Go(i + 1, used | (std::uint64_t{1} << j), j);
      rest.first += 1;
      rest.second += (prev >= 0 && j == prev + 1) ? 0 : 1;
      if (Better(rest, best)) best = rest;
    }
    memo_[key] = best;
    return best;
  }

  const Words& hyp_;
  const Words& ref_;
  std::unordered_map<Key, std::pair<int, int>, KeyHash> memo_;
};

// Left-to-right first-unused alignment for references beyond the mask width.
std::pair<int, int> GreedyAlign(const Words& hyp, const Words& ref) {
  std::vector<bool> used(ref.size(), false);
  int matches = 0, chunks = 0, prev = -2;
  for (const auto& w : hyp) {
    int pick = -1;
    if (prev >= -1 && prev + 1 < static_cast<int>(ref.size()) && !used[static_cast<std::size_t>(prev + 1)] &&
        ref[static_cast<std::size_t>(prev + 1)] == w)
      pick = prev + 1;
    for (std::size_t j = 0; pick < 0 && j < ref.size(); ++j)
      if (!used[j] && ref[j] == w) pick = static_cast<int>(j);
    if (pick < 0) {
      prev = -2;
      continue;
    }
    used[static_cast<std::size_t>(pick)] = true;
    ++matches;
    if (pick != prev + 1) ++chunks;
    prev = pick;
  }
  return {matches, chunks};
}

std::string Fixed2(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * score);
  return buf;
}

}  // namespace

double SentenceBleu(const Words& hyp_in, const Words& ref_in, int max_n, bool smoothing) {
  const Words hyp = Fold(hyp_in), ref = Fold(ref_in);
  if (hyp.empty()) return 0.0;
  std::vector<std::pair<long, long>> counts;
  bool some_zero = false;
  for (int n = 1; n <= max_n; ++n) {
    counts.push_back(Matches(hyp, ref, n));
    some_zero = some_zero || counts.back().first == 0;
  }
  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    auto [m, c] = counts[static_cast<std::size_t>(n - 1)];
    if (smoothing && some_zero && n >= 2) {
      ++m;
      ++c;
    }
    if (m == 0 || c == 0) return 0.0;
    log_sum += std::log(static_cast<double>(m) / static_cast<double>(c));
  }
  return Brevity(static_cast<double>(hyp.size()), static_cast<double>(ref.size())) *
         std::exp(log_sum / max_n);
}

double CorpusBleu(const std::vector<std::pair<Words, Words>>& pairs, int max_n) {
  if (pairs.empty()) throw EmptyInputError("corpus BLEU over zero pairs");
  std::vector<long> match(static_cast<std::size_t>(max_n), 0), total(static_cast<std::size_t>(max_n), 0);
  double hyp_len = 0, ref_len = 0;
  for (const auto& [h_in, r_in] : pairs) {
    const Words h = Fold(h_in), r = Fold(r_in);
    hyp_len += static_cast<double>(h.size());
    ref_len += static_cast<double>(r.size());
    for (int n = 1; n <= max_n; ++n) {
      auto [m, c] = Matches(h, r, n);
      match[static_cast<std::size_t>(n - 1)] += m;
      total[static_cast<std::size_t>(n - 1)] += c;
    }
  }
  double log_sum = 0.0;
  for (std::size_t n = 0; n < match.size(); ++n) {
    if (match[n] == 0 || total[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(match[n]) / static_cast<double>(total[n]));
  }
  return Brevity(hyp_len, ref_len) * std::exp(log_sum / max_n);
}

double RougeN(const Words& hyp_in, const Words& ref_in, int n) {
  const Words hyp = Fold(hyp_in), ref = Fold(ref_in);
  auto [overlap, hyp_total] = Matches(hyp, ref, n);
  const long ref_total = std::max(0L, static_cast<long>(ref.size()) - n + 1);
  if (hyp_total == 0 && ref_total == 0) return hyp == ref ? 1.0 : 0.0;
  if (hyp_total == 0 || ref_total == 0) return 0.0;
  return F1(static_cast<double>(overlap) / static_cast<double>(hyp_total),
            static_cast<double>(overlap) / static_cast<double>(ref_total));
}

double RougeL(const Words& hyp_in, const Words& ref_in) {
  const Words hyp = Fold(hyp_in), ref = Fold(ref_in);
  if (hyp.empty() && ref.empty()) return 1.0;
  if (hyp.empty() || ref.empty()) return 0.0;
  const double lcs = Lcs(hyp, ref);
  return F1(lcs / static_cast<double>(hyp.size()), lcs / static_cast<double>(ref.size()));
}

double MeteorLite(const Words& hyp_in, const Words& ref_in) {
  const Words hyp = Fold(hyp_in), ref = Fold(ref_in);
  if (hyp.empty() || ref.empty()) return hyp.empty() && ref.empty() ? 1.0 : 0.0;
  const auto [matches, chunks] =
      ref.size() <= 64 ? Aligner(hyp, ref).Best() : GreedyAlign(hyp, ref);
  if (matches == 0) return 0.0;
  const double p = static_cast<double>(matches) / static_cast<double>(hyp.size());
  const double r = static_cast<double>(matches) / static_cast<double>(ref.size());
  const double fmean = 10.0 * p * r / (r + 9.0 * p);
  const bool complete = chunks == 1 && matches == static_cast<int>(hyp.size()) &&
                        matches == static_cast<int>(ref.size());
  const double frag = static_cast<double>(chunks) / static_cast<double>(matches);
  const double penalty = complete ? 0.0 : 0.5 * frag * frag * frag;
  return fmean * (1.0 - penalty);
}

EvalReport Evaluate(const std::vector<Words>& hyps, const std::vector<Words>& refs,
                    bool bleu_smoothing) {
  if (hyps.size() != refs.size())
    throw Error("evaluation needs one hypothesis per reference (" + std::to_string(hyps.size()) +
                " vs " + std::to_string(refs.size()) + ")");
  if (hyps.empty()) throw EmptyInputError("nothing to evaluate");
  EvalReport r;
  r.count = hyps.size();
  std::vector<std::pair<Words, Words>> pairs;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    r.s_bleu += SentenceBleu(hyps[i], refs[i], 4, bleu_smoothing);
    r.meteor += MeteorLite(hyps[i], refs[i]);
    r.rouge1 += RougeN(hyps[i], refs[i], 1);
    r.rouge2 += RougeN(hyps[i], refs[i], 2);
    r.rougeL += RougeL(hyps[i], refs[i]);
    pairs.emplace_back(hyps[i], refs[i]);
  }
  const double n = static_cast<double>(hyps.size());
  r.s_bleu /= n;
  r.meteor /= n;
  r.rouge1 /= n;
  r.rouge2 /= n;
  r.rougeL /= n;
  r.c_bleu = CorpusBleu(pairs);
  return r;
}

std::string FormatReportTable(const EvalReport& r) {
  std::string out = "metric     score\n";
  auto line = [&](const char* name, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-9s %7s\n", name, Fixed2(v).c_str());
    out += buf;
  };
  line("S-BLEU", r.s_bleu);
  line("C-BLEU", r.c_bleu);
  line("METEOR", r.meteor);
  line("ROUGE-1", r.rouge1);
  line("ROUGE-2", r.rouge2);
  line("ROUGE-L", r.rougeL);
  out += "pairs     " + std::to_string(r.count) + "\n";
  return out;
}

std::string FormatReportJson(const EvalReport& r) {
  return "{\"count\": " + std::to_string(r.count) + ", \"s_bleu\": " + Fixed2(r.s_bleu) +
         ", \"c_bleu\": " + Fixed2(r.c_bleu) + ", \"meteor\": " + Fixed2(r.meteor) +
         ", \"rouge1_f\": " + Fixed2(r.rouge1) + ", \"rouge2_f\": " + Fixed2(r.rouge2) +
         ", \"rougeL_f\": " + Fixed2(r.rougeL) + "}";
}

}  // namespace basts
