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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "basts/errors.h"
#include "basts/metrics.h"
#include "doctest.h"

namespace basts {
namespace {

Words W(const std::string& s) {
  Words out;
  std::string cur;
  for (char c : s) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Words RandomWords(std::mt19937_64& rng, int min_len, int max_len, int vocab) {
  std::uniform_int_distribution<int> len(min_len, max_len), word(0, vocab - 1);
  Words w(static_cast<std::size_t>(len(rng)));
  for (auto& s : w) s = "t" + std::to_string(word(rng));
  return w;
}

// Exhaustive alignment search: every injective partial map from
// hypothesis positions to equal reference words.
std::pair<int, int> BruteAlign(const Words& h, const Words& r) {
  std::pair<int, int> best{0, 0};
  std::vector<int> map(h.size(), -1);
  std::vector<bool> used(r.size(), false);
  auto score = [&] {
    int m = 0, chunks = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (map[i] < 0) continue;
      ++m;
      if (!(i > 0 && map[i - 1] >= 0 && map[i] == map[i - 1] + 1)) ++chunks;
    }
    if (m > best.first || (m == best.first && chunks < best.second)) best = {m, chunks};
  };
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == h.size()) {
      score();
      return;
    }
    self(self, i + 1);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (used[j] || r[j] != h[i]) continue;
      used[j] = true;
      map[i] = static_cast<int>(j);
      self(self, i + 1);
      map[i] = -1;
      used[j] = false;
    }
  };
  rec(rec, 0);
  return best;
}

double MeteorFromAlignment(std::pair<int, int> a, std::size_t hl, std::size_t rl) {
  if (a.first == 0) return 0.0;
  const double p = static_cast<double>(a.first) / static_cast<double>(hl);
  const double r = static_cast<double>(a.first) / static_cast<double>(rl);
  const double f = 10 * p * r / (r + 9 * p);
  const bool whole = a.second == 1 && a.first == static_cast<int>(hl) && a.first == static_cast<int>(rl);
  const double frag = static_cast<double>(a.second) / a.first;
  return f * (1 - (whole ? 0.0 : 0.5 * frag * frag * frag));
}

TEST_CASE("identity scores one on every metric") {
  for (const char* s : {"a", "a b", "returns the number of idle connections", "x x x x x"}) {
    const Words w = W(s);
    CHECK(SentenceBleu(w, w) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(SentenceBleu(w, w, 4, false) == doctest::Approx(w.size() >= 4 ? 1.0 : 0.0));
    CHECK(CorpusBleu({{w, w}, {w, w}}) == doctest::Approx(w.size() >= 4 ? 1.0 : 0.0));
    CHECK(RougeN(w, w, 1) == 1.0);
    CHECK(RougeN(w, w, 2) == 1.0);
    CHECK(RougeL(w, w) == 1.0);
    CHECK(MeteorLite(w, w) == 1.0);
  }
}

TEST_CASE("sentence BLEU hand values") {
  CHECK(SentenceBleu(W("a b c d"), W("a b c e"), 4, false) == 0.0);
  // Smoothed: P = 3/4, (2+1)/(3+1), (1+1)/(2+1), (0+1)/(1+1).
  CHECK(SentenceBleu(W("a b c d"), W("a b c e")) ==
        doctest::Approx(std::pow(0.75 * 0.75 * (2.0 / 3) * 0.5, 0.25)).epsilon(1e-12));
  // Clipping: only one 'a' is creditable.
  CHECK(SentenceBleu(W("a a a"), W("a b"), 1, false) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  // Brevity: hyp 2 words of a 4-word reference.
  CHECK(SentenceBleu(W("a b"), W("a b c d"), 2, false) ==
        doctest::Approx(std::exp(1.0 - 2.0)).epsilon(1e-12));
  CHECK(SentenceBleu({}, W("a")) == 0.0);
  CHECK(SentenceBleu(W("x y z"), W("a b c")) == 0.0);
}

TEST_CASE("corpus BLEU pooling") {
  const std::vector<std::pair<Words, Words>> pairs{{W("a b c"), W("a b d")},
                                                   {W("x y"), W("x y z w")}};
  // Pooled: P1 = (2+2)/(3+2), P2 = (1+1)/(2+1); lengths 5 vs 7.
  CHECK(CorpusBleu(pairs, 2) ==
        doctest::Approx(std::exp(1.0 - 7.0 / 5.0) * std::sqrt(0.8 * 2.0 / 3.0)).epsilon(1e-12));
  const std::pair<Words, Words> one{W("the cat sat on a mat today"), W("the cat sat on the mat")};
  CHECK(CorpusBleu({one}) == doctest::Approx(SentenceBleu(one.first, one.second, 4, false)).epsilon(1e-12));
  CHECK(CorpusBleu(std::vector<std::pair<Words, Words>>(5, one)) ==
        doctest::Approx(CorpusBleu({one})).epsilon(1e-12));
  CHECK_THROWS_AS(CorpusBleu({}), EmptyInputError);
}

TEST_CASE("ROUGE hand values") {
  CHECK(RougeN(W("a b c"), W("a b d"), 1) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(RougeN(W("a b c"), W("a b d"), 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(RougeN(W("a b"), W("c d"), 1) == 0.0);
  CHECK(RougeN(W("a"), W("a"), 2) == 1.0);
  CHECK(RougeN(W("a"), W("b"), 2) == 0.0);
  CHECK(RougeL(W("a b c"), W("a c b")) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(RougeL({}, W("a b")) == 0.0);
  CHECK(RougeL(W("a b"), W("c d")) == 0.0);
  // LCS 3 of hyp 4 / ref 5.
  CHECK(RougeL(W("a x b c"), W("a b y c z")) ==
        doctest::Approx(2 * 0.75 * 0.6 / 1.35).epsilon(1e-12));
}

TEST_CASE("METEOR hand values") {
  const double f = 10 * 1.0 * (2.0 / 3) / ((2.0 / 3) + 9);
  CHECK(f == doctest::Approx(0.6897).epsilon(1e-4));
  CHECK(MeteorLite(W("the cat"), W("the cat sat")) ==
        doctest::Approx(f * (1 - 0.5 / 8)).epsilon(1e-12));
  CHECK(MeteorLite(W("a b"), W("c d")) == 0.0);
  // Two chunks of four matches.
  CHECK(MeteorLite(W("a b x a b"), W("a b a b")) ==
        doctest::Approx(8.0 / 8.2 * (1 - 0.5 / 8)).epsilon(1e-12));
  CHECK(MeteorLite({}, W("a")) == 0.0);
}

TEST_CASE("METEOR alignment matches exhaustive search") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 400; ++trial) {
    const Words h = RandomWords(rng, 1, 6, 3);
    const Words r = RandomWords(rng, 1, 6, 3);
    CHECK(MeteorLite(h, r) ==
          doctest::Approx(MeteorFromAlignment(BruteAlign(h, r), h.size(), r.size())).epsilon(1e-12));
  }
}

TEST_CASE("metrics are invariant under vocabulary relabeling") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const Words h = RandomWords(rng, 1, 8, 4), r = RandomWords(rng, 1, 8, 4);
    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    auto relabel = [&](Words w) {
      for (auto& s : w) s = "q" + std::to_string(perm[static_cast<std::size_t>(std::stoi(s.substr(1)))]);
      return w;
    };
    const Words h2 = relabel(h), r2 = relabel(r);
    CHECK(SentenceBleu(h, r) == SentenceBleu(h2, r2));
    CHECK(CorpusBleu({{h, r}}) == CorpusBleu({{h2, r2}}));
    CHECK(RougeN(h, r, 1) == RougeN(h2, r2, 1));
    CHECK(RougeN(h, r, 2) == RougeN(h2, r2, 2));
    CHECK(RougeL(h, r) == RougeL(h2, r2));
    CHECK(MeteorLite(h, r) == MeteorLite(h2, r2));
  }
}

TEST_CASE("perfect scores exactly on equality") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 500; ++trial) {
    const Words h = RandomWords(rng, 4, 9, 3);
    const Words r = trial % 5 == 0 ? h : RandomWords(rng, 4, 9, 3);
    const bool same = h == r;
    for (bool smooth : {true, false}) CHECK((SentenceBleu(h, r, 4, smooth) == doctest::Approx(1.0)) == same);
    CHECK((RougeL(h, r) == 1.0) == same);
    for (double s : {SentenceBleu(h, r), RougeN(h, r, 1), RougeN(h, r, 2), RougeL(h, r), MeteorLite(h, r)}) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("case folding") {
  CHECK(SentenceBleu(W("Close The Idle Connections"), W("close the idle connections")) ==
        doctest::Approx(1.0));
  CHECK(MeteorLite(W("A B"), W("a b")) == 1.0);
  CHECK(RougeL(W("A"), W("a")) == 1.0);
}

TEST_CASE("evaluation report") {
  const std::vector<Words> hyps{W("a b c d"), W("close idle connections")};
  const EvalReport same = Evaluate(hyps, hyps);
  CHECK(same.count == 2);
  CHECK(FormatReportJson(same) ==
        "{\"count\": 2, \"s_bleu\": 100.00, \"c_bleu\": 100.00, \"meteor\": 100.00, "
        "\"rouge1_f\": 100.00, \"rouge2_f\": 100.00, \"rougeL_f\": 100.00}");
  CHECK(FormatReportTable(same).find("S-BLEU     100.00") != std::string::npos);
  const EvalReport r = Evaluate({W("a b c")}, {W("a b d")});
  CHECK(r.rouge1 == doctest::Approx(2.0 / 3));
  CHECK(FormatReportJson(r).find("\"rouge1_f\": 66.67") != std::string::npos);
  CHECK_THROWS_AS(Evaluate({W("a")}, {}), Error);
  CHECK_THROWS_AS(Evaluate({}, {}), EmptyInputError);
}

}  // namespace
}  // namespace basts
