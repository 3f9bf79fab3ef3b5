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

// Serial vs OpenMP GEMM, plus one Tree-LSTM forest encode and one
// summarizer loss evaluation at desk scale.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "basts/kernels.h"
#include "basts/model.h"

namespace {

using namespace basts;

std::vector<double> Random(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

template <bool kParallel>
void BM_Gemm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const auto a = Random(static_cast<std::size_t>(n) * n, rng);
  const auto b = Random(static_cast<std::size_t>(n) * n, rng);
  std::vector<double> c(static_cast<std::size_t>(n) * n);
  for (auto _ : state) {
    if (kParallel)
      kernels::GemmParallel(false, false, n, n, n, a.data(), b.data(), c.data(), false);
    else
      kernels::GemmSerial(false, false, n, n, n, a.data(), b.data(), c.data(), false);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(n) * n * n);
  state.counters["threads"] = kernels::MaxThreads();
}
BENCHMARK(BM_Gemm<false>)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_Gemm<true>)->Arg(64)->Arg(128)->Arg(256);

IndexedTree Tree(int n, std::mt19937_64& rng) {
  IndexedTree t;
  t.labels.resize(static_cast<std::size_t>(n));
  t.children.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    t.labels[static_cast<std::size_t>(i)] = static_cast<int>(rng() % 40);
    if (i > 0) t.children[rng() % static_cast<std::size_t>(i)].push_back(i);
  }
  return t;
}

void BM_SummarizerLoss(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<std::string> doc;
  for (int i = 0; i < 60; ++i) doc.push_back("t" + std::to_string(i));
  BastsModel model(Vocab::Build({doc}, 1), 64);
  TransformerConfig tc;
  model.AddTransformer(Vocab::Build({doc}, 1), Vocab::Build({doc}, 1), tc);
  model.InitTree(rng);
  model.InitTransformer(rng);
  SummarizationExample ex;
  for (int i = 0; i < 60; ++i) ex.code_ids.push_back(7 + static_cast<int>(rng() % 60));
  for (int i = 0; i < 5; ++i) ex.trees.push_back(Tree(25, rng));
  ex.comment_ids = {kBosId, 8, 9, 10, 11, 12, 13, 14, kEosId};
  const bool backward = state.range(0) != 0;
  for (auto _ : state) {
    Tape tape(backward);
    Tensor loss = model.SummedLoss(tape, ex);
    if (backward) tape.backward(loss);
    benchmark::DoNotOptimize(loss.item());
  }
}
BENCHMARK(BM_SummarizerLoss)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
