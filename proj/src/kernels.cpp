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

#include "basts/kernels.h"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace basts::kernels {
namespace {

std::atomic<int> g_thread_override{0};

inline double At(const double* x, bool trans, int rows, int cols, int r, int c) {
  // x is stored as (rows x cols) when !trans, (cols x rows) otherwise.
  return trans ? x[static_cast<long>(c) * rows + r] : x[static_cast<long>(r) * cols + c];
}

// One output row. Shared by both kernels so they agree bit for bit.
inline void Row(bool ta, bool tb, int i, int m, int n, int k, const double* a,
                const double* b, double* c, bool accumulate) {
  double* crow = c + static_cast<long>(i) * n;
  if (!accumulate)
    for (int j = 0; j < n; ++j) crow[j] = 0.0;
  if (!tb) {
    for (int p = 0; p < k; ++p) {
      const double av = At(a, ta, m, k, i, p);
      const double* brow = b + static_cast<long>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  } else if (!ta) {
    const double* arow = a + static_cast<long>(i) * k;
    for (int j = 0; j < n; ++j) {
      const double* brow = b + static_cast<long>(j) * k;
      double s = 0.0;
      for (int p = 0; p < k; ++p) s += arow[p] * brow[p];
      crow[j] += s;
    }
  } else {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int p = 0; p < k; ++p) s += At(a, true, m, k, i, p) * b[static_cast<long>(j) * k + p];
      crow[j] += s;
    }
  }
}

}  // namespace

void GemmSerial(bool trans_a, bool trans_b, int m, int n, int k, const double* a,
                const double* b, double* c, bool accumulate) {
  for (int i = 0; i < m; ++i) Row(trans_a, trans_b, i, m, n, k, a, b, c, accumulate);
}

void GemmParallel(bool trans_a, bool trans_b, int m, int n, int k, const double* a,
                  const double* b, double* c, bool accumulate) {
#pragma omp parallel for schedule(static) num_threads(MaxThreads())
  for (int i = 0; i < m; ++i) Row(trans_a, trans_b, i, m, n, k, a, b, c, accumulate);
}

void Gemm(bool trans_a, bool trans_b, int m, int n, int k, const double* a,
          const double* b, double* c, bool accumulate) {
  const double flops = static_cast<double>(m) * n * k;
  if (m > 1 && flops >= kParallelFlops && !omp_in_parallel() && MaxThreads() > 1)
    GemmParallel(trans_a, trans_b, m, n, k, a, b, c, accumulate);
  else
    GemmSerial(trans_a, trans_b, m, n, k, a, b, c, accumulate);
}

int MaxThreads() {
  if (int o = g_thread_override.load(); o > 0) return o;
  static const int from_env = [] {
    const char* env = std::getenv("BASTS_THREADS");
    if (env != nullptr) {
      try {
        int v = std::stoi(env);
        if (v > 0) return v;
      } catch (const std::exception&) {
      }
    }
    return omp_get_max_threads();
  }();
  return from_env;
}

void SetMaxThreads(int n) { g_thread_override.store(n > 0 ? n : 0); }

}  // namespace basts::kernels
