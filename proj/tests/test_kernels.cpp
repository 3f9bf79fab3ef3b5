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

#include <random>
#include <tuple>
#include <vector>

#include "basts/kernels.h"
#include "doctest.h"

namespace basts {
namespace {

std::vector<double> Random(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

// Textbook triple loop; the oracle for every transpose combination.
std::vector<double> Naive(bool ta, bool tb, int m, int n, int k, const std::vector<double>& a,
                          const std::vector<double>& b) {
  std::vector<double> c(static_cast<std::size_t>(m) * n, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int p = 0; p < k; ++p) {
        const double av = ta ? a[static_cast<std::size_t>(p) * m + i] : a[static_cast<std::size_t>(i) * k + p];
        const double bv = tb ? b[static_cast<std::size_t>(j) * k + p] : b[static_cast<std::size_t>(p) * n + j];
        s += av * bv;
      }
      c[static_cast<std::size_t>(i) * n + j] = s;
    }
  return c;
}

TEST_CASE("gemm matches the naive product for all transposes") {
  std::mt19937_64 rng(11);
  for (auto [m, n, k] : {std::tuple{1, 1, 1}, {3, 5, 7}, {17, 4, 9}, {64, 33, 65}}) {
    for (bool ta : {false, true})
      for (bool tb : {false, true}) {
        auto a = Random(static_cast<std::size_t>(m) * k, rng);
        auto b = Random(static_cast<std::size_t>(k) * n, rng);
        auto want = Naive(ta, tb, m, n, k, a, b);
        std::vector<double> c(want.size(), 0.0);
        kernels::GemmSerial(ta, tb, m, n, k, a.data(), b.data(), c.data(), false);
        for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == doctest::Approx(want[i]).epsilon(1e-12));
        // Accumulation adds onto the existing contents.
        kernels::GemmSerial(ta, tb, m, n, k, a.data(), b.data(), c.data(), true);
        for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == doctest::Approx(2 * want[i]).epsilon(1e-12));
      }
  }
}

TEST_CASE("parallel gemm is bit-identical to serial") {
  std::mt19937_64 rng(12);
  for (int threads : {1, 2, 3, 4}) {
    kernels::SetMaxThreads(threads);
    for (auto [m, n, k] : {std::tuple{2, 3, 4}, {31, 17, 23}, {128, 64, 64}}) {
      for (bool ta : {false, true})
        for (bool tb : {false, true}) {
          auto a = Random(static_cast<std::size_t>(m) * k, rng);
          auto b = Random(static_cast<std::size_t>(k) * n, rng);
          std::vector<double> s(static_cast<std::size_t>(m) * n, 0.5), p = s, d = s;
          kernels::GemmSerial(ta, tb, m, n, k, a.data(), b.data(), s.data(), true);
          kernels::GemmParallel(ta, tb, m, n, k, a.data(), b.data(), p.data(), true);
          kernels::Gemm(ta, tb, m, n, k, a.data(), b.data(), d.data(), true);
          CHECK(s == p);
          CHECK(s == d);
        }
    }
  }
  kernels::SetMaxThreads(0);
}

TEST_CASE("thread cap") {
  kernels::SetMaxThreads(3);
  CHECK(kernels::MaxThreads() == 3);
  kernels::SetMaxThreads(0);
  CHECK(kernels::MaxThreads() >= 1);
}

}  // namespace
}  // namespace basts
