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

// Dense matrix kernels. Every kernel has a serial reference and an OpenMP
// variant that splits output rows across threads; both run the same
// per-row loop, so their results are bit-identical.

#ifndef BASTS_KERNELS_H_
#define BASTS_KERNELS_H_

namespace basts::kernels {

// C (m x n) = op(A) (m x k) * op(B) (k x n), optionally added into C.
// op(X) is X or its transpose; storage is row-major.
void GemmSerial(bool trans_a, bool trans_b, int m, int n, int k, const double* a,
                const double* b, double* c, bool accumulate);
void GemmParallel(bool trans_a, bool trans_b, int m, int n, int k, const double* a,
                  const double* b, double* c, bool accumulate);

// Picks the parallel kernel for large products when more than one thread
// is allowed and no parallel region is already active.
void Gemm(bool trans_a, bool trans_b, int m, int n, int k, const double* a,
          const double* b, double* c, bool accumulate);

// Multiply-add count above which Gemm goes parallel.
inline constexpr double kParallelFlops = 64.0 * 64.0 * 16.0;

// Thread cap: BASTS_THREADS if set and positive, else the OpenMP default.
int MaxThreads();
// Overrides the cap (0 restores the environment/default value).
void SetMaxThreads(int n);

}  // namespace basts::kernels

#endif  // BASTS_KERNELS_H_
