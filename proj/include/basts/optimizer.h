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

#ifndef BASTS_OPTIMIZER_H_
#define BASTS_OPTIMIZER_H_

#include <vector>

#include "basts/tensor.h"

namespace basts {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction over every non-frozen parameter of a store.
// Moments are sized lazily, so parameters added after construction are
// picked up on the next step.
class Adam {
 public:
  Adam(ParamStore& store, AdamOptions options);

  // Applies the accumulated gradients, then zeroes them.
  void Step();
  long steps() const { return t_; }
  const AdamOptions& options() const { return options_; }

 private:
  ParamStore& store_;
  AdamOptions options_;
  long t_ = 0;
  std::vector<Matrix> m_, v_;
};

}  // namespace basts

#endif  // BASTS_OPTIMIZER_H_
