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

#include "basts/optimizer.h"

#include <cmath>

#include "basts/errors.h"

namespace basts {

Adam::Adam(ParamStore& store, AdamOptions options) : store_(store), options_(options) {
  if (!(options_.lr > 0.0)) throw ConfigError("learning rate must be positive");
}

void Adam::Step() {
  const auto& params = store_.params();
  while (m_.size() < params.size()) {
    const Matrix& v = params[m_.size()]->value;
    m_.emplace_back(v.rows, v.cols);
    v_.emplace_back(v.rows, v.cols);
  }
  ++t_;
  const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    if (!p.frozen) {
      double* m = m_[pi].data.data();
      double* v = v_[pi].data.data();
      for (std::size_t i = 0; i < p.value.data.size(); ++i) {
        const double g = p.grad.data[i];
        m[i] = options_.beta1 * m[i] + (1.0 - options_.beta1) * g;
        v[i] = options_.beta2 * v[i] + (1.0 - options_.beta2) * g * g;
        p.value.data[i] -= options_.lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + options_.eps);
      }
    }
    std::fill(p.grad.data.begin(), p.grad.data.end(), 0.0);
  }
}

}  // namespace basts
