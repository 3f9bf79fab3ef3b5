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

#include "basts/tensor.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "basts/errors.h"
#include "basts/kernels.h"

namespace basts {
namespace {

std::string Shapes(const Matrix& a, const Matrix& b) {
  return a.ShapeString() + " vs " + b.ShapeString();
}

void AddInto(Matrix& dst, const Matrix& src, double s = 1.0) {
  for (std::size_t i = 0; i < dst.data.size(); ++i) dst.data[i] += s * src.data[i];
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

// ---------------------------------------------------------------------------
// Matrix, ParamStore, Mask

Matrix::Matrix(int r, int c, double fill)
    : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {
  if (r < 0 || c < 0) throw ShapeError("negative matrix shape");
}

Matrix Matrix::FromRows(const std::vector<std::vector<double>>& rows) {
  Matrix m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int r = 0; r < m.rows; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != m.cols)
      throw ShapeError("ragged rows");
    std::copy(rows[static_cast<std::size_t>(r)].begin(), rows[static_cast<std::size_t>(r)].end(),
              m.row(r));
  }
  return m;
}

std::string Matrix::ShapeString() const {
  return "[" + std::to_string(rows) + "x" + std::to_string(cols) + "]";
}

Parameter& ParamStore::Add(const std::string& name, int rows, int cols) {
  if (by_name_.count(name)) throw Error("duplicate parameter " + name);
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Matrix(rows, cols);
  p->grad = Matrix(rows, cols);
  params_.push_back(std::move(p));
  by_name_[name] = params_.back().get();
  return *params_.back();
}

Parameter* ParamStore::Find(const std::string& name) {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

const Parameter* ParamStore::Find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

Parameter& ParamStore::Get(const std::string& name) {
  Parameter* p = Find(name);
  if (p == nullptr) throw Error("unknown parameter " + name);
  return *p;
}

std::size_t ParamStore::NumValues() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

void ParamStore::ZeroGrad() {
  for (auto& p : params_) std::fill(p->grad.data.begin(), p->grad.data.end(), 0.0);
}

void ParamStore::InitUniform(Parameter& p, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& v : p.value.data) v = dist(rng);
}

void ParamStore::InitXavier(Parameter& p, std::mt19937_64& rng) {
  InitUniform(p, std::sqrt(6.0 / (p.value.rows + p.value.cols)), rng);
}

void AccumulateGrads(const GradBuffer& grads, double scale) {
  for (const auto& [p, g] : grads) AddInto(p->grad, g, scale);
}

Mask Mask::Causal(int n) {
  Mask m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c) m.set(r, c);
  return m;
}

Mask Mask::KeyPadding(int rows, int cols, int valid) {
  Mask m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = valid; c < cols; ++c) m.set(r, c);
  return m;
}

const Matrix& Tensor::value() const {
  if (tape_ == nullptr) throw GraphError("empty tensor handle");
  return tape_->value(id_);
}

double Tensor::item() const {
  const Matrix& v = value();
  if (v.rows != 1 || v.cols != 1) throw ShapeError("item() on " + v.ShapeString());
  return v.data[0];
}

// ---------------------------------------------------------------------------
// Tape plumbing

Tensor Tape::Push(Matrix value, std::vector<Tensor> inputs, std::function<void()> backward) {
  Node n;
  n.value = std::move(value);
  for (const auto& t : inputs) n.requires_grad = n.requires_grad || Needs(t);
  if (record_ && n.requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Tensor(this, static_cast<int>(nodes_.size()) - 1);
}

Matrix& Tape::G(Tensor t) {
  Node& n = N(t);
  if (n.grad.data.empty() && !n.value.data.empty()) n.grad = Matrix(n.value.rows, n.value.cols);
  if (n.grad.rows != n.value.rows) n.grad = Matrix(n.value.rows, n.value.cols);
  return n.grad;
}

void Tape::Own(Tensor t, const char* op) const {
  if (t.tape_ != this) throw GraphError(std::string(op) + ": tensor belongs to another tape");
}

Tensor Tape::constant(Matrix m) {
  Node n;
  n.value = std::move(m);
  nodes_.push_back(std::move(n));
  return Tensor(this, static_cast<int>(nodes_.size()) - 1);
}

Tensor Tape::variable(Matrix m) {
  Node n;
  n.value = std::move(m);
  n.requires_grad = record_;
  nodes_.push_back(std::move(n));
  return Tensor(this, static_cast<int>(nodes_.size()) - 1);
}

Tensor Tape::param(Parameter& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return Tensor(this, it->second);
  Node n;
  n.value = p.value;
  n.requires_grad = record_ && !p.frozen;
  n.param = &p;
  nodes_.push_back(std::move(n));
  const int id = static_cast<int>(nodes_.size()) - 1;
  param_nodes_[&p] = id;
  return Tensor(this, id);
}

void Tape::backward(Tensor loss) {
  Own(loss, "backward");
  if (done_) throw GraphError("backward already ran on this tape");
  const Matrix& v = loss.value();
  if (v.rows != 1 || v.cols != 1) throw GraphError("loss must be 1x1, got " + v.ShapeString());
  done_ = true;
  if (!Needs(loss)) return;
  G(loss).data[0] = 1.0;
  for (int id = loss.id_; id >= 0; --id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.backward && !n.grad.data.empty()) n.backward();
  }
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    Node& n = nodes_[id];
    if (n.param != nullptr && n.requires_grad && !n.grad.data.empty())
      param_grads_.emplace_back(n.param, n.grad);
  }
}

Matrix Tape::grad(Tensor t) const {
  Own(t, "grad");
  const Node& n = nodes_[static_cast<std::size_t>(t.id_)];
  if (n.grad.data.empty()) return Matrix(n.value.rows, n.value.cols);
  return n.grad;
}

// ---------------------------------------------------------------------------
// Linear algebra

Tensor Tape::matmul(Tensor a, Tensor b) {
  Own(a, "matmul");
  Own(b, "matmul");
  const Matrix& x = a.value();
  const Matrix& y = b.value();
  if (x.cols != y.rows) throw ShapeError("matmul: " + Shapes(x, y));
  const int m = x.rows, k = x.cols, n = y.cols;
  Matrix out(m, n);
  kernels::Gemm(false, false, m, n, k, x.data.data(), y.data.data(), out.data.data(), false);
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a, b}, [this, a, b, o, m, n, k] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    if (Needs(a))  // dA += dC B^T
      kernels::Gemm(false, true, m, k, n, g.data.data(), N(b).value.data.data(),
                    G(a).data.data(), true);
    if (Needs(b))  // dB += A^T dC
      kernels::Gemm(true, false, k, n, m, N(a).value.data.data(), g.data.data(),
                    G(b).data.data(), true);
  });
}

Tensor Tape::matmul_nt(Tensor a, Tensor b) {
  Own(a, "matmul_nt");
  Own(b, "matmul_nt");
  const Matrix& x = a.value();
  const Matrix& y = b.value();
  if (x.cols != y.cols) throw ShapeError("matmul_nt: " + Shapes(x, y));
  const int m = x.rows, k = x.cols, n = y.rows;
  Matrix out(m, n);
  kernels::Gemm(false, true, m, n, k, x.data.data(), y.data.data(), out.data.data(), false);
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a, b}, [this, a, b, o, m, n, k] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    if (Needs(a))  // dA += dC B
      kernels::Gemm(false, false, m, k, n, g.data.data(), N(b).value.data.data(),
                    G(a).data.data(), true);
    if (Needs(b))  // dB += dC^T A
      kernels::Gemm(true, false, n, k, m, g.data.data(), N(a).value.data.data(),
                    G(b).data.data(), true);
  });
}

Tensor Tape::transpose(Tensor a) {
  Own(a, "transpose");
  const Matrix& x = a.value();
  Matrix out(x.cols, x.rows);
  for (int r = 0; r < x.rows; ++r)
    for (int c = 0; c < x.cols; ++c) out(c, r) = x(r, c);
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a}, [this, a, o] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    Matrix& ga = G(a);
    for (int r = 0; r < ga.rows; ++r)
      for (int c = 0; c < ga.cols; ++c) ga(r, c) += g(c, r);
  });
}

// ---------------------------------------------------------------------------
// Elementwise

Tensor Tape::add(Tensor a, Tensor b) {
  Own(a, "add");
  Own(b, "add");
  const Matrix& x = a.value();
  const Matrix& y = b.value();
  if (x.rows != y.rows || x.cols != y.cols) throw ShapeError("add: " + Shapes(x, y));
  Matrix out = x;
  AddInto(out, y);
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a, b}, [this, a, b, o] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    if (Needs(a)) AddInto(G(a), g);
    if (Needs(b)) AddInto(G(b), g);
  });
}

Tensor Tape::sub(Tensor a, Tensor b) {
  Own(a, "sub");
  Own(b, "sub");
  const Matrix& x = a.value();
  const Matrix& y = b.value();
  if (x.rows != y.rows || x.cols != y.cols) throw ShapeError("sub: " + Shapes(x, y));
  Matrix out = x;
  AddInto(out, y, -1.0);
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a, b}, [this, a, b, o] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    if (Needs(a)) AddInto(G(a), g);
    if (Needs(b)) AddInto(G(b), g, -1.0);
  });
}

Tensor Tape::mul(Tensor a, Tensor b) {
  Own(a, "mul");
  Own(b, "mul");
  const Matrix& x = a.value();
  const Matrix& y = b.value();
  if (x.rows != y.rows || x.cols != y.cols) throw ShapeError("mul: " + Shapes(x, y));
  Matrix out = x;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= y.data[i];
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a, b}, [this, a, b, o] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    if (Needs(a)) {
      Matrix& ga = G(a);
      const Matrix& y = N(b).value;
      for (std::size_t i = 0; i < g.data.size(); ++i) ga.data[i] += g.data[i] * y.data[i];
    }
    if (Needs(b)) {
      Matrix& gb = G(b);
      const Matrix& x = N(a).value;
      for (std::size_t i = 0; i < g.data.size(); ++i) gb.data[i] += g.data[i] * x.data[i];
    }
  });
}

Tensor Tape::add_rowwise(Tensor a, Tensor b) {
  Own(a, "add_rowwise");
  Own(b, "add_rowwise");
  const Matrix& x = a.value();
  const Matrix& y = b.value();
  if (y.rows != 1 || y.cols != x.cols) throw ShapeError("add_rowwise: " + Shapes(x, y));
  Matrix out = x;
  for (int r = 0; r < out.rows; ++r)
    for (int c = 0; c < out.cols; ++c) out(r, c) += y.data[static_cast<std::size_t>(c)];
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a, b}, [this, a, b, o] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    if (Needs(a)) AddInto(G(a), g);
    if (Needs(b)) {
      Matrix& gb = G(b);
      for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c) gb.data[static_cast<std::size_t>(c)] += g(r, c);
    }
  });
}

Tensor Tape::scale(Tensor a, double s) {
  Own(a, "scale");
  Matrix out = a.value();
  for (double& v : out.data) v *= s;
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a}, [this, a, o, s] {
    AddInto(G(a), nodes_[static_cast<std::size_t>(o)].grad, s);
  });
}

Tensor Tape::add_scalar(Tensor a, double s) {
  Own(a, "add_scalar");
  Matrix out = a.value();
  for (double& v : out.data) v += s;
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a}, [this, a, o] {
    AddInto(G(a), nodes_[static_cast<std::size_t>(o)].grad);
  });
}

Tensor Tape::sigmoid(Tensor a) {
  Own(a, "sigmoid");
  Matrix out = a.value();
  for (double& v : out.data) v = Sigmoid(v);
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a}, [this, a, o] {
    const Node& n = nodes_[static_cast<std::size_t>(o)];
    Matrix& ga = G(a);
    for (std::size_t i = 0; i < ga.data.size(); ++i) {
      const double y = n.value.data[i];
      ga.data[i] += n.grad.data[i] * y * (1.0 - y);
    }
  });
}

Tensor Tape::tanh(Tensor a) {
  Own(a, "tanh");
  Matrix out = a.value();
  for (double& v : out.data) v = std::tanh(v);
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a}, [this, a, o] {
    const Node& n = nodes_[static_cast<std::size_t>(o)];
    Matrix& ga = G(a);
    for (std::size_t i = 0; i < ga.data.size(); ++i) {
      const double y = n.value.data[i];
      ga.data[i] += n.grad.data[i] * (1.0 - y * y);
    }
  });
}

Tensor Tape::relu(Tensor a) {
  Own(a, "relu");
  Matrix out = a.value();
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a}, [this, a, o] {
    const Node& n = nodes_[static_cast<std::size_t>(o)];
    Matrix& ga = G(a);
    const Matrix& x = N(a).value;
    for (std::size_t i = 0; i < ga.data.size(); ++i)
      if (x.data[i] > 0.0) ga.data[i] += n.grad.data[i];
  });
}

Tensor Tape::log(Tensor a, double floor) {
  Own(a, "log");
  Matrix out = a.value();
  for (double& v : out.data) v = std::log(std::max(v, floor));
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a}, [this, a, o, floor] {
    const Node& n = nodes_[static_cast<std::size_t>(o)];
    Matrix& ga = G(a);
    const Matrix& x = N(a).value;
    for (std::size_t i = 0; i < ga.data.size(); ++i)
      if (x.data[i] > floor) ga.data[i] += n.grad.data[i] / x.data[i];
  });
}

// ---------------------------------------------------------------------------
// Softmax and losses

Tensor Tape::softmax_rows(Tensor a, const Mask* mask) {
  Own(a, "softmax_rows");
  const Matrix& x = a.value();
  if (mask != nullptr && (mask->rows != x.rows || mask->cols != x.cols))
    throw ShapeError("softmax mask " + std::to_string(mask->rows) + "x" +
                     std::to_string(mask->cols) + " vs " + x.ShapeString());
  Matrix out(x.rows, x.cols);
  for (int r = 0; r < x.rows; ++r) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < x.cols; ++c)
      if (mask == nullptr || !mask->at(r, c)) mx = std::max(mx, x(r, c));
    if (mx == -std::numeric_limits<double>::infinity())
      throw MaskError("softmax row " + std::to_string(r) + " has every position masked");
    double sum = 0.0;
    for (int c = 0; c < x.cols; ++c) {
      const double e = (mask != nullptr && mask->at(r, c)) ? 0.0 : std::exp(x(r, c) - mx);
      out(r, c) = e;
      sum += e;
    }
    for (int c = 0; c < x.cols; ++c) out(r, c) /= sum;
  }
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a}, [this, a, o] {
    const Node& n = nodes_[static_cast<std::size_t>(o)];
    Matrix& ga = G(a);
    for (int r = 0; r < n.value.rows; ++r) {
      double dot = 0.0;
      for (int c = 0; c < n.value.cols; ++c) dot += n.grad(r, c) * n.value(r, c);
      for (int c = 0; c < n.value.cols; ++c)
        ga(r, c) += n.value(r, c) * (n.grad(r, c) - dot);
    }
  });
}

Tensor Tape::cross_entropy_rows(Tensor logits, const std::vector<int>& target) {
  Own(logits, "cross_entropy_rows");
  const Matrix& x = logits.value();
  if (static_cast<int>(target.size()) != x.rows)
    throw ShapeError("cross_entropy_rows: " + std::to_string(target.size()) + " targets for " +
                     x.ShapeString());
  Matrix prob(x.rows, x.cols);
  double loss = 0.0;
  for (int r = 0; r < x.rows; ++r) {
    const int t = target[static_cast<std::size_t>(r)];
    if (t >= x.cols) throw ShapeError("cross_entropy_rows: target out of range");
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < x.cols; ++c) mx = std::max(mx, x(r, c));
    double sum = 0.0;
    for (int c = 0; c < x.cols; ++c) sum += std::exp(x(r, c) - mx);
    const double lse = mx + std::log(sum);
    for (int c = 0; c < x.cols; ++c) prob(r, c) = std::exp(x(r, c) - lse);
    if (t >= 0) loss += lse - x(r, t);
  }
  const int o = static_cast<int>(nodes_.size());
  return Push(Matrix(1, 1, loss), {logits},
              [this, logits, o, target, prob = std::move(prob)] {
                const double g = nodes_[static_cast<std::size_t>(o)].grad.data[0];
                Matrix& gl = G(logits);
                for (int r = 0; r < prob.rows; ++r) {
                  const int t = target[static_cast<std::size_t>(r)];
                  if (t < 0) continue;
                  for (int c = 0; c < prob.cols; ++c) gl(r, c) += g * prob(r, c);
                  gl(r, t) -= g;
                }
              });
}

Tensor Tape::layer_norm_rows(Tensor a, Tensor gamma, Tensor beta, double eps) {
  Own(a, "layer_norm_rows");
  Own(gamma, "layer_norm_rows");
  Own(beta, "layer_norm_rows");
  const Matrix& x = a.value();
  const Matrix& gm = gamma.value();
  const Matrix& bt = beta.value();
  if (gm.rows != 1 || gm.cols != x.cols || bt.rows != 1 || bt.cols != x.cols)
    throw ShapeError("layer_norm_rows: " + Shapes(x, gm) + " / " + bt.ShapeString());
  const int rows = x.rows, cols = x.cols;
  Matrix xhat(rows, cols), out(rows, cols);
  std::vector<double> inv_std(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r) {
    double mean = 0.0;
    for (int c = 0; c < cols; ++c) mean += x(r, c);
    mean /= cols;
    double var = 0.0;
    for (int c = 0; c < cols; ++c) var += (x(r, c) - mean) * (x(r, c) - mean);
    var /= cols;
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std[static_cast<std::size_t>(r)] = is;
    for (int c = 0; c < cols; ++c) {
      xhat(r, c) = (x(r, c) - mean) * is;
      out(r, c) = xhat(r, c) * gm.data[static_cast<std::size_t>(c)] +
                  bt.data[static_cast<std::size_t>(c)];
    }
  }
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a, gamma, beta},
              [this, a, gamma, beta, o, xhat = std::move(xhat), inv_std = std::move(inv_std)] {
                const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
                const Matrix& gm = N(gamma).value;
                const int rows = g.rows, cols = g.cols;
                if (Needs(gamma)) {
                  Matrix& gg = G(gamma);
                  for (int r = 0; r < rows; ++r)
                    for (int c = 0; c < cols; ++c) gg.data[static_cast<std::size_t>(c)] += g(r, c) * xhat(r, c);
                }
                if (Needs(beta)) {
                  Matrix& gb = G(beta);
                  for (int r = 0; r < rows; ++r)
                    for (int c = 0; c < cols; ++c) gb.data[static_cast<std::size_t>(c)] += g(r, c);
                }
                if (Needs(a)) {
                  Matrix& ga = G(a);
                  std::vector<double> dxhat(static_cast<std::size_t>(cols));
                  for (int r = 0; r < rows; ++r) {
                    double m1 = 0.0, m2 = 0.0;
                    for (int c = 0; c < cols; ++c) {
                      const double d = g(r, c) * gm.data[static_cast<std::size_t>(c)];
                      dxhat[static_cast<std::size_t>(c)] = d;
                      m1 += d;
                      m2 += d * xhat(r, c);
                    }
                    m1 /= cols;
                    m2 /= cols;
                    const double is = inv_std[static_cast<std::size_t>(r)];
                    for (int c = 0; c < cols; ++c)
                      ga(r, c) += is * (dxhat[static_cast<std::size_t>(c)] - m1 - xhat(r, c) * m2);
                  }
                }
              });
}

// ---------------------------------------------------------------------------
// Structural ops

Tensor Tape::concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no inputs");
  const int rows = parts[0].rows();
  int cols = 0;
  for (const auto& p : parts) {
    Own(p, "concat_cols");
    if (p.rows() != rows) throw ShapeError("concat_cols: " + Shapes(parts[0].value(), p.value()));
    cols += p.cols();
  }
  Matrix out(rows, cols);
  int off = 0;
  for (const auto& p : parts) {
    const Matrix& v = p.value();
    for (int r = 0; r < rows; ++r) std::copy(v.row(r), v.row(r) + v.cols, out.row(r) + off);
    off += v.cols;
  }
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), parts, [this, parts, o] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    int off = 0;
    for (const auto& p : parts) {
      const int pc = N(p).value.cols;
      if (Needs(p)) {
        Matrix& gp = G(p);
        for (int r = 0; r < g.rows; ++r)
          for (int c = 0; c < pc; ++c) gp(r, c) += g(r, off + c);
      }
      off += pc;
    }
  });
}

Tensor Tape::concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no inputs");
  const int cols = parts[0].cols();
  int rows = 0;
  for (const auto& p : parts) {
    Own(p, "concat_rows");
    if (p.cols() != cols) throw ShapeError("concat_rows: " + Shapes(parts[0].value(), p.value()));
    rows += p.rows();
  }
  Matrix out(rows, cols);
  auto it = out.data.begin();
  for (const auto& p : parts) it = std::copy(p.value().data.begin(), p.value().data.end(), it);
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), parts, [this, parts, o] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    std::size_t off = 0;
    for (const auto& p : parts) {
      const std::size_t n = N(p).value.size();
      if (Needs(p)) {
        Matrix& gp = G(p);
        for (std::size_t i = 0; i < n; ++i) gp.data[i] += g.data[off + i];
      }
      off += n;
    }
  });
}

Tensor Tape::slice_cols(Tensor a, int begin, int count) {
  Own(a, "slice_cols");
  const Matrix& x = a.value();
  if (begin < 0 || count < 0 || begin + count > x.cols)
    throw ShapeError("slice_cols [" + std::to_string(begin) + "," + std::to_string(begin + count) +
                     ") of " + x.ShapeString());
  Matrix out(x.rows, count);
  for (int r = 0; r < x.rows; ++r) std::copy(x.row(r) + begin, x.row(r) + begin + count, out.row(r));
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a}, [this, a, o, begin, count] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    Matrix& ga = G(a);
    for (int r = 0; r < g.rows; ++r)
      for (int c = 0; c < count; ++c) ga(r, begin + c) += g(r, c);
  });
}

Tensor Tape::slice_rows(Tensor a, int begin, int count) {
  Own(a, "slice_rows");
  const Matrix& x = a.value();
  if (begin < 0 || count < 0 || begin + count > x.rows)
    throw ShapeError("slice_rows [" + std::to_string(begin) + "," + std::to_string(begin + count) +
                     ") of " + x.ShapeString());
  Matrix out(count, x.cols);
  std::copy(x.row(begin), x.row(begin) + static_cast<std::size_t>(count) * x.cols, out.data.begin());
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a}, [this, a, o, begin] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    Matrix& ga = G(a);
    double* dst = ga.row(begin);
    for (std::size_t i = 0; i < g.data.size(); ++i) dst[i] += g.data[i];
  });
}

Tensor Tape::gather(const std::vector<Tensor>& sources,
                    const std::vector<std::pair<int, int>>& rows) {
  if (sources.empty()) throw ShapeError("gather: no sources");
  const int cols = sources[0].cols();
  for (const auto& s : sources) {
    Own(s, "gather");
    if (s.cols() != cols) throw ShapeError("gather: " + Shapes(sources[0].value(), s.value()));
  }
  Matrix out(static_cast<int>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto [s, j] = rows[r];
    if (s < 0 || s >= static_cast<int>(sources.size()) || j < 0 ||
        j >= sources[static_cast<std::size_t>(s)].rows())
      throw ShapeError("gather: row (" + std::to_string(s) + "," + std::to_string(j) +
                       ") out of range");
    const Matrix& v = sources[static_cast<std::size_t>(s)].value();
    std::copy(v.row(j), v.row(j) + cols, out.row(static_cast<int>(r)));
  }
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), sources, [this, sources, rows, o, cols] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Tensor src = sources[static_cast<std::size_t>(rows[r].first)];
      if (!Needs(src)) continue;
      double* dst = G(src).row(rows[r].second);
      const double* gr = g.row(static_cast<int>(r));
      for (int c = 0; c < cols; ++c) dst[c] += gr[c];
    }
  });
}

Tensor Tape::embedding(Tensor table, const std::vector<int>& ids) {
  std::vector<std::pair<int, int>> rows;
  rows.reserve(ids.size());
  for (int id : ids) rows.emplace_back(0, id);
  return gather({table}, rows);
}

Tensor Tape::segment_sum_rows(Tensor a, const std::vector<int>& segment, int n_segments) {
  Own(a, "segment_sum_rows");
  const Matrix& x = a.value();
  if (static_cast<int>(segment.size()) != x.rows)
    throw ShapeError("segment_sum_rows: " + std::to_string(segment.size()) + " ids for " +
                     x.ShapeString());
  Matrix out(n_segments, x.cols);
  for (int r = 0; r < x.rows; ++r) {
    const int s = segment[static_cast<std::size_t>(r)];
    if (s < 0 || s >= n_segments) throw ShapeError("segment_sum_rows: segment out of range");
    for (int c = 0; c < x.cols; ++c) out(s, c) += x(r, c);
  }
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a}, [this, a, o, segment] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    Matrix& ga = G(a);
    for (int r = 0; r < ga.rows; ++r)
      for (int c = 0; c < ga.cols; ++c) ga(r, c) += g(segment[static_cast<std::size_t>(r)], c);
  });
}

Tensor Tape::sum(Tensor a) {
  Own(a, "sum");
  double s = 0.0;
  for (double v : a.value().data) s += v;
  const int o = static_cast<int>(nodes_.size());
  return Push(Matrix(1, 1, s), {a}, [this, a, o] {
    const double g = nodes_[static_cast<std::size_t>(o)].grad.data[0];
    for (double& v : G(a).data) v += g;
  });
}

Tensor Tape::mean(Tensor a) {
  const std::size_t n = a.value().size();
  if (n == 0) throw ShapeError("mean of empty tensor");
  return scale(sum(a), 1.0 / static_cast<double>(n));
}

Tensor Tape::sum_rows(Tensor a) {
  Own(a, "sum_rows");
  const Matrix& x = a.value();
  Matrix out(1, x.cols);
  for (int r = 0; r < x.rows; ++r)
    for (int c = 0; c < x.cols; ++c) out.data[static_cast<std::size_t>(c)] += x(r, c);
  const int o = static_cast<int>(nodes_.size());
  return Push(std::move(out), {a}, [this, a, o] {
    const Matrix& g = nodes_[static_cast<std::size_t>(o)].grad;
    Matrix& ga = G(a);
    for (int r = 0; r < ga.rows; ++r)
      for (int c = 0; c < ga.cols; ++c) ga(r, c) += g.data[static_cast<std::size_t>(c)];
  });
}

Tensor Tape::mean_rows(Tensor a) {
  if (a.rows() == 0) throw ShapeError("mean_rows of empty tensor");
  return scale(sum_rows(a), 1.0 / a.rows());
}

// ---------------------------------------------------------------------------

GradCheckReport GradCheck(const std::function<Tensor(Tape&)>& loss,
                          const std::vector<Parameter*>& params, double h, double tol,
                          double floor) {
  GradCheckReport report;
  std::vector<Matrix> analytic;
  {
    Tape tape;
    Tensor l = loss(tape);
    tape.backward(l);
    for (Parameter* p : params) {
      Matrix g(p->value.rows, p->value.cols);
      for (const auto& [q, gq] : tape.param_grads())
        if (q == p) g = gq;
      analytic.push_back(std::move(g));
    }
  }
  auto eval = [&] {
    Tape tape(false);
    return loss(tape).item();
  };
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter* p = params[pi];
    for (std::size_t i = 0; i < p->value.data.size(); ++i) {
      const double saved = p->value.data[i];
      p->value.data[i] = saved + h;
      const double up = eval();
      p->value.data[i] = saved - h;
      const double down = eval();
      p->value.data[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic[pi].data[i];
      const double err =
          std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      ++report.checked;
      if (err > report.max_rel_error || std::isnan(err)) {
        report.max_rel_error = err;
        report.worst = p->name + "[" + std::to_string(i) + "]";
      }
    }
  }
  report.passed = report.max_rel_error < tol;
  return report;
}

}  // namespace basts
