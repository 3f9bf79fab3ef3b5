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

// Reverse-mode differentiation over dense row-major matrices.
//
// A Tape records every operation applied to its Tensors, together with a
// closure that pushes gradients back to the operation's inputs. Vectors are
// 1 x n rows. Parameters live outside the tape in a ParamStore; a tape
// collects their gradients in its own buffer so independent tapes can run
// on different threads and be reduced afterwards in a fixed order.

#ifndef BASTS_TENSOR_H_
#define BASTS_TENSOR_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace basts {

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0);
  static Matrix FromRows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return data.size(); }
  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }
  std::string ShapeString() const;
};

struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  bool frozen = false;
};

// Owns parameters in registration order; addresses are stable.
class ParamStore {
 public:
  Parameter& Add(const std::string& name, int rows, int cols);
  Parameter* Find(const std::string& name);
  const Parameter* Find(const std::string& name) const;
  Parameter& Get(const std::string& name);
  const std::vector<std::unique_ptr<Parameter>>& params() const { return params_; }
  std::size_t size() const { return params_.size(); }
  std::size_t NumValues() const;

  void ZeroGrad();
  // Uniform(-bound, bound) draws in registration order.
  static void InitUniform(Parameter& p, double bound, std::mt19937_64& rng);
  // Glorot-uniform on (rows + cols).
  static void InitXavier(Parameter& p, std::mt19937_64& rng);

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::unordered_map<std::string, Parameter*> by_name_;
};

// Per-tape parameter gradients in first-use order.
using GradBuffer = std::vector<std::pair<Parameter*, Matrix>>;
void AccumulateGrads(const GradBuffer& grads, double scale = 1.0);

// Key-padding / causal mask for row softmax: nonzero entries are excluded.
struct Mask {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> masked;

  Mask() = default;
  Mask(int r, int c) : rows(r), cols(c), masked(static_cast<std::size_t>(r) * c, 0) {}
  bool at(int r, int c) const { return masked[static_cast<std::size_t>(r) * cols + c] != 0; }
  void set(int r, int c, bool v = true) { masked[static_cast<std::size_t>(r) * cols + c] = v; }
  static Mask Causal(int n);
  // Masks key columns >= valid for every query row.
  static Mask KeyPadding(int rows, int cols, int valid);
};

class Tape;

// Handle to a node on a tape.
class Tensor {
 public:
  Tensor() = default;
  bool valid() const { return tape_ != nullptr; }
  int id() const { return id_; }
  Tape* tape() const { return tape_; }
  const Matrix& value() const;
  int rows() const { return value().rows; }
  int cols() const { return value().cols; }
  // Scalar value of a 1 x 1 tensor.
  double item() const;

 private:
  friend class Tape;
  Tensor(Tape* t, int id) : tape_(t), id_(id) {}
  Tape* tape_ = nullptr;
  int id_ = -1;
};

class Tape {
 public:
  // With record = false no backward closures are kept (inference).
  explicit Tape(bool record = true) : record_(record) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Tensor constant(Matrix m);
  // Leaf that receives a gradient but is not a Parameter.
  Tensor variable(Matrix m);
  // Leaf bound to a parameter; repeated calls return the same node.
  Tensor param(Parameter& p);

  Tensor matmul(Tensor a, Tensor b);     // a * b
  Tensor matmul_nt(Tensor a, Tensor b);  // a * b^T
  Tensor transpose(Tensor a);
  Tensor add(Tensor a, Tensor b);
  Tensor sub(Tensor a, Tensor b);
  Tensor mul(Tensor a, Tensor b);  // elementwise
  // Adds the 1 x c row b to every row of a.
  Tensor add_rowwise(Tensor a, Tensor b);
  Tensor scale(Tensor a, double s);
  Tensor add_scalar(Tensor a, double s);
  Tensor sigmoid(Tensor a);
  Tensor tanh(Tensor a);
  Tensor relu(Tensor a);
  // log(max(a, floor)); no gradient where clamped.
  Tensor log(Tensor a, double floor = 1e-12);
  // Row softmax with max subtraction; masked entries get probability 0.
  // Throws MaskError when a row has every entry masked.
  Tensor softmax_rows(Tensor a, const Mask* mask = nullptr);
  Tensor concat_cols(const std::vector<Tensor>& parts);
  Tensor concat_rows(const std::vector<Tensor>& parts);
  Tensor slice_cols(Tensor a, int begin, int count);
  Tensor slice_rows(Tensor a, int begin, int count);
  // Row r of the result is row rows[r].second of sources[rows[r].first].
  Tensor gather(const std::vector<Tensor>& sources,
                const std::vector<std::pair<int, int>>& rows);
  Tensor embedding(Tensor table, const std::vector<int>& ids);
  // Sums rows of a into n_segments output rows by segment id.
  Tensor segment_sum_rows(Tensor a, const std::vector<int>& segment, int n_segments);
  Tensor sum(Tensor a);        // 1 x 1
  Tensor mean(Tensor a);       // 1 x 1
  Tensor sum_rows(Tensor a);   // 1 x c
  Tensor mean_rows(Tensor a);  // 1 x c
  Tensor layer_norm_rows(Tensor a, Tensor gamma, Tensor beta, double eps = 1e-6);
  // Summed -log softmax(logits)[r, target[r]]; rows with target < 0 skipped.
  Tensor cross_entropy_rows(Tensor logits, const std::vector<int>& target);

  // Reverse pass from a 1 x 1 tensor on this tape. Throws GraphError when
  // the loss belongs elsewhere, is not scalar, or backward already ran.
  void backward(Tensor loss);
  // Gradient of a node after backward (zeros if it received none).
  Matrix grad(Tensor t) const;
  const GradBuffer& param_grads() const { return param_grads_; }
  GradBuffer TakeParamGrads() { return std::move(param_grads_); }

  std::size_t size() const { return nodes_.size(); }
  const Matrix& value(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    Parameter* param = nullptr;
    std::function<void()> backward;
  };

  Tensor Push(Matrix value, std::vector<Tensor> inputs, std::function<void()> backward);
  bool Needs(Tensor t) const { return nodes_[static_cast<std::size_t>(t.id_)].requires_grad; }
  Node& N(Tensor t) { return nodes_[static_cast<std::size_t>(t.id_)]; }
  Matrix& G(Tensor t);  // gradient buffer, allocated on demand
  void Own(Tensor t, const char* op) const;

  bool record_;
  bool done_ = false;
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, int> param_nodes_;
  GradBuffer param_grads_;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst;  // "param[index]" of the largest error
  int checked = 0;
  bool passed = true;
};

// Central differences on every entry of params (values restored on exit).
// Relative error is |a - n| / max(|a|, |n|, floor).
GradCheckReport GradCheck(const std::function<Tensor(Tape&)>& loss,
                          const std::vector<Parameter*>& params, double h = 1e-5,
                          double tol = 1e-4, double floor = 1e-6);

}  // namespace basts

#endif  // BASTS_TENSOR_H_
