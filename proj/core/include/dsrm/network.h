// Copyright 2026 The DSRM Authors
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

#ifndef DSRM_NETWORK_H_
#define DSRM_NETWORK_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dsrm/vectorizer.h"

namespace dsrm {

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// {input, hidden1, hidden2, output}.
using LayerSizes = std::array<std::size_t, 4>;

// Network weights:
//   l1 = W1 x                  (no bias)
//   l2 = tanh(W2 l1 + b2)
//   y  = tanh(W3 l2 + b3)
struct NetworkParams {
  LayerSizes layer_sizes{};
  Matrix w1;  // hidden1 x input
  Matrix w2;  // hidden2 x hidden1
  std::vector<double> b2;
  Matrix w3;  // output x hidden2
  std::vector<double> b3;
  std::uint64_t seed = 0;

  std::size_t input_dim() const { return layer_sizes[0]; }
  std::size_t output_dim() const { return layer_sizes[3]; }

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

// Weights uniform on +-sqrt(6 / (fan_in + fan_out)), biases zero.
// Throws std::invalid_argument if any size is 0.
NetworkParams InitParams(const LayerSizes& sizes, std::uint64_t seed);

struct ForwardTrace {
  std::vector<double> l1;
  std::vector<double> l2;
  std::vector<double> y;
};

// O(nnz(x) * hidden1) for the first layer. Throws DataError when x has the
// wrong dimension.
ForwardTrace Forward(const NetworkParams& params, const SparseVector& x);

// Cosine of two dense vectors; 0 when either norm is below 1e-12.
double DenseCosine(std::span<const double> a, std::span<const double> b);

// Cosine between the two output embeddings, in [-1, 1].
double DsrmRelatedness(const NetworkParams& params, const SparseVector& a,
                       const SparseVector& b);

// One softmax group: the anchor entity, its related entity and the sampled
// unrelated ones. Candidates are ordered {positive, negatives...}.
struct TrainingGroup {
  SparseVector anchor;
  SparseVector positive;
  std::vector<SparseVector> negatives;
};

// softmax(gamma * scores) with max subtraction.
std::vector<double> ScaledSoftmax(std::span<const double> scores, double gamma);

// P(candidate | anchor) for {positive, negatives...}.
std::vector<double> Posterior(const NetworkParams& params,
                              const TrainingGroup& group, double gamma);

// Mean over groups of -log P(positive | anchor). Throws DataError on an
// empty batch.
double Loss(const NetworkParams& params, std::span<const TrainingGroup> batch,
            double gamma, int threads = 1);

// Gradient of Loss, shaped like NetworkParams. The W1 gradient only has
// columns that appear in the batch inputs, so it is kept column-sparse.
struct Gradients {
  std::size_t hidden1 = 0;
  std::vector<std::uint32_t> w1_columns;  // sorted
  std::vector<double> w1_values;          // hidden1 values per listed column
  Matrix w2;
  std::vector<double> b2;
  Matrix w3;
  std::vector<double> b3;

  // Entry (r, c) of dL/dW1; 0 for columns not touched by the batch.
  double W1(std::size_t r, std::size_t c) const;
};

struct LossAndGradients {
  double loss = 0.0;
  Gradients gradients;
};

// Per-group work may run on several threads; contributions are reduced in
// group order, so the result is bit-identical for every thread count.
LossAndGradients ComputeLossAndGradients(const NetworkParams& params,
                                         std::span<const TrainingGroup> batch,
                                         double gamma, int threads = 1);

Gradients ComputeGradients(const NetworkParams& params,
                           std::span<const TrainingGroup> batch, double gamma,
                           int threads = 1);

// params -= learning_rate * grad
void ApplySgd(NetworkParams& params, const Gradients& grad, double learning_rate);

}  // namespace dsrm

#endif  // DSRM_NETWORK_H_
