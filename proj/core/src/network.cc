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

#include "dsrm/network.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "dsrm/error.h"
#include "dsrm/parallel.h"
#include "dsrm/rng.h"

namespace dsrm {
namespace {

constexpr double kNormFloor = 1e-12;

void FillUniform(Matrix& m, double bound, Rng& rng) {
  for (double& w : m.data()) w = rng.Uniform(-bound, bound);
}

double Norm(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

// Adds scale * d cos(a, b) / da into grad_a and scale * d cos(a, b) / db
// into grad_b. Degenerate norms contribute nothing, matching DenseCosine.
void AccumulateCosineGradient(std::span<const double> a, std::span<const double> b,
                              double scale, std::span<double> grad_a,
                              std::span<double> grad_b) {
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na < kNormFloor || nb < kNormFloor) return;
  const double inv = 1.0 / (na * nb);
  const double cos = Dot(a, b) * inv;
  const double ca = cos / (na * na);
  const double cb = cos / (nb * nb);
  for (std::size_t i = 0; i < a.size(); ++i) {
    grad_a[i] += scale * (b[i] * inv - ca * a[i]);
    grad_b[i] += scale * (a[i] * inv - cb * b[i]);
  }
}

double LogSumExp(std::span<const double> z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - m);
  return m + std::log(sum);
}

void CheckInput(const NetworkParams& params, const SparseVector& x) {
  if (x.dimension() != params.input_dim()) {
    throw DataError("input dimension " + std::to_string(x.dimension()) +
                    " does not match network input " +
                    std::to_string(params.input_dim()));
  }
}

struct Tower {
  const SparseVector* x = nullptr;
  ForwardTrace trace;
  std::vector<double> dz3;
  std::vector<double> dz2;
  std::vector<double> dl1;
};

struct GroupWork {
  double loss = 0.0;
  std::vector<Tower> towers;  // anchor, positive, negatives...
};

std::vector<const SparseVector*> GroupInputs(const TrainingGroup& g) {
  std::vector<const SparseVector*> inputs;
  inputs.reserve(2 + g.negatives.size());
  inputs.push_back(&g.anchor);
  inputs.push_back(&g.positive);
  for (const auto& n : g.negatives) inputs.push_back(&n);
  return inputs;
}

// -log P(positive | anchor) from the candidate cosines.
double GroupLoss(std::span<const double> scores, double gamma) {
  std::vector<double> z(scores.size());
  for (std::size_t k = 0; k < scores.size(); ++k) z[k] = gamma * scores[k];
  return LogSumExp(z) - z[0];
}

GroupWork RunGroup(const NetworkParams& params, const TrainingGroup& group,
                   double gamma, double weight, bool backward) {
  GroupWork work;
  for (const SparseVector* x : GroupInputs(group)) {
    Tower t;
    t.x = x;
    t.trace = Forward(params, *x);
    work.towers.push_back(std::move(t));
  }
  const std::size_t num_candidates = work.towers.size() - 1;
  const auto& ya = work.towers[0].trace.y;
  std::vector<double> scores(num_candidates);
  for (std::size_t k = 0; k < num_candidates; ++k) {
    scores[k] = DenseCosine(ya, work.towers[k + 1].trace.y);
  }
  work.loss = GroupLoss(scores, gamma);
  if (!backward) return work;

  const std::vector<double> p = ScaledSoftmax(scores, gamma);
  const std::size_t out = params.output_dim();
  std::vector<std::vector<double>> dy(work.towers.size(), std::vector<double>(out, 0.0));
  for (std::size_t k = 0; k < num_candidates; ++k) {
    const double dscore = weight * gamma * (p[k] - (k == 0 ? 1.0 : 0.0));
    AccumulateCosineGradient(ya, work.towers[k + 1].trace.y, dscore, dy[0], dy[k + 1]);
  }

  const std::size_t h1 = params.layer_sizes[1];
  const std::size_t h2 = params.layer_sizes[2];
  for (std::size_t v = 0; v < work.towers.size(); ++v) {
    Tower& t = work.towers[v];
    t.dz3.resize(out);
    for (std::size_t o = 0; o < out; ++o) {
      const double y = t.trace.y[o];
      t.dz3[o] = dy[v][o] * (1.0 - y * y);
    }
    t.dz2.assign(h2, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double d = t.dz3[o];
      if (d == 0.0) continue;
      for (std::size_t j = 0; j < h2; ++j) t.dz2[j] += params.w3(o, j) * d;
    }
    for (std::size_t j = 0; j < h2; ++j) {
      const double l2 = t.trace.l2[j];
      t.dz2[j] *= 1.0 - l2 * l2;
    }
    t.dl1.assign(h1, 0.0);
    for (std::size_t j = 0; j < h2; ++j) {
      const double d = t.dz2[j];
      if (d == 0.0) continue;
      for (std::size_t i = 0; i < h1; ++i) t.dl1[i] += params.w2(j, i) * d;
    }
  }
  return work;
}

std::vector<GroupWork> RunBatch(const NetworkParams& params,
                                std::span<const TrainingGroup> batch, double gamma,
                                bool backward, int threads) {
  if (batch.empty()) throw DataError("empty training batch");
  for (const auto& g : batch) {
    CheckInput(params, g.anchor);
    CheckInput(params, g.positive);
    for (const auto& n : g.negatives) CheckInput(params, n);
  }
  const double weight = 1.0 / static_cast<double>(batch.size());
  std::vector<GroupWork> work(batch.size());
  ParallelFor(batch.size(), threads, [&](std::size_t i) {
    work[i] = RunGroup(params, batch[i], gamma, weight, backward);
  });
  return work;
}

}  // namespace

NetworkParams InitParams(const LayerSizes& sizes, std::uint64_t seed) {
  for (std::size_t s : sizes) {
    if (s == 0) throw std::invalid_argument("layer sizes must be positive");
  }
  NetworkParams p;
  p.layer_sizes = sizes;
  p.seed = seed;
  p.w1 = Matrix(sizes[1], sizes[0]);
  p.w2 = Matrix(sizes[2], sizes[1]);
  p.w3 = Matrix(sizes[3], sizes[2]);
  p.b2.assign(sizes[2], 0.0);
  p.b3.assign(sizes[3], 0.0);

  Rng rng(seed);
  auto bound = [](std::size_t fan_in, std::size_t fan_out) {
    return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  };
  FillUniform(p.w1, bound(sizes[0], sizes[1]), rng);
  FillUniform(p.w2, bound(sizes[1], sizes[2]), rng);
  FillUniform(p.w3, bound(sizes[2], sizes[3]), rng);
  return p;
}

ForwardTrace Forward(const NetworkParams& params, const SparseVector& x) {
  CheckInput(params, x);
  const std::size_t h1 = params.layer_sizes[1];
  const std::size_t h2 = params.layer_sizes[2];
  const std::size_t out = params.layer_sizes[3];

  ForwardTrace t;
  t.l1.assign(h1, 0.0);
  const auto& idx = x.indices();
  const auto& val = x.values();
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::size_t c = idx[k];
    const double v = val[k];
    for (std::size_t r = 0; r < h1; ++r) t.l1[r] += params.w1(r, c) * v;
  }

  t.l2.resize(h2);
  for (std::size_t j = 0; j < h2; ++j) {
    double z = params.b2[j];
    for (std::size_t i = 0; i < h1; ++i) z += params.w2(j, i) * t.l1[i];
    t.l2[j] = std::tanh(z);
  }
  t.y.resize(out);
  for (std::size_t o = 0; o < out; ++o) {
    double z = params.b3[o];
    for (std::size_t j = 0; j < h2; ++j) z += params.w3(o, j) * t.l2[j];
    t.y[o] = std::tanh(z);
  }
  return t;
}

double DenseCosine(std::span<const double> a, std::span<const double> b) {
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na < kNormFloor || nb < kNormFloor) return 0.0;
  return Dot(a, b) / (na * nb);
}

double DsrmRelatedness(const NetworkParams& params, const SparseVector& a,
                       const SparseVector& b) {
  return DenseCosine(Forward(params, a).y, Forward(params, b).y);
}

std::vector<double> ScaledSoftmax(std::span<const double> scores, double gamma) {
  if (scores.empty()) throw DataError("softmax over an empty candidate set");
  std::vector<double> z(scores.size());
  for (std::size_t k = 0; k < scores.size(); ++k) z[k] = gamma * scores[k];
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return z;
}

std::vector<double> Posterior(const NetworkParams& params,
                              const TrainingGroup& group, double gamma) {
  const std::vector<double> ya = Forward(params, group.anchor).y;
  std::vector<double> scores;
  scores.push_back(DenseCosine(ya, Forward(params, group.positive).y));
  for (const auto& n : group.negatives) {
    scores.push_back(DenseCosine(ya, Forward(params, n).y));
  }
  return ScaledSoftmax(scores, gamma);
}

double Loss(const NetworkParams& params, std::span<const TrainingGroup> batch,
            double gamma, int threads) {
  const auto work = RunBatch(params, batch, gamma, /*backward=*/false, threads);
  double sum = 0.0;
  for (const auto& w : work) sum += w.loss;
  return sum / static_cast<double>(batch.size());
}

double Gradients::W1(std::size_t r, std::size_t c) const {
  auto it = std::lower_bound(w1_columns.begin(), w1_columns.end(),
                             static_cast<std::uint32_t>(c));
  if (it == w1_columns.end() || *it != c) return 0.0;
  const std::size_t slot = static_cast<std::size_t>(it - w1_columns.begin());
  return w1_values[slot * hidden1 + r];
}

LossAndGradients ComputeLossAndGradients(const NetworkParams& params,
                                         std::span<const TrainingGroup> batch,
                                         double gamma, int threads) {
  const auto work = RunBatch(params, batch, gamma, /*backward=*/true, threads);
  const std::size_t h1 = params.layer_sizes[1];
  const std::size_t h2 = params.layer_sizes[2];
  const std::size_t out = params.layer_sizes[3];

  LossAndGradients result;
  Gradients& g = result.gradients;
  g.hidden1 = h1;
  g.w2 = Matrix(h2, h1);
  g.b2.assign(h2, 0.0);
  g.w3 = Matrix(out, h2);
  g.b3.assign(out, 0.0);

  // Accumulate W1 columns in first-touch slots, then sort; each entry is
  // still summed in group order.
  std::unordered_map<std::uint32_t, std::size_t> slot_of;
  std::vector<std::uint32_t> columns;
  std::vector<double> values;

  double loss_sum = 0.0;
  for (const auto& w : work) {
    loss_sum += w.loss;
    for (const auto& t : w.towers) {
      for (std::size_t o = 0; o < out; ++o) {
        const double d = t.dz3[o];
        g.b3[o] += d;
        for (std::size_t j = 0; j < h2; ++j) g.w3(o, j) += d * t.trace.l2[j];
      }
      for (std::size_t j = 0; j < h2; ++j) {
        const double d = t.dz2[j];
        g.b2[j] += d;
        for (std::size_t i = 0; i < h1; ++i) g.w2(j, i) += d * t.trace.l1[i];
      }
      const auto& idx = t.x->indices();
      const auto& val = t.x->values();
      for (std::size_t k = 0; k < idx.size(); ++k) {
        auto [it, inserted] = slot_of.emplace(idx[k], columns.size());
        if (inserted) {
          columns.push_back(idx[k]);
          values.resize(values.size() + h1, 0.0);
        }
        double* col = values.data() + it->second * h1;
        for (std::size_t i = 0; i < h1; ++i) col[i] += t.dl1[i] * val[k];
      }
    }
  }
  result.loss = loss_sum / static_cast<double>(batch.size());

  std::vector<std::size_t> order(columns.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return columns[a] < columns[b]; });
  g.w1_columns.reserve(columns.size());
  g.w1_values.reserve(values.size());
  for (std::size_t s : order) {
    g.w1_columns.push_back(columns[s]);
    g.w1_values.insert(g.w1_values.end(), values.begin() + s * h1,
                       values.begin() + (s + 1) * h1);
  }
  return result;
}

Gradients ComputeGradients(const NetworkParams& params,
                           std::span<const TrainingGroup> batch, double gamma,
                           int threads) {
  return ComputeLossAndGradients(params, batch, gamma, threads).gradients;
}

void ApplySgd(NetworkParams& params, const Gradients& grad, double learning_rate) {
  const std::size_t h1 = params.layer_sizes[1];
  for (std::size_t s = 0; s < grad.w1_columns.size(); ++s) {
    const std::size_t c = grad.w1_columns[s];
    const double* col = grad.w1_values.data() + s * h1;
    for (std::size_t r = 0; r < h1; ++r) params.w1(r, c) -= learning_rate * col[r];
  }
  auto step = [learning_rate](std::span<double> w, std::span<const double> g) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * g[i];
  };
  step(params.w2.data(), grad.w2.data());
  step(params.b2, grad.b2);
  step(params.w3.data(), grad.w3.data());
  step(params.b3, grad.b3);
}

}  // namespace dsrm
