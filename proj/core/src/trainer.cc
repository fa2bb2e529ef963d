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

#include "dsrm/trainer.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "dsrm/error.h"
#include "dsrm/rng.h"
#include "dsrm/vectorizer.h"
#include "json.hpp"

namespace dsrm {
namespace {

std::vector<TrainingGroup> Select(std::span<const TrainingGroup> groups,
                                  std::span<const std::size_t> indices) {
  std::vector<TrainingGroup> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(groups[i]);
  return out;
}

void CheckFinite(double loss, const std::string& where) {
  if (!std::isfinite(loss)) throw NumericError("non-finite loss " + where);
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(learning_rate >= 0.0)) throw std::invalid_argument("learning rate must be >= 0");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) {
    throw std::invalid_argument("lr_decay must be in (0, 1]");
  }
  if (minibatch_size == 0) throw std::invalid_argument("minibatch size must be positive");
  if (max_epochs == 0) throw std::invalid_argument("max_epochs must be positive");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw std::invalid_argument("validation fraction must be in (0, 1)");
  }
  if (patience == 0) throw std::invalid_argument("patience must be positive");
}

std::string TrainingReport::ToJson() const {
  nlohmann::json j;
  j["train_groups"] = train_groups;
  j["validation_groups"] = validation_groups;
  j["initial_train_loss"] = initial_train_loss;
  j["initial_validation_loss"] = initial_validation_loss;
  j["best_epoch"] = best_epoch;
  j["best_validation_loss"] = best_validation_loss;
  j["best_train_loss"] = best_train_loss;
  j["stopped_early"] = stopped_early;
  j["epochs"] = nlohmann::json::array();
  for (const auto& e : epochs) {
    j["epochs"].push_back({{"epoch", e.epoch},
                           {"train_loss", e.train_loss},
                           {"validation_loss", e.validation_loss},
                           {"learning_rate", e.learning_rate}});
  }
  return j.dump(2) + "\n";
}

std::vector<TrainingGroup> BuildTrainingGroups(const KnowledgeGraph& kg,
                                               std::span<const EntityGroup> groups) {
  std::map<EntityId, SparseVector> cache;
  auto features = [&](const EntityId& id) -> const SparseVector& {
    auto it = cache.find(id);
    if (it == cache.end()) {
      it = cache.emplace(id, EncodeEntity(kg, id).concatenated).first;
    }
    return it->second;
  };
  std::vector<TrainingGroup> out;
  out.reserve(groups.size());
  for (const auto& g : groups) {
    TrainingGroup tg;
    tg.anchor = features(g.anchor);
    tg.positive = features(g.positive);
    for (const auto& n : g.negatives) tg.negatives.push_back(features(n));
    out.push_back(std::move(tg));
  }
  return out;
}

TrainResult Train(const NetworkParams& initial, std::span<const TrainingGroup> groups,
                  const TrainConfig& config) {
  config.Validate();
  if (groups.empty()) throw DataError("no training groups");

  Rng rng(config.seed);
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.Shuffle(order);

  std::size_t n_val = 0;
  if (groups.size() >= 2) {
    const auto wanted = static_cast<std::size_t>(
        std::llround(config.validation_fraction * static_cast<double>(groups.size())));
    n_val = std::clamp<std::size_t>(wanted, 1, groups.size() - 1);
  }
  const std::vector<TrainingGroup> validation =
      Select(groups, std::span(order).first(n_val));
  std::vector<TrainingGroup> training = Select(groups, std::span(order).subspan(n_val));

  auto eval = [&](const NetworkParams& p, const std::vector<TrainingGroup>& set,
                  const std::vector<TrainingGroup>& fallback) {
    return Loss(p, set.empty() ? fallback : set, config.gamma, config.threads);
  };

  TrainResult result;
  TrainingReport& report = result.report;
  report.train_groups = training.size();
  report.validation_groups = validation.size();
  report.initial_train_loss = eval(initial, training, training);
  report.initial_validation_loss = eval(initial, validation, training);
  CheckFinite(report.initial_train_loss, "before training");
  CheckFinite(report.initial_validation_loss, "before training");

  NetworkParams params = initial;
  result.params = initial;
  report.best_validation_loss = report.initial_validation_loss;
  report.best_train_loss = report.initial_train_loss;

  double lr = config.learning_rate;
  std::size_t stalled = 0;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.Shuffle(training);
    for (std::size_t start = 0; start < training.size(); start += config.minibatch_size) {
      const std::size_t len = std::min(config.minibatch_size, training.size() - start);
      const auto step = ComputeLossAndGradients(
          params, std::span(training).subspan(start, len), config.gamma, config.threads);
      CheckFinite(step.loss, "in epoch " + std::to_string(epoch) + " at group " +
                                 std::to_string(start));
      ApplySgd(params, step.gradients, lr);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.learning_rate = lr;
    rec.train_loss = eval(params, training, training);
    rec.validation_loss = eval(params, validation, training);
    CheckFinite(rec.train_loss, "after epoch " + std::to_string(epoch));
    CheckFinite(rec.validation_loss, "after epoch " + std::to_string(epoch));
    report.epochs.push_back(rec);

    if (rec.validation_loss < report.best_validation_loss) {
      report.best_validation_loss = rec.validation_loss;
      report.best_train_loss = rec.train_loss;
      report.best_epoch = epoch;
      result.params = params;
      stalled = 0;
    } else {
      ++stalled;
      lr *= config.lr_decay;
      if (stalled >= config.patience) {
        report.stopped_early = epoch < config.max_epochs;
        break;
      }
    }
  }
  return result;
}

}  // namespace dsrm
