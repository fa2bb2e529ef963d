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

#ifndef DSRM_TRAINER_H_
#define DSRM_TRAINER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dsrm/kg.h"
#include "dsrm/miner.h"
#include "dsrm/network.h"

namespace dsrm {

struct TrainConfig {
  double gamma = 10.0;            // softmax smoothing
  double learning_rate = 0.02;
  double lr_decay = 0.5;          // applied when validation loss stalls
  std::size_t minibatch_size = 1024;
  std::size_t max_epochs = 20;
  double validation_fraction = 0.1;
  std::size_t patience = 3;       // stalled epochs before stopping
  std::uint64_t seed = 1;
  int threads = 1;

  // Throws std::invalid_argument when a field is out of range.
  void Validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
  double learning_rate = 0.0;
};

struct TrainingReport {
  std::size_t train_groups = 0;
  std::size_t validation_groups = 0;
  double initial_train_loss = 0.0;
  double initial_validation_loss = 0.0;
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 0 means the initial parameters
  double best_validation_loss = 0.0;
  double best_train_loss = 0.0;
  bool stopped_early = false;

  // Key-sorted JSON.
  std::string ToJson() const;
};

struct TrainResult {
  NetworkParams params;  // best-validation parameters
  TrainingReport report;
};

// Encodes every id group; entity features are computed once per id.
// Throws DataError for ids missing from the graph.
std::vector<TrainingGroup> BuildTrainingGroups(const KnowledgeGraph& kg,
                                               std::span<const EntityGroup> groups);

// Minibatch SGD on the mean softmax loss. Groups are split once into
// training and validation sets, the training set is reshuffled every epoch,
// and the learning rate is multiplied by lr_decay whenever validation loss
// fails to improve. Stops after max_epochs or `patience` stalled epochs.
// Throws DataError on an empty group list and NumericError on a non-finite
// loss.
TrainResult Train(const NetworkParams& initial, std::span<const TrainingGroup> groups,
                  const TrainConfig& config);

}  // namespace dsrm

#endif  // DSRM_TRAINER_H_
