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

#ifndef DSRM_CHECKPOINT_H_
#define DSRM_CHECKPOINT_H_

#include <filesystem>
#include <iosfwd>

#include "dsrm/network.h"

namespace dsrm {

// Binary checkpoint layout, all little-endian:
//   8 bytes  magic "DSRMCKPT"
//   u32      format version (1)
//   u32      number of layer sizes (4)
//   4 x u64  layer sizes {input, hidden1, hidden2, output}
//   f64      gamma
//   u64      init seed
//   f64[]    W1, W2, b2, W3, b3, matrices row-major
struct Checkpoint {
  NetworkParams params;
  double gamma = 0.0;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void WriteCheckpoint(const Checkpoint& ckpt, std::ostream& out);
void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path);

// Throws DataError on a bad magic, unknown version, truncated payload or
// non-finite weights.
Checkpoint ReadCheckpoint(std::istream& in);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace dsrm

#endif  // DSRM_CHECKPOINT_H_
