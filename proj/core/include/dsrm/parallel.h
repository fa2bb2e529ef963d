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

#ifndef DSRM_PARALLEL_H_
#define DSRM_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace dsrm {

// Runs fn(i) for every i in [0, n) on up to `threads` worker threads.
// Iterations are split into contiguous blocks; callers write results into
// per-index slots and reduce afterwards in index order, so output never
// depends on the thread count. threads <= 1 runs inline.
void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace dsrm

#endif  // DSRM_PARALLEL_H_
