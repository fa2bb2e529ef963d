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

#include "dsrm/checkpoint.h"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "dsrm/error.h"

namespace dsrm {
namespace {

constexpr std::array<char, 8> kMagic = {'D', 'S', 'R', 'M', 'C', 'K', 'P', 'T'};
constexpr std::size_t kMaxLayer = std::size_t{1} << 32;

template <typename U>
void PutLe(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

void PutDouble(std::ostream& out, double v) {
  PutLe(out, std::bit_cast<std::uint64_t>(v));
}

void PutDoubles(std::ostream& out, std::span<const double> values) {
  for (double v : values) PutDouble(out, v);
}

template <typename U>
U GetLe(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw DataError("truncated checkpoint");
  }
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    value |= static_cast<U>(bytes[i]) << (8 * i);
  }
  return value;
}

double GetDouble(std::istream& in) { return std::bit_cast<double>(GetLe<std::uint64_t>(in)); }

void GetDoubles(std::istream& in, std::span<double> values) {
  for (double& v : values) {
    v = GetDouble(in);
    if (!std::isfinite(v)) throw DataError("non-finite weight in checkpoint");
  }
}

}  // namespace

void WriteCheckpoint(const Checkpoint& ckpt, std::ostream& out) {
  const NetworkParams& p = ckpt.params;
  out.write(kMagic.data(), kMagic.size());
  PutLe<std::uint32_t>(out, kCheckpointVersion);
  PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(p.layer_sizes.size()));
  for (std::size_t s : p.layer_sizes) PutLe<std::uint64_t>(out, s);
  PutDouble(out, ckpt.gamma);
  PutLe<std::uint64_t>(out, p.seed);
  PutDoubles(out, p.w1.data());
  PutDoubles(out, p.w2.data());
  PutDoubles(out, p.b2);
  PutDoubles(out, p.w3.data());
  PutDoubles(out, p.b3);
  if (!out) throw DataError("failed writing checkpoint");
}

void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  WriteCheckpoint(ckpt, out);
}

Checkpoint ReadCheckpoint(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw DataError("not a DSRM checkpoint (bad magic)");
  }
  const auto version = GetLe<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto count = GetLe<std::uint32_t>(in);
  if (count != 4) throw DataError("checkpoint must list 4 layer sizes");

  Checkpoint ckpt;
  NetworkParams& p = ckpt.params;
  for (auto& s : p.layer_sizes) {
    const auto v = GetLe<std::uint64_t>(in);
    if (v == 0 || v >= kMaxLayer) throw DataError("invalid layer size in checkpoint");
    s = static_cast<std::size_t>(v);
  }
  ckpt.gamma = GetDouble(in);
  p.seed = GetLe<std::uint64_t>(in);

  const auto& ls = p.layer_sizes;
  p.w1 = Matrix(ls[1], ls[0]);
  p.w2 = Matrix(ls[2], ls[1]);
  p.b2.assign(ls[2], 0.0);
  p.w3 = Matrix(ls[3], ls[2]);
  p.b3.assign(ls[3], 0.0);
  GetDoubles(in, p.w1.data());
  GetDoubles(in, p.w2.data());
  GetDoubles(in, p.b2);
  GetDoubles(in, p.w3.data());
  GetDoubles(in, p.b3);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError("trailing bytes after checkpoint payload");
  }
  return ckpt;
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return ReadCheckpoint(in);
}

}  // namespace dsrm
