// Copyright 2026 The dpssp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPSSP_RNG_HPP_
#define DPSSP_RNG_HPP_

#include <array>
#include <cstdint>
#include <limits>

namespace dpssp {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., SC'11). Pure function of
// (counter, key); this is what makes RngStream splittable.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

// SplitMix64 finalizer, used to hash seeds and tags into stream ids.
std::uint64_t mix64(std::uint64_t z);

// Stream id for one (trial, role) pair under a master seed. Distinct
// arguments give distinct Philox counter blocks, so parallel trials never
// share draws.
std::uint64_t derive_stream_id(std::uint64_t master_seed,
                               std::uint64_t trial_index,
                               std::uint64_t role_tag);

// Role tags used when deriving per-trial streams.
namespace role {
inline constexpr std::uint64_t kDataset = 0x64617461;   // "data"
inline constexpr std::uint64_t kSolver = 0x736f6c76;    // "solv"
inline constexpr std::uint64_t kEval = 0x6576616c;      // "eval"
inline constexpr std::uint64_t kProblem = 0x70726f62;   // "prob"
inline constexpr std::uint64_t kVerify = 0x76657269;    // "veri"
}  // namespace role

// Counter-based random stream. The pair (seed, stream_id) fixes the whole
// draw sequence; the only mutable state is the block counter. Single owner:
// copy it if two consumers need the same sequence, split() it if they need
// independent ones.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1); safe to feed into log().
  double uniform_open();
  // Uniform integer in [0, n), unbiased (rejection on the top bits).
  std::uint64_t uniform_index(std::uint64_t n);
  // Standard Gumbel variate.
  double gumbel();

  // Child stream with the same seed and a hashed stream id.
  RngStream split(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t blocks_used() const { return block_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int available_ = 0;
};

}  // namespace dpssp

#endif  // DPSSP_RNG_HPP_
