// Copyright (c) 2026 The seqscen authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace seqscen {

/*
Counter-based random streams.

Every sample set drawn anywhere in the library is addressed by
(master seed, StreamLabel). The label names the repetition, the iteration
and what the samples are for; the generator key is derived statelessly
from these four words, so

  - the same (seed, label) always reproduces the identical sequence,
  - distinct labels give statistically independent streams,
  - repetitions can run on any number of threads without coordination.

The generator itself is the SplitMix64 output function applied to
key + counter * golden-ratio increments: pure 64-bit integer arithmetic,
bit-identical on every platform.
*/

enum class Purpose : std::uint32_t {
  Design = 0,
  Validation = 1,
  Certify = 2,
};

struct StreamLabel {
  std::uint64_t run_id = 0;
  std::uint32_t iteration = 0;  // k, 1-based; 0 when not tied to an iteration
  Purpose purpose = Purpose::Design;

  friend bool operator==(const StreamLabel& a, const StreamLabel& b) {
    return a.run_id == b.run_id && a.iteration == b.iteration && a.purpose == b.purpose;
  }
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t derive_key(std::uint64_t master_seed, const StreamLabel& label) {
  std::uint64_t k = mix64(master_seed + kGolden);
  k = mix64(k ^ (label.run_id + kGolden));
  k = mix64(k ^ (static_cast<std::uint64_t>(label.iteration) + kGolden));
  k = mix64(k ^ (static_cast<std::uint64_t>(label.purpose) + kGolden));
  return k;
}

}  // namespace detail

class CounterRng {
public:
  CounterRng(std::uint64_t master_seed, StreamLabel label)
      : key_(detail::derive_key(master_seed, label)) {}

  std::uint64_t next_u64() {
    counter_ += detail::kGolden;
    return detail::mix64(key_ ^ counter_);
  }

  // Uniform double in [0, 1), 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_in(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace seqscen
