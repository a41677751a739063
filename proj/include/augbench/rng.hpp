//
// Copyright 2026 The Augbench Authors
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
//

#ifndef AUGBENCH_RNG_HPP_
#define AUGBENCH_RNG_HPP_

#include <cstdint>
#include <string_view>

// Deterministic random streams. All published numbers must be
// reproducible byte-for-byte across platforms, so this avoids
// std::uniform_int_distribution and friends (their output is
// implementation-defined) in favor of a fixed splitmix64 generator
// with fixed sampling arithmetic.

namespace augbench {

namespace detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) {
  std::uint64_t s = x;
  return splitmix64_next(s);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

/// Derives a child seed as a pure function of (base, tag, index).
/// This is the seed schedule behind repetition reproducibility: the
/// same (base seed, augmenter name, repetition) always yields the
/// same stream, across processes and platforms.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::uint64_t index) {
  const std::uint64_t a = detail::mix64(base ^ detail::fnv1a64(tag));
  return detail::mix64(a ^ (index * 0xD1B54A32D192ED03ull + 1));
}

/// A splittable deterministic random stream (splitmix64).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return detail::splitmix64_next(state_); }

  /// Uniform double in [0, 1): 53 high bits of the next output.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be > 0. Uses Lemire's method
  /// with rejection, so the result is unbiased and platform-stable.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
      const std::uint64_t x = next_u64();
      const unsigned __int128 m =
          static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(n);
      if (static_cast<std::uint64_t>(m) >= threshold) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return next_double() < p;
  }

  /// Forks an independent child stream; the parent state is not advanced.
  /// Used to split one stream per document so parallel and serial
  /// processing see identical randomness.
  RngStream child(std::uint64_t index) const {
    return RngStream(detail::mix64(state_ ^ detail::mix64(index + 1)));
  }

 private:
  std::uint64_t state_;
};

}  // namespace augbench

#endif  // AUGBENCH_RNG_HPP_
