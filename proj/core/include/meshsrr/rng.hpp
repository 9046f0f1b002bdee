#pragma once

#include <cstdint>

namespace meshsrr {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Counter-based 64-bit generator: the n-th draw of stream (seed, stream) is
/// mix64(key + n * golden) with key derived from both. Any draw can be
/// reproduced from its coordinates, so per-frame streams stay deterministic
/// regardless of evaluation order.
///
/// Normals use the Box-Muller cosine branch (two uniforms per normal) rather
/// than std::normal_distribution, whose algorithm is implementation-defined.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // [0, 1)
  double uniform();
  // standard normal
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace meshsrr
