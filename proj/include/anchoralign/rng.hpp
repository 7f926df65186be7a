#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace anchoralign {

/// Mixes a base seed with a path of stream identifiers (spec index, trial,
/// phase, ...) through SplitMix64. Distinct paths give independent streams,
/// so results never depend on which worker ran which trial.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Stable 64-bit FNV-1a hash, used to turn string ids into stream ids.
std::uint64_t stable_hash(std::string_view text);

/// 64-bit Mersenne Twister with draw helpers whose output is fully specified
/// (no implementation-defined std distributions), so documented seeds
/// reproduce bit-exactly across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }
  /// Number of failures before the first success of a Bernoulli(p) sequence,
  /// for 0 < p < 1.
  std::uint64_t geometric_skip(double p);

 private:
  std::mt19937_64 engine_;
};

}  // namespace anchoralign
