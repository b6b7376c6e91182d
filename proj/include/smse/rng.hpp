#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "smse/dataset.hpp"

namespace smse {

inline constexpr std::uint64_t kDefaultSeed = 20190601;

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A generator is fully determined by (key, counter). Here the key is the
/// user seed and the upper counter words carry a (domain, stream index) tag,
/// so every replicate or realization owns an independent stream that does
/// not depend on how work is scheduled across threads. Satisfies
/// UniformRandomBitGenerator.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint32_t domain, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// The raw bijection: ten rounds of Philox on one counter block.
  static Block generate(Block counter, Key key);

 private:
  Key key_;
  Block counter_;
  Block buffer_{};
  int next_ = 4;
};

enum class StreamDomain : std::uint32_t {
  bootstrap = 1,
  simulation = 2,
  deviance = 3,
};

inline Philox4x32 substream(std::uint64_t seed, StreamDomain domain, std::uint64_t index) {
  return Philox4x32(seed, static_cast<std::uint32_t>(domain), index);
}

/// Multinomial(n, weights / sum(weights)) via sequential conditional binomials.
std::vector<Count> sample_multinomial(Count n, std::span<const double> weights, Philox4x32& rng);

}  // namespace smse
