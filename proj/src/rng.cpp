#include "smse/rng.hpp"

#include <algorithm>
#include <random>

namespace smse {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

}  // namespace

Philox4x32::Block Philox4x32::generate(Block c, Key k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kWeylA;
      k[1] += kWeylB;
    }
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMulA, c[0], lo0, hi0);
    mulhilo(kMulB, c[2], lo1, hi1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

Philox4x32::Philox4x32(std::uint64_t seed, std::uint32_t domain, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0, domain, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

Philox4x32::result_type Philox4x32::operator()() {
  if (next_ == 4) {
    buffer_ = generate(counter_, key_);
    ++counter_[0];
    next_ = 0;
  }
  return buffer_[static_cast<std::size_t>(next_++)];
}

std::vector<Count> sample_multinomial(Count n, std::span<const double> weights, Philox4x32& rng) {
  std::vector<Count> out(weights.size(), 0);
  double remaining_mass = 0.0;
  for (double w : weights) remaining_mass += w;
  Count remaining = n;
  for (std::size_t k = 0; k < weights.size() && remaining > 0; ++k) {
    if (k + 1 == weights.size()) {
      out[k] = remaining;
      break;
    }
    const double p = remaining_mass > 0.0 ? std::clamp(weights[k] / remaining_mass, 0.0, 1.0) : 0.0;
    Count draw = 0;
    if (p >= 1.0) draw = remaining;
    else if (p > 0.0) draw = std::binomial_distribution<Count>(remaining, p)(rng);
    out[k] = draw;
    remaining -= draw;
    remaining_mass -= weights[k];
  }
  return out;
}

}  // namespace smse
