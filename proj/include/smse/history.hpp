#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace smse {

inline constexpr int kMinLists = 3;
inline constexpr int kMaxLists = 16;

/// A subset of the lists, list i <-> bit i. Indexes both cells and parameters.
struct CaptureHistory {
  std::uint32_t bits = 0;

  constexpr CaptureHistory() = default;
  constexpr explicit CaptureHistory(std::uint32_t b) : bits(b) {}

  static constexpr CaptureHistory single(int list) { return CaptureHistory{1u << list}; }

  constexpr int order() const { return std::popcount(bits); }
  constexpr bool empty() const { return bits == 0; }
  constexpr bool contains(CaptureHistory other) const { return (bits & other.bits) == other.bits; }
  constexpr bool has_list(int list) const { return (bits >> list) & 1u; }

  friend constexpr bool operator==(CaptureHistory, CaptureHistory) = default;
};

/// Canonical ordering: by order, then numeric bitmask.
constexpr bool history_less(CaptureHistory a, CaptureHistory b) {
  if (a.order() != b.order()) return a.order() < b.order();
  return a.bits < b.bits;
}

struct ListPair {
  int i = 0;
  int j = 1;

  constexpr ListPair() = default;
  // Normalizes so that i < j.
  constexpr ListPair(int a, int b) : i(a < b ? a : b), j(a < b ? b : a) {}

  constexpr CaptureHistory history() const { return CaptureHistory{(1u << i) | (1u << j)}; }

  friend constexpr auto operator<=>(const ListPair&, const ListPair&) = default;
};

/// All pairs (i, j), i < j, in lexicographic order.
std::vector<ListPair> all_pairs(int t);

/// Position of a pair in all_pairs(t).
constexpr int pair_index(ListPair p, int t) {
  return p.i * t - p.i * (p.i + 1) / 2 + (p.j - p.i - 1);
}

/// Non-null histories for t lists in canonical order.
std::vector<CaptureHistory> all_histories(int t);

/// "A&B&C" style label for a history; "(none)" for the null history.
std::string history_label(CaptureHistory h, const std::vector<std::string>& labels);

/// "A:B" style label for a pair.
std::string pair_label(ListPair p, const std::vector<std::string>& labels);

}  // namespace smse
