#include "smse/history.hpp"

#include <algorithm>

namespace smse {

std::vector<ListPair> all_pairs(int t) {
  std::vector<ListPair> out;
  out.reserve(static_cast<std::size_t>(t * (t - 1) / 2));
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j < t; ++j) out.emplace_back(i, j);
  return out;
}

std::vector<CaptureHistory> all_histories(int t) {
  std::vector<CaptureHistory> out;
  const std::uint32_t n = 1u << t;
  out.reserve(n - 1);
  for (std::uint32_t b = 1; b < n; ++b) out.emplace_back(b);
  std::stable_sort(out.begin(), out.end(), history_less);
  return out;
}

std::string history_label(CaptureHistory h, const std::vector<std::string>& labels) {
  if (h.empty()) return "(none)";
  std::string out;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    if (!h.has_list(i)) continue;
    if (!out.empty()) out += '&';
    out += labels[static_cast<std::size_t>(i)];
  }
  return out;
}

std::string pair_label(ListPair p, const std::vector<std::string>& labels) {
  return labels[static_cast<std::size_t>(p.i)] + ":" + labels[static_cast<std::size_t>(p.j)];
}

}  // namespace smse
