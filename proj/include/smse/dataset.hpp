#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smse/history.hpp"

namespace smse {

using Count = std::int64_t;

struct Cell {
  CaptureHistory history;
  Count count = 0;
};

/// Counts of individuals per observed capture history over t labelled lists.
///
/// Counts are held densely over all 2^t histories; the null history is always
/// zero. Zero-count and absent histories are indistinguishable. Instances are
/// immutable once constructed.
class CaptureDataset {
 public:
  /// Validates labels (distinct, 3 <= t <= 16) and cells (nonnegative, not
  /// the null history, in range). Duplicate histories are summed. Throws
  /// DataError on violation, including an all-zero total.
  CaptureDataset(std::vector<std::string> labels, std::span<const Cell> cells);

  int num_lists() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }

  Count count(CaptureHistory h) const { return counts_[h.bits]; }
  /// Dense table indexed by bitmask, length 2^t.
  const std::vector<Count>& dense_counts() const { return counts_; }

  /// m, the number of distinct individuals observed.
  Count total() const { return total_; }

  /// Nonzero cells in canonical (order, bitmask) order.
  std::vector<Cell> observed_cells() const;

  /// N*_h for every history h (dense, index = bitmask). Entry 0 equals total().
  const std::vector<Count>& marginal_totals() const { return marginals_; }

  /// Returns a copy with one history's count replaced. Throws DataError if the
  /// result would be invalid.
  CaptureDataset with_count(CaptureHistory h, Count value) const;

  int label_index(std::string_view label) const;  // -1 if absent

  friend bool operator==(const CaptureDataset& a, const CaptureDataset& b) {
    return a.labels_ == b.labels_ && a.counts_ == b.counts_;
  }

 private:
  CaptureDataset() = default;
  void finalize();

  std::vector<std::string> labels_;
  std::vector<Count> counts_;
  std::vector<Count> marginals_;
  Count total_ = 0;
};

/// N*_h: individuals observed on every list in h. For the null history, m.
Count marginal_total(const CaptureDataset& d, CaptureHistory h);

/// Pairs of lists with no individual in common.
std::vector<ListPair> nonoverlapping_pairs(const CaptureDataset& d);

/// Merge a group of lists into one list placed at the position of the
/// smallest group index; an individual is on the merged list iff it was on any
/// list of the group.
CaptureDataset merge_lists(const CaptureDataset& d, std::vector<int> group, std::string new_label);

/// Reads `L1,...,Lt,count` CSV. Blank lines and lines starting with '#' are
/// skipped.
CaptureDataset parse_dataset_csv(std::istream& in);
CaptureDataset parse_dataset_csv_string(std::string_view text);

/// Writes the full 2^t - 1 row table in canonical order (zero rows omitted).
void write_dataset_csv(std::ostream& out, const CaptureDataset& d);

/// `{labels: [...], cells: [{history: [labels...], count: n}]}`
std::string dataset_to_json(const CaptureDataset& d);

}  // namespace smse
