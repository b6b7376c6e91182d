#include "smse/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "smse/errors.hpp"

namespace smse {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

void check_num_lists(std::size_t t) {
  if (t < static_cast<std::size_t>(kMinLists) || t > static_cast<std::size_t>(kMaxLists)) {
    throw DataError("number of lists must be between " + std::to_string(kMinLists) + " and " +
                    std::to_string(kMaxLists) + ", got " + std::to_string(t));
  }
}

}  // namespace

CaptureDataset::CaptureDataset(std::vector<std::string> labels, std::span<const Cell> cells)
    : labels_(std::move(labels)) {
  check_num_lists(labels_.size());
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw DataError("empty list label");
    if (!seen.insert(l).second) throw DataError("duplicate list label '" + l + "'");
  }
  const std::size_t n = std::size_t{1} << labels_.size();
  counts_.assign(n, 0);
  for (const auto& c : cells) {
    if (c.history.bits >= n) throw DataError("capture history references a list index out of range");
    if (c.count < 0) throw DataError("negative count");
    if (c.history.empty()) {
      if (c.count > 0) throw DataError("the null capture history cannot carry an observed count");
      continue;
    }
    counts_[c.history.bits] += c.count;
  }
  finalize();
}

void CaptureDataset::finalize() {
  const int t = num_lists();
  const std::size_t n = counts_.size();
  counts_[0] = 0;
  // Superset-sum transform.
  marginals_ = counts_;
  for (int i = 0; i < t; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t b = 0; b < n; ++b)
      if (!(b & bit)) marginals_[b] += marginals_[b | bit];
  }
  total_ = marginals_[0];
  if (total_ < 1) throw DataError("dataset has no observed individuals");
}

std::vector<Cell> CaptureDataset::observed_cells() const {
  std::vector<Cell> out;
  for (auto h : all_histories(num_lists()))
    if (counts_[h.bits] > 0) out.push_back({h, counts_[h.bits]});
  return out;
}

CaptureDataset CaptureDataset::with_count(CaptureHistory h, Count value) const {
  if (h.bits >= counts_.size() || h.empty()) throw DataError("invalid capture history");
  if (value < 0) throw DataError("negative count");
  CaptureDataset out;
  out.labels_ = labels_;
  out.counts_ = counts_;
  out.counts_[h.bits] = value;
  out.finalize();
  return out;
}

int CaptureDataset::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  return -1;
}

Count marginal_total(const CaptureDataset& d, CaptureHistory h) {
  return d.marginal_totals().at(h.bits);
}

std::vector<ListPair> nonoverlapping_pairs(const CaptureDataset& d) {
  std::vector<ListPair> out;
  for (auto p : all_pairs(d.num_lists()))
    if (marginal_total(d, p.history()) == 0) out.push_back(p);
  return out;
}

CaptureDataset merge_lists(const CaptureDataset& d, std::vector<int> group, std::string new_label) {
  const int t = d.num_lists();
  std::sort(group.begin(), group.end());
  group.erase(std::unique(group.begin(), group.end()), group.end());
  if (group.size() < 2) throw DataError("merge_lists needs at least two distinct lists");
  for (int g : group)
    if (g < 0 || g >= t) throw DataError("merge_lists: list index " + std::to_string(g) + " out of range");

  std::uint32_t group_mask = 0;
  for (int g : group) group_mask |= 1u << g;

  // old index -> new index
  std::vector<int> target(static_cast<std::size_t>(t));
  std::vector<std::string> labels;
  for (int i = 0; i < t; ++i) {
    if (group_mask >> i & 1u) {
      if (i == group.front()) {
        target[static_cast<std::size_t>(i)] = static_cast<int>(labels.size());
        labels.push_back(new_label);
      } else {
        target[static_cast<std::size_t>(i)] = -1;
      }
    } else {
      target[static_cast<std::size_t>(i)] = static_cast<int>(labels.size());
      labels.push_back(d.labels()[static_cast<std::size_t>(i)]);
    }
  }
  const int merged_at = target[static_cast<std::size_t>(group.front())];

  std::vector<Cell> cells;
  for (const auto& c : d.observed_cells()) {
    std::uint32_t bits = 0;
    for (int i = 0; i < t; ++i) {
      if (!c.history.has_list(i)) continue;
      const int to = (group_mask >> i & 1u) ? merged_at : target[static_cast<std::size_t>(i)];
      bits |= 1u << to;
    }
    cells.push_back({CaptureHistory{bits}, c.count});
  }
  return CaptureDataset(std::move(labels), cells);
}

CaptureDataset parse_dataset_csv(std::istream& in) {
  std::string line;
  std::vector<std::string> header;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    header = split_csv_line(t);
    break;
  }
  if (header.empty()) throw DataError("empty CSV input");
  if (header.back() != "count") throw DataError("last CSV column must be named 'count'");
  std::vector<std::string> labels(header.begin(), header.end() - 1);
  check_num_lists(labels.size());
  {
    std::set<std::string> seen;
    for (const auto& l : labels)
      if (!seen.insert(l).second) throw DataError("duplicate column name '" + l + "'");
  }

  std::vector<Cell> cells;
  const std::size_t t = labels.size();
  while (std::getline(in, line)) {
    ++lineno;
    const auto row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto fields = split_csv_line(row);
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (fields.size() != t + 1)
      throw DataError(where + "expected " + std::to_string(t + 1) + " fields, got " + std::to_string(fields.size()));
    std::uint32_t bits = 0;
    for (std::size_t i = 0; i < t; ++i) {
      if (fields[i] == "1") bits |= 1u << i;
      else if (fields[i] != "0") throw DataError(where + "indicator must be 0 or 1, got '" + fields[i] + "'");
    }
    Count count = 0;
    const auto& f = fields.back();
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), count);
    if (ec != std::errc{} || ptr != f.data() + f.size()) throw DataError(where + "invalid count '" + f + "'");
    if (count < 0) throw DataError(where + "negative count");
    if (bits == 0 && count > 0) throw DataError(where + "all-zero capture history with a positive count");
    cells.push_back({CaptureHistory{bits}, count});
  }
  return CaptureDataset(std::move(labels), cells);
}

CaptureDataset parse_dataset_csv_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const CaptureDataset& d) {
  const int t = d.num_lists();
  for (const auto& l : d.labels()) out << l << ',';
  out << "count\n";
  for (const auto& c : d.observed_cells()) {
    for (int i = 0; i < t; ++i) out << (c.history.has_list(i) ? '1' : '0') << ',';
    out << c.count << '\n';
  }
}

std::string dataset_to_json(const CaptureDataset& d) {
  nlohmann::ordered_json j;
  j["labels"] = d.labels();
  auto cells = nlohmann::ordered_json::array();
  for (const auto& c : d.observed_cells()) {
    std::vector<std::string> hist;
    for (int i = 0; i < d.num_lists(); ++i)
      if (c.history.has_list(i)) hist.push_back(d.labels()[static_cast<std::size_t>(i)]);
    cells.push_back({{"history", hist}, {"count", c.count}});
  }
  j["cells"] = std::move(cells);
  return j.dump(2);
}

}  // namespace smse
