#include "smse/model.hpp"

#include <algorithm>

#include "smse/errors.hpp"

namespace smse {

ModelSpec::ModelSpec(int t, std::vector<ListPair> pairs) : t_(t), pairs_(std::move(pairs)) {
  if (t < kMinLists || t > kMaxLists) throw DataError("model list count out of range");
  for (auto p : pairs_)
    if (p.i < 0 || p.j >= t || p.i == p.j) throw DataError("model pair references an invalid list");
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

bool ModelSpec::contains(ListPair p) const { return std::binary_search(pairs_.begin(), pairs_.end(), p); }

ModelSpec ModelSpec::with(ListPair p) const {
  auto pairs = pairs_;
  pairs.push_back(p);
  return ModelSpec(t_, std::move(pairs));
}

ModelSpec ModelSpec::without(ListPair p) const {
  auto pairs = pairs_;
  pairs.erase(std::remove(pairs.begin(), pairs.end(), p), pairs.end());
  return ModelSpec(t_, std::move(pairs));
}

std::vector<ListPair> parse_pairs(const std::string& text, const std::vector<std::string>& labels) {
  std::vector<ListPair> out;
  auto index_of = [&](const std::string& l) {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == l) return static_cast<int>(i);
    throw DataError("unknown list label '" + l + "'");
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const auto tok = text.substr(start, end - start);
    if (!tok.empty()) {
      int a = -1, b = -1;
      if (const auto colon = tok.find(':'); colon != std::string::npos) {
        a = index_of(tok.substr(0, colon));
        b = index_of(tok.substr(colon + 1));
      } else {
        // "AB" shorthand: accept only if exactly one split names two labels.
        int found = 0;
        for (std::size_t k = 1; k < tok.size(); ++k) {
          const auto x = std::find(labels.begin(), labels.end(), tok.substr(0, k));
          const auto y = std::find(labels.begin(), labels.end(), tok.substr(k));
          if (x != labels.end() && y != labels.end()) {
            a = static_cast<int>(x - labels.begin());
            b = static_cast<int>(y - labels.begin());
            ++found;
          }
        }
        if (found != 1) throw DataError("pair '" + tok + "' must be written as A:B");
      }
      if (a == b) throw DataError("pair '" + tok + "' names the same list twice");
      out.emplace_back(a, b);
    }
    start = end + 1;
  }
  return out;
}

std::string pairs_to_string(const std::vector<ListPair>& pairs, const std::vector<std::string>& labels,
                            const std::string& sep) {
  std::string out;
  for (auto p : pairs) {
    if (!out.empty()) out += sep;
    out += pair_label(p, labels);
  }
  return out;
}

ReducedProblem reduce(const CaptureDataset& d, const ModelSpec& spec) {
  const int t = d.num_lists();
  if (spec.num_lists() != t) throw DataError("model and dataset disagree on the number of lists");
  const auto& marg = d.marginal_totals();

  ReducedProblem r;
  r.theta.emplace_back(0u);
  for (int i = 0; i < t; ++i) r.theta.push_back(CaptureHistory::single(i));
  std::uint32_t removed_mask_any = 0;
  std::vector<CaptureHistory> dead;
  for (auto p : spec.pairs()) {
    if (marg[p.history().bits] == 0) {
      r.infinite_params.push_back(p);
      dead.push_back(p.history());
      removed_mask_any |= p.history().bits;
    } else {
      r.theta.push_back(p.history());
    }
  }
  std::stable_sort(r.theta.begin(), r.theta.end(), history_less);

  for (auto w : all_histories(t)) {
    bool keep = true;
    if (w.bits & removed_mask_any) {
      for (auto h : dead)
        if (w.contains(h)) {
          keep = false;
          break;
        }
    }
    if (keep) r.omega.push_back(w);
  }

  const auto rows = static_cast<Eigen::Index>(r.omega.size());
  const auto cols = static_cast<Eigen::Index>(r.theta.size());
  r.design.setZero(rows, cols);
  r.counts.resize(rows);
  r.sufficient.resize(cols);
  for (Eigen::Index w = 0; w < rows; ++w) {
    const auto hw = r.omega[static_cast<std::size_t>(w)];
    r.counts(w) = static_cast<double>(d.count(hw));
    for (Eigen::Index k = 0; k < cols; ++k)
      if (hw.contains(r.theta[static_cast<std::size_t>(k)])) r.design(w, k) = 1.0;
  }
  for (Eigen::Index k = 0; k < cols; ++k)
    r.sufficient(k) = static_cast<double>(marg[r.theta[static_cast<std::size_t>(k)].bits]);
  return r;
}

}  // namespace smse
