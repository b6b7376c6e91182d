#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "smse/dataset.hpp"
#include "smse/history.hpp"

namespace smse {

/// Parameter set of a log-linear model: the intercept and all t main effects
/// are implicit; `pairs` lists the included two-list effects. Pairs are kept
/// sorted and unique.
class ModelSpec {
 public:
  ModelSpec(int t, std::vector<ListPair> pairs = {});

  static ModelSpec main_effects(int t) { return ModelSpec(t); }
  static ModelSpec full(int t) { return ModelSpec(t, all_pairs(t)); }

  int num_lists() const { return t_; }
  const std::vector<ListPair>& pairs() const { return pairs_; }
  int num_params() const { return 1 + t_ + static_cast<int>(pairs_.size()); }

  bool contains(ListPair p) const;
  bool is_full() const { return static_cast<int>(pairs_.size()) == t_ * (t_ - 1) / 2; }
  ModelSpec with(ListPair p) const;
  ModelSpec without(ListPair p) const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

 private:
  int t_;
  std::vector<ListPair> pairs_;
};

/// Parses "A:B,C:D" against dataset labels; "AB" is accepted when it splits
/// into two labels in exactly one way. Empty string -> no pairs.
std::vector<ListPair> parse_pairs(const std::string& text, const std::vector<std::string>& labels);

std::string pairs_to_string(const std::vector<ListPair>& pairs, const std::vector<std::string>& labels,
                            const std::string& sep = ";");

/// The model after pushing non-overlapping pair parameters to -infinity and
/// dropping the cells they zero out.
struct ReducedProblem {
  std::vector<CaptureHistory> theta;        // retained parameters, canonical order, theta[0] = null
  std::vector<CaptureHistory> omega;        // retained cells, canonical order
  std::vector<ListPair> infinite_params;    // parameters estimated as -infinity
  Eigen::MatrixXd design;                   // design(w, k) = 1 iff theta[k] subset of omega[w]
  Eigen::VectorXd counts;                   // N_w over omega
  Eigen::VectorXd sufficient;               // N*_theta over theta
};

ReducedProblem reduce(const CaptureDataset& d, const ModelSpec& spec);

}  // namespace smse
