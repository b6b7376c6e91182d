#pragma once

#include <string>
#include <vector>

#include "smse/dataset.hpp"
#include "smse/model.hpp"

namespace smse {

enum class FitStart {
  intercept_only,  // alpha_null = log(m / cells), everything else 0
  data_driven,     // weighted least squares of log(N + 1/2) on the design
};

struct FitOptions {
  FitStart start = FitStart::data_driven;
  int max_iterations = 100;
  double score_tol = 1e-8;       // max |score component|
  double rel_loglik_tol = 1e-10;  // |l_k - l_{k-1}| / max(1, |l_k|)
  double rank_tol = 1e-10;       // relative pivot threshold for rank detection
  bool check_existence = true;
};

struct Coefficient {
  CaptureHistory param;
  double value = 0.0;
};

/// Maximum likelihood fit of a Poisson log-linear model, extended so that
/// non-overlapping pair parameters take the value -infinity.
struct FitResult {
  ModelSpec spec{3};
  std::vector<std::string> labels;
  std::vector<Coefficient> coefficients;  // finite parameters, canonical order, [0] is the intercept
  std::vector<ListPair> infinite_params;
  std::vector<CaptureHistory> cells;      // retained cells
  std::vector<double> fitted_means;       // aligned with cells
  std::vector<double> observed;           // aligned with cells
  Count observed_total = 0;
  double loglik = 0.0;  // sum N log mu - mu over retained cells
  double deviance = 0.0;
  double dark_figure = 0.0;
  double population_estimate = 0.0;
  int iterations = 0;
  bool converged = false;

  double coefficient(CaptureHistory param) const;  // -inf for infinite pairs; throws if absent
};

/// Throws NonexistentMle, Unidentifiable, or NonConvergence.
FitResult fit(const CaptureDataset& d, const ModelSpec& spec, const FitOptions& opts = {});

/// Estimated expected value of N*_h: the sum of fitted means over retained
/// cells containing h. Cells zeroed by infinite parameters contribute 0.
double fitted_marginal(const FitResult& f, CaptureHistory h);

}  // namespace smse
