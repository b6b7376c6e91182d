#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smse/dataset.hpp"
#include "smse/fit.hpp"
#include "smse/rng.hpp"

namespace smse {

struct SimulationBatch {
  std::vector<std::string> labels;
  Count n_pop = 0;
  std::vector<CaptureDataset> realizations;
  std::vector<Count> dark_figures;  // aligned with realizations
  int n_requested = 0;
  int n_removed = 0;
};

/// True when the realization supports both endpoint models: main effects
/// estimable, and the full model estimable and identifiable.
bool passes_endpoint_checks(const CaptureDataset& d);

/// Draws n_sims populations of size n_pop = m + round(dark figure) from the
/// fitted cell probabilities (null cell included), then drops realizations
/// failing passes_endpoint_checks.
SimulationBatch simulate_from_fit(const FitResult& f, int n_sims, std::uint64_t seed, int threads = 1);

/// Removal pass on its own; idempotent.
SimulationBatch remove_nonestimable(SimulationBatch batch);

/// estimates[r][k]: population estimate for realization r at thresholds[k]
/// (0 -> main effects, 1 -> full model, otherwise stepwise).
std::vector<std::vector<double>> estimate_over_thresholds(const SimulationBatch& batch,
                                                          std::span<const double> thresholds, int threads = 1);

/// log of the mean over realizations of (log estimate - log n_pop)^2.
double log_mse(std::span<const double> estimates, Count n_pop);

struct Scenario {
  std::string dataset;      // builtin dataset name
  double model_threshold;   // 0 main, 1 full, otherwise stepwise threshold
};

struct ThresholdStudyResult {
  std::vector<Scenario> scenarios;     // scenarios actually run
  std::vector<Count> n_pop;
  std::vector<int> n_used;             // realizations surviving the filter
  std::vector<double> est_thresholds;
  std::vector<std::vector<double>> log_mse;  // scenario x threshold
  std::vector<double> column_means;
  std::vector<std::string> warnings;
};

inline const std::vector<double> kStudyThresholds = {0, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 1};
inline const std::vector<std::string> kStudyDatasets = {"netherlands", "netherlands5", "new_orleans", "new_orleans5",
                                                        "uk", "uk5", "western"};

/// The seven datasets under one scenario model threshold.
std::vector<Scenario> study_scenarios(std::span<const double> model_thresholds);

ThresholdStudyResult threshold_study(std::span<const Scenario> scenarios, int n_sims,
                                     std::span<const double> est_thresholds, std::uint64_t seed, int threads = 1);

struct DevianceStudy {
  std::vector<double> reductions;  // in simulation order
  int n_requested = 0;
  int n_dropped = 0;
  int n_infinite = 0;  // realizations where the pair parameter was -infinity
};

/// Three independent lists with the given capture probabilities; Poisson
/// cell counts with mean expected_pop * P(history). Records the deviance
/// reduction from adding the pair {0, 1} to the main-effects model.
DevianceStudy deviance_qq_study(std::span<const double> capture_probs, double expected_pop, int n_sims,
                                std::uint64_t seed, int threads = 1);

/// Deviance reduction 2 (l_big - l_small) between main effects and main
/// effects plus the pair {0, 1}; the pair may be -infinity.
double deviance_reduction(const CaptureDataset& d);

}  // namespace smse
