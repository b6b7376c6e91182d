#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "smse/dataset.hpp"
#include "smse/inference.hpp"
#include "smse/rng.hpp"

namespace smse {

/// Resample m individuals with replacement: counts ~ Multinomial(m, N / m)
/// over the observed histories.
CaptureDataset bootstrap_sample(const CaptureDataset& d, Philox4x32& rng);

/// Acceleration from weighted jackknife values:
///   a = sum w (mean - v)^3 / (6 [sum w (mean - v)^2]^{3/2}),
/// mean = sum w v / sum w. Sets `degenerate` and returns 0 when the spread
/// vanishes.
double weighted_acceleration(std::span<const double> weights, std::span<const double> values, bool& degenerate);

struct JackknifeValue {
  CaptureHistory history;
  Count weight = 0;
  double estimate = 0.0;  // estimate with this history's count reduced by one
};

struct JackknifeResult {
  double a_hat = 0.0;
  double theta_dot = 0.0;
  std::vector<JackknifeValue> leave_one_out;
  bool degenerate = false;
};

/// One estimate per distinct observed history, weighted by its count.
JackknifeResult weighted_jackknife(const CaptureDataset& d, const EstimationMethod& method, int threads = 1,
                                   const FitOptions& fit_opts = {});

/// Phi^{-1} of the fraction of replicates below the point estimate, counting
/// exact ties as one half. The fraction is clamped to [1/(2R), 1 - 1/(2R)].
double bias_correction(std::span<const double> replicates, double point);

/// Type-6 empirical quantile: h = p (R + 1), linear between order statistics,
/// clamped to the sample range. `sorted` must be ascending.
double empirical_quantile(std::span<const double> sorted, double p);

struct Interval {
  double level = 0.95;
  double lo = 0.0;
  double hi = 0.0;
  double alpha_lo = 0.0;  // adjusted percentile used for lo
  double alpha_hi = 0.0;
  bool clamped = false;   // the BCa adjustment hit its singularity
};

Interval bca_interval(std::span<const double> replicates, double z0, double a, double level);

struct BootstrapOptions {
  EstimationMethod method = Stepwise{kDefaultThreshold};
  int n_boot = 1000;
  std::vector<double> levels = {0.80, 0.95};
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  FitOptions fit;
};

struct BootstrapResult {
  double point = 0.0;
  std::vector<double> replicates;  // index-ordered, length n_boot
  double z0 = 0.0;
  double a = 0.0;
  std::vector<Interval> intervals;
  int n_requested = 0;
  int n_failed = 0;
  std::uint64_t seed = 0;
  bool jackknife_degenerate = false;
  std::vector<std::string> warnings;
};

/// BCa bootstrap of the whole estimation pipeline. Resamples whose
/// main-effects model (or the chosen method) is not estimable are redrawn
/// from fresh substreams; throws std::runtime_error if more than n_boot
/// redraws are needed.
BootstrapResult bootstrap_estimate(const CaptureDataset& d, const BootstrapOptions& opts);

}  // namespace smse
