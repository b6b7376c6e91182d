#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "smse/dataset.hpp"
#include "smse/estimability.hpp"
#include "smse/fit.hpp"
#include "smse/model.hpp"

namespace smse {

inline constexpr double kDefaultThreshold = 0.02;

/// min(P[X <= n], P[X >= n]) for X ~ Poisson(lambda). Both tails include the
/// point mass at n. Equals exp(-lambda) for n = 0.
double poisson_two_tail(Count n, double lambda);

/// Significance of a two-list parameter: fit the model without it and compare
/// N*_pair with its fitted Poisson expectation. Returns 0 when the reduced
/// model has no MLE (the parameter cannot be removed). Throws Unidentifiable
/// if the reduced model is unidentifiable.
double p_value(const CaptureDataset& d, const ModelSpec& spec, ListPair pair, const FitOptions& opts = {});

struct CandidateEval {
  ListPair pair;
  std::optional<double> p;  // empty when blocked
  Verdict verdict = Verdict::ok;
};

struct StepwiseRound {
  std::vector<CandidateEval> candidates;
  std::optional<ListPair> chosen;  // empty on the stopping round
};

struct StepwiseTrail {
  std::vector<StepwiseRound> rounds;
  ModelSpec final_spec{3};
};

struct StepwiseResult {
  ModelSpec spec{3};
  StepwiseTrail trail;
  FitResult fit;
};

/// Forward stepwise selection from the main-effects model. Each round adds
/// the candidate pair with the smallest p-value if it is <= threshold;
/// candidates whose addition is not estimable are blocked. Ties within 1e-12
/// go to the lexicographically smallest pair. Throws NonexistentMle when the
/// main-effects model itself is not estimable.
StepwiseResult stepwise(const CaptureDataset& d, double threshold, const FitOptions& opts = {});

struct MainEffects {};
struct FixedModel {
  ModelSpec spec;
};
struct Stepwise {
  double threshold = kDefaultThreshold;
};
using EstimationMethod = std::variant<MainEffects, FixedModel, Stepwise>;

struct Estimate {
  FitResult fit;
  std::optional<StepwiseTrail> trail;
};

Estimate estimate_population(const CaptureDataset& d, const EstimationMethod& method, const FitOptions& opts = {});

/// Threshold convention of the simulation study: 0 -> main effects,
/// 1 -> full model, otherwise stepwise.
EstimationMethod method_for_threshold(double threshold, int t);

}  // namespace smse
