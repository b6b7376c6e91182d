#include "smse/simulation.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

#include "smse/builtin.hpp"
#include "smse/errors.hpp"
#include "smse/estimability.hpp"
#include "smse/inference.hpp"
#include "smse/parallel.hpp"

namespace smse {

bool passes_endpoint_checks(const CaptureDataset& d) {
  const int t = d.num_lists();
  if (check_model(d, ModelSpec::main_effects(t)).verdict != Verdict::ok) return false;
  return check_model(d, ModelSpec::full(t)).verdict == Verdict::ok;
}

SimulationBatch remove_nonestimable(SimulationBatch batch) {
  SimulationBatch out;
  out.labels = batch.labels;
  out.n_pop = batch.n_pop;
  out.n_requested = batch.n_requested;
  out.n_removed = batch.n_removed;
  for (std::size_t r = 0; r < batch.realizations.size(); ++r) {
    if (passes_endpoint_checks(batch.realizations[r])) {
      out.realizations.push_back(std::move(batch.realizations[r]));
      out.dark_figures.push_back(batch.dark_figures[r]);
    } else {
      ++out.n_removed;
    }
  }
  return out;
}

SimulationBatch simulate_from_fit(const FitResult& f, int n_sims, std::uint64_t seed, int threads) {
  if (!f.converged) throw std::invalid_argument("simulate_from_fit needs a converged fit");
  SimulationBatch batch;
  batch.labels = f.labels;
  batch.n_requested = n_sims;
  // Half-away-from-zero rounding of the dark figure.
  batch.n_pop = f.observed_total + static_cast<Count>(std::llround(f.dark_figure));

  std::vector<double> weights;
  weights.push_back(f.dark_figure);
  weights.insert(weights.end(), f.fitted_means.begin(), f.fitted_means.end());

  const auto n = static_cast<std::size_t>(n_sims);
  std::vector<std::optional<CaptureDataset>> draws(n);
  std::vector<Count> dark(n, 0);
  parallel_for(n, threads, [&](std::size_t r) {
    auto rng = substream(seed, StreamDomain::simulation, r);
    const auto counts = sample_multinomial(batch.n_pop, weights, rng);
    dark[r] = counts[0];
    std::vector<Cell> cells;
    for (std::size_t w = 0; w < f.cells.size(); ++w) cells.push_back({f.cells[w], counts[w + 1]});
    try {
      CaptureDataset d(f.labels, cells);
      if (passes_endpoint_checks(d)) draws[r] = std::move(d);
    } catch (const DataError&) {
      // Nobody observed: not estimable.
    }
  });
  for (std::size_t r = 0; r < n; ++r) {
    if (draws[r]) {
      batch.realizations.push_back(std::move(*draws[r]));
      batch.dark_figures.push_back(dark[r]);
    } else {
      ++batch.n_removed;
    }
  }
  return batch;
}

std::vector<std::vector<double>> estimate_over_thresholds(const SimulationBatch& batch,
                                                          std::span<const double> thresholds, int threads) {
  std::vector<std::vector<double>> out(batch.realizations.size(), std::vector<double>(thresholds.size()));
  parallel_for(batch.realizations.size(), threads, [&](std::size_t r) {
    const auto& d = batch.realizations[r];
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      out[r][k] = estimate_population(d, method_for_threshold(thresholds[k], d.num_lists())).fit.population_estimate;
    }
  });
  return out;
}

double log_mse(std::span<const double> estimates, Count n_pop) {
  const double truth = std::log(static_cast<double>(n_pop));
  double s = 0.0;
  for (double e : estimates) {
    const double diff = std::log(e) - truth;
    s += diff * diff;
  }
  return std::log(s / static_cast<double>(estimates.size()));
}

std::vector<Scenario> study_scenarios(std::span<const double> model_thresholds) {
  std::vector<Scenario> out;
  for (double m : model_thresholds)
    for (const auto& name : kStudyDatasets) out.push_back({name, m});
  return out;
}

ThresholdStudyResult threshold_study(std::span<const Scenario> scenarios, int n_sims,
                                     std::span<const double> est_thresholds, std::uint64_t seed, int threads) {
  ThresholdStudyResult res;
  res.est_thresholds.assign(est_thresholds.begin(), est_thresholds.end());
  for (const auto& sc : scenarios) {
    const auto d = builtin_dataset(sc.dataset);
    std::optional<FitResult> source;
    try {
      source = estimate_population(d, method_for_threshold(sc.model_threshold, d.num_lists())).fit;
    } catch (const EstimabilityError& e) {
      res.warnings.push_back("skipping scenario " + sc.dataset + "/" + std::to_string(sc.model_threshold) + ": " +
                             e.what());
      continue;
    }
    const auto batch = simulate_from_fit(*source, n_sims, seed, threads);
    if (batch.realizations.empty()) {
      res.warnings.push_back("skipping scenario " + sc.dataset + ": every realization was removed");
      continue;
    }
    const auto est = estimate_over_thresholds(batch, est_thresholds, threads);
    std::vector<double> row;
    for (std::size_t k = 0; k < est_thresholds.size(); ++k) {
      std::vector<double> col;
      for (const auto& e : est) col.push_back(e[k]);
      row.push_back(log_mse(col, batch.n_pop));
    }
    res.scenarios.push_back(sc);
    res.n_pop.push_back(batch.n_pop);
    res.n_used.push_back(static_cast<int>(batch.realizations.size()));
    res.log_mse.push_back(std::move(row));
  }
  res.column_means.assign(est_thresholds.size(), 0.0);
  for (const auto& row : res.log_mse)
    for (std::size_t k = 0; k < row.size(); ++k) res.column_means[k] += row[k];
  for (auto& c : res.column_means) c /= static_cast<double>(std::max<std::size_t>(1, res.log_mse.size()));
  return res;
}

double deviance_reduction(const CaptureDataset& d) {
  const int t = d.num_lists();
  const auto small = fit(d, ModelSpec::main_effects(t));
  const auto big = fit(d, ModelSpec(t, {ListPair(0, 1)}));
  // Cells dropped from the larger model carry N = 0 and mu = 0, contributing
  // nothing, so the two log-likelihoods are directly comparable.
  return std::max(0.0, 2.0 * (big.loglik - small.loglik));
}

DevianceStudy deviance_qq_study(std::span<const double> capture_probs, double expected_pop, int n_sims,
                                std::uint64_t seed, int threads) {
  const int t = static_cast<int>(capture_probs.size());
  if (t != 3) throw std::invalid_argument("deviance study uses exactly three lists");
  for (double p : capture_probs)
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("capture probabilities must lie in (0, 1)");

  const auto histories = all_histories(t);
  std::vector<double> means;
  for (auto h : histories) {
    double pr = 1.0;
    for (int i = 0; i < t; ++i) pr *= h.has_list(i) ? capture_probs[static_cast<std::size_t>(i)]
                                                    : 1.0 - capture_probs[static_cast<std::size_t>(i)];
    means.push_back(expected_pop * pr);
  }

  const auto n = static_cast<std::size_t>(n_sims);
  std::vector<std::optional<double>> red(n);
  std::vector<char> infinite(n, 0);
  parallel_for(n, threads, [&](std::size_t r) {
    auto rng = substream(seed, StreamDomain::deviance, r);
    std::vector<Cell> cells;
    for (std::size_t k = 0; k < histories.size(); ++k)
      cells.push_back({histories[k], std::poisson_distribution<Count>(means[k])(rng)});
    try {
      const CaptureDataset d({"L1", "L2", "L3"}, cells);
      if (!check_model(d, ModelSpec::main_effects(t)).exists) return;
      infinite[r] = marginal_total(d, ListPair(0, 1).history()) == 0;
      red[r] = deviance_reduction(d);
    } catch (const DataError&) {
    } catch (const EstimabilityError&) {
    }
  });
  DevianceStudy out;
  out.n_requested = n_sims;
  for (std::size_t r = 0; r < n; ++r) {
    if (red[r]) {
      out.reductions.push_back(*red[r]);
      out.n_infinite += infinite[r];
    } else {
      ++out.n_dropped;
    }
  }
  return out;
}

}  // namespace smse
