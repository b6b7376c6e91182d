#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "smse/builtin.hpp"
#include "smse/inference.hpp"
#include "smse/simulation.hpp"

using namespace smse;

namespace {

constexpr CaptureHistory H(std::uint32_t b) { return CaptureHistory{b}; }

}  // namespace

TEST_CASE("realizations conserve the population size") {
  const auto f = fit(builtin_dataset("uk"), ModelSpec::main_effects(6));
  const auto batch = simulate_from_fit(f, 200, 5);
  CHECK(batch.n_pop == f.observed_total + std::llround(f.dark_figure));
  CHECK(batch.realizations.size() + static_cast<std::size_t>(batch.n_removed) == 200);
  CHECK(batch.n_removed < 10);  // under 5%
  for (std::size_t r = 0; r < batch.realizations.size(); ++r)
    CHECK(batch.realizations[r].total() + batch.dark_figures[r] == batch.n_pop);
}

TEST_CASE("cell means match the fitted probabilities") {
  const auto f = fit(builtin_dataset("uk"), ModelSpec::main_effects(6));
  const int requested = 3000;
  const auto batch = simulate_from_fit(f, requested, 8);
  REQUIRE(batch.n_removed < requested / 50);  // filtering barely perturbs the means
  const auto n = static_cast<double>(batch.realizations.size());
  const double total = f.dark_figure + std::accumulate(f.fitted_means.begin(), f.fitted_means.end(), 0.0);
  for (std::size_t k = 0; k < f.cells.size(); k += 3) {
    double mean = 0;
    for (const auto& d : batch.realizations) mean += static_cast<double>(d.count(f.cells[k])) / n;
    const double p = f.fitted_means[k] / total;
    const double np = static_cast<double>(batch.n_pop) * p;
    CHECK(std::abs(mean - np) < 3 * std::sqrt(np * (1 - p) / n) + 1e-9);
  }
}

TEST_CASE("removal pass is idempotent") {
  const auto f = fit(builtin_dataset("new_orleans"), ModelSpec::main_effects(8));
  const auto batch = simulate_from_fit(f, 40, 3);
  CHECK(batch.n_removed > 0);  // sparse lists: the full model often fails
  const auto again = remove_nonestimable(batch);
  CHECK(again.realizations == batch.realizations);
  CHECK(again.n_removed == batch.n_removed);
  for (const auto& d : batch.realizations) CHECK(passes_endpoint_checks(d));
}

TEST_CASE("estimates across thresholds") {
  const auto f = fit(builtin_dataset("western"), ModelSpec::main_effects(5));
  const auto batch = simulate_from_fit(f, 12, 17);
  const std::vector<double> th = {0.0, 1e-300, 0.02, 1.0};
  const auto est = estimate_over_thresholds(batch, th);
  REQUIRE(est.size() == batch.realizations.size());
  for (std::size_t r = 0; r < est.size(); ++r) {
    const auto& d = batch.realizations[r];
    CHECK(est[r][0] == fit(d, ModelSpec::main_effects(5)).population_estimate);
    CHECK(est[r][1] == est[r][0]);  // nothing is that significant
    CHECK(est[r][2] == stepwise(d, 0.02).fit.population_estimate);
    CHECK(est[r][3] == fit(d, ModelSpec::full(5)).population_estimate);
  }
}

TEST_CASE("log-MSE of a single realization") {
  const std::vector<double> e = {120.0};
  CHECK(log_mse(e, 100) == doctest::Approx(std::log(std::pow(std::log(1.2), 2))));

  const std::vector<Scenario> one = {{"uk", 0.0}};
  const std::vector<double> th = {0.0, 1.0};
  const auto r = threshold_study(one, 1, th, 4);
  REQUIRE(r.log_mse.size() == 1);
  CHECK(r.column_means == r.log_mse[0]);
}

TEST_CASE("threshold study shape and determinism") {
  const auto sc = study_scenarios(std::vector<double>{0.0, 1.0});
  CHECK(sc.size() == 14);
  const std::vector<Scenario> two = {{"western", 0.0}, {"uk5", 0.02}};
  const std::vector<double> th = {0.0, 0.02, 1.0};
  const auto a = threshold_study(two, 8, th, 99, 1);
  const auto b = threshold_study(two, 8, th, 99, 3);
  CHECK(a.log_mse == b.log_mse);
  REQUIRE(a.log_mse.size() == 2);
  for (std::size_t k = 0; k < th.size(); ++k)
    CHECK(a.column_means[k] == doctest::Approx((a.log_mse[0][k] + a.log_mse[1][k]) / 2));
}

TEST_CASE("threshold study skips scenarios that are not estimable") {
  const std::vector<Scenario> bad = {{"artificial3", 1.0}, {"western", 0.0}};
  const std::vector<double> th = {0.0};
  const auto r = threshold_study(bad, 3, th, 1);
  CHECK(r.scenarios.size() == 1);
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("deviance reduction against the oracle, including the -inf branch") {
  // N*_{AB} = 0: the larger model sends A:B to -infinity.
  const CaptureDataset zero({"A", "B", "C"}, std::vector<Cell>{{H(1), 4}, {H(2), 9}, {H(4), 30}, {H(5), 2}, {H(6), 3}});
  const CaptureDataset plain({"A", "B", "C"},
                             std::vector<Cell>{{H(1), 40}, {H(2), 30}, {H(4), 30}, {H(3), 9}, {H(5), 6}, {H(6), 8}, {H(7), 2}});
  for (const auto* d : {&zero, &plain}) {
    const auto small = oracle::ipf(*d, ModelSpec::main_effects(3));
    const auto big = oracle::ipf(*d, ModelSpec(3, {ListPair(0, 1)}));
    CHECK(deviance_reduction(*d) == doctest::Approx(2 * (big.loglik - small.loglik)).epsilon(1e-8));
  }
  CHECK(deviance_reduction(zero) > 0);
}

TEST_CASE("deviance study bookkeeping") {
  const std::vector<double> sparse = {0.01, 0.04, 0.2};
  const auto s = deviance_qq_study(sparse, 1000, 300, 6);
  CHECK(s.reductions.size() + static_cast<std::size_t>(s.n_dropped) == 300);
  CHECK(s.n_infinite > 0);
  for (double x : s.reductions) CHECK(x >= 0);
  const auto t = deviance_qq_study(sparse, 1000, 300, 6, 4);
  CHECK(t.reductions == s.reductions);
  const std::vector<double> bad = {0.0, 0.3, 0.3};
  CHECK_THROWS(deviance_qq_study(bad, 1000, 10, 1));
}
