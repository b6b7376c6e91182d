#include <doctest.h>

#include <cmath>
#include <numeric>

#include "smse/bootstrap.hpp"
#include "smse/builtin.hpp"
#include "smse/rng.hpp"

using namespace smse;

namespace {

constexpr CaptureHistory H(std::uint32_t b) { return CaptureHistory{b}; }

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using B = Philox4x32::Block;
  CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) == B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("substreams are reproducible and distinct") {
  auto a = substream(42, StreamDomain::bootstrap, 7);
  auto b = substream(42, StreamDomain::bootstrap, 7);
  auto c = substream(42, StreamDomain::bootstrap, 8);
  auto e = substream(42, StreamDomain::simulation, 7);
  int same_c = 0, same_e = 0;
  for (int k = 0; k < 64; ++k) {
    const auto x = a();
    CHECK(x == b());
    same_c += x == c();
    same_e += x == e();
  }
  CHECK(same_c < 2);
  CHECK(same_e < 2);
}

TEST_CASE("multinomial draws") {
  const std::vector<double> w = {5, 0, 3, 2};
  double mean[4] = {};
  const int reps = 4000;
  for (int r = 0; r < reps; ++r) {
    auto rng = substream(1, StreamDomain::simulation, static_cast<std::uint64_t>(r));
    const auto x = sample_multinomial(100, w, rng);
    CHECK(std::accumulate(x.begin(), x.end(), Count{0}) == 100);
    CHECK(x[1] == 0);
    for (int k = 0; k < 4; ++k) mean[k] += static_cast<double>(x[static_cast<std::size_t>(k)]) / reps;
  }
  for (int k : {0, 2, 3}) {
    const double p = w[static_cast<std::size_t>(k)] / 10.0;
    const double se = std::sqrt(100 * p * (1 - p) / reps);
    CHECK(std::abs(mean[k] - 100 * p) < 3 * se);
  }
}

TEST_CASE("bootstrap resamples") {
  const CaptureDataset single({"A", "B", "C"}, std::vector<Cell>{{H(3), 17}});
  auto rng = substream(3, StreamDomain::bootstrap, 0);
  CHECK(bootstrap_sample(single, rng) == single);

  const auto d = builtin_dataset("western");
  const auto cells = d.observed_cells();
  std::vector<double> mean(cells.size(), 0.0);
  const int reps = 2000;
  for (int r = 0; r < reps; ++r) {
    auto g = substream(9, StreamDomain::bootstrap, static_cast<std::uint64_t>(r));
    const auto s = bootstrap_sample(d, g);
    CHECK(s.total() == d.total());
    for (std::size_t k = 0; k < cells.size(); ++k) mean[k] += static_cast<double>(s.count(cells[k].history)) / reps;
  }
  const double m = static_cast<double>(d.total());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const double n = static_cast<double>(cells[k].count);
    const double se = std::sqrt(n * (1 - n / m) / reps);
    CHECK(std::abs(mean[k] - n) < 3 * se + 1e-12);
  }
}

TEST_CASE("weighted acceleration") {
  bool degenerate = false;
  // Hand evaluation: weights (2,1,1), values (1,2,3); mean 7/4.
  const double mean = 7.0 / 4.0;
  const double s2 = 2 * std::pow(mean - 1, 2) + std::pow(mean - 2, 2) + std::pow(mean - 3, 2);
  const double s3 = 2 * std::pow(mean - 1, 3) + std::pow(mean - 2, 3) + std::pow(mean - 3, 3);
  const std::vector<double> w = {2, 1, 1}, v = {1, 2, 3};
  CHECK(weighted_acceleration(w, v, degenerate) == doctest::Approx(s3 / (6 * std::pow(s2, 1.5))));
  CHECK_FALSE(degenerate);

  const std::vector<double> sw = {1, 2, 2, 1}, sv = {-3, -1, 1, 3};
  CHECK(weighted_acceleration(sw, sv, degenerate) == doctest::Approx(0.0));

  const std::vector<double> fw = {3, 4}, fv = {5, 5};
  CHECK(weighted_acceleration(fw, fv, degenerate) == 0.0);
  CHECK(degenerate);

  // Expanding each value into `weight` copies gives the same answer.
  std::vector<double> ones, expanded;
  for (std::size_t k = 0; k < w.size(); ++k)
    for (int c = 0; c < static_cast<int>(w[k]); ++c) ones.push_back(1.0), expanded.push_back(v[k]);
  CHECK(weighted_acceleration(ones, expanded, degenerate) == doctest::Approx(weighted_acceleration(w, v, degenerate)));
}

TEST_CASE("weighted jackknife") {
  const auto d = builtin_dataset("western");
  const auto jk = weighted_jackknife(d, MainEffects{});
  CHECK(jk.leave_one_out.size() == d.observed_cells().size());
  double num = 0;
  for (const auto& j : jk.leave_one_out) {
    num += static_cast<double>(j.weight) * j.estimate;
    const auto direct = fit(d.with_count(j.history, j.weight - 1), ModelSpec::main_effects(5)).population_estimate;
    CHECK(j.estimate == doctest::Approx(direct));
  }
  CHECK(jk.theta_dot == doctest::Approx(num / static_cast<double>(d.total())));
}

TEST_CASE("bias correction") {
  std::vector<double> r(1000);
  std::iota(r.begin(), r.end(), 1.0);
  CHECK(bias_correction(r, 500.5) == doctest::Approx(0.0).epsilon(1e-12));
  // Median point: within the stated bound.
  CHECK(std::abs(bias_correction(r, 500.0)) <= 0.0026);
  // All replicates equal to the point: ties count one half.
  const std::vector<double> same(10, 3.0);
  CHECK(bias_correction(same, 3.0) == doctest::Approx(0.0));
  // All above: clamped, finite.
  const std::vector<double> above(10, 4.0);
  CHECK(std::isfinite(bias_correction(above, 3.0)));
  CHECK(bias_correction(above, 3.0) < 0);
}

TEST_CASE("type-6 quantiles and BCa intervals") {
  std::vector<double> r(1000);
  std::iota(r.begin(), r.end(), 1.0);
  CHECK(empirical_quantile(r, 0.10) == doctest::Approx(100.1));
  CHECK(empirical_quantile(r, 0.90) == doctest::Approx(900.9));
  CHECK(empirical_quantile(r, 0.0001) == 1.0);
  CHECK(empirical_quantile(r, 0.9999) == 1000.0);

  const auto plain = bca_interval(r, 0.0, 0.0, 0.80);
  CHECK(plain.lo == doctest::Approx(100.1));
  CHECK(plain.hi == doctest::Approx(900.9));
  const auto p95 = bca_interval(r, 0.0, 0.0, 0.95);
  CHECK(p95.lo == doctest::Approx(empirical_quantile(r, 0.025)));
  CHECK(p95.hi == doctest::Approx(empirical_quantile(r, 0.975)));

  const auto up = bca_interval(r, 0.2, 0.0, 0.95);
  CHECK(up.lo > p95.lo);
  CHECK(up.hi > p95.hi);

  for (double z0 : {-0.5, 0.0, 0.3})
    for (double a : {-0.05, 0.0, 0.05}) {
      const auto i80 = bca_interval(r, z0, a, 0.80), i95 = bca_interval(r, z0, a, 0.95);
      CHECK(i95.lo <= i80.lo);
      CHECK(i80.hi <= i95.hi);
      CHECK(i80.lo <= i80.hi);
    }

  // 1 - a (z0 + z) <= 0 for the upper tail: clamped and flagged.
  const auto sing = bca_interval(r, 0.0, 0.6, 0.95);
  CHECK(sing.clamped);
  CHECK(sing.lo <= sing.hi);
}

TEST_CASE("bootstrap is deterministic and independent of thread count") {
  const auto d = builtin_dataset("western");
  BootstrapOptions o;
  o.n_boot = 60;
  o.seed = 123;
  const auto a = bootstrap_estimate(d, o);
  o.threads = 3;
  const auto b = bootstrap_estimate(d, o);
  CHECK(a.replicates == b.replicates);
  CHECK(a.z0 == b.z0);
  CHECK(a.a == b.a);
  CHECK(a.intervals[1].lo == b.intervals[1].lo);
  CHECK(a.replicates.size() == 60);
  CHECK(std::round(a.point) == 2483);
  o.seed = 124;
  CHECK(bootstrap_estimate(d, o).replicates != a.replicates);

  // Phi(z0) is the share of replicates below the point, ties counted half.
  double below = 0;
  for (double x : a.replicates) below += x < a.point ? 1.0 : (x == a.point ? 0.5 : 0.0);
  CHECK(0.5 * std::erfc(-a.z0 / std::sqrt(2.0)) == doctest::Approx(below / 60).epsilon(1e-9));
}
