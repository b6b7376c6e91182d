// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed
// here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "oracles.hpp"
#include "smse/bootstrap.hpp"
#include "smse/builtin.hpp"
#include "smse/cli.hpp"
#include "smse/simulation.hpp"

using namespace smse;

namespace {

constexpr std::uint64_t kSeed = kDefaultSeed;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string cli(std::vector<std::string> args) {
  args.insert(args.begin(), "smse");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return std::to_string(code) + "\n" + out.str();
}

Outcome table3() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto d = builtin_dataset("artificial3");
  const ListPair ab(0, 1), ac(0, 2), bc(1, 2);
  struct Row {
    std::vector<ListPair> pairs;
    double s;
    Verdict v;
  };
  const std::vector<Row> rows = {{{}, 1.2, Verdict::ok},
                                 {{ab}, 0, Verdict::nonexistent_mle},
                                 {{ac}, 3, Verdict::ok},
                                 {{bc}, 3, Verdict::ok},
                                 {{ab, ac}, 0, Verdict::nonexistent_mle},
                                 {{ab, bc}, 0, Verdict::nonexistent_mle},
                                 {{ac, bc}, 6, Verdict::ok},
                                 {{ab, ac, bc}, 6, Verdict::unidentifiable}};
  bool ok = true;
  std::string got;
  for (const auto& r : rows) {
    const auto rep = check_model(d, ModelSpec(3, r.pairs));
    ok = ok && std::abs(rep.s_max - r.s) < 1e-6 && rep.verdict == r.v;
    got += fmt("%g%s ", rep.s_max, rep.verdict == Verdict::ok ? "" : "*");
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 1.0, fmt("s_max = %s(* = not estimable), %.3fs", got.c_str(), secs)};
}

Outcome table1() {
  const auto t0 = std::chrono::steady_clock::now();
  auto sig2 = [](double v) {
    const double scale = std::pow(10.0, 1 - std::floor(std::log10(v)));
    return std::round(v * scale) / scale;
  };
  struct Case {
    const char* data;
    const char* pair;
    double expect;
  };
  const std::vector<Case> cases = {
      {"netherlands", "I:K", 9.1e-4}, {"netherlands", "K:R", 2.1e-5}, {"uk", "LA:GP", 0.13}, {"uk", "LA:NCA", 0.30}};
  bool ok = true;
  std::string got;
  for (const auto& c : cases) {
    const auto d = builtin_dataset(c.data);
    const double p = p_value(d, ModelSpec::full(d.num_lists()), parse_pairs(c.pair, d.labels()).front());
    ok = ok && std::abs(sig2(p) - c.expect) <= 1e-9 * c.expect;
    got += fmt("%s=%.2g ", c.pair, p);
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 5.0, got + fmt("%.2fs", secs)};
}

Outcome point_estimates() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto no = builtin_dataset("new_orleans"), w = builtin_dataset("western");
  const auto a = stepwise(no, 0.02), b = stepwise(no, 0.01);
  const auto c = stepwise(builtin_dataset("new_orleans5"), 0.02);
  const auto e = stepwise(w, 0.02);
  const bool ok = std::round(a.fit.population_estimate) == 1184 && pairs_to_string(a.spec.pairs(), no.labels()) == "D:E" &&
                  b.spec.pairs().empty() && std::round(b.fit.population_estimate) == 997 &&
                  std::round(c.fit.population_estimate) == 1034 && std::round(e.fit.population_estimate) == 2483 &&
                  pairs_to_string(e.spec.pairs(), w.labels()) == "A:E";
  const double secs = seconds_since(t0);
  return {ok && secs < 10.0, fmt("%.1f {%s}, %.1f {}, %.1f, %.1f {%s}, %.2fs", a.fit.population_estimate,
                                 pairs_to_string(a.spec.pairs(), no.labels()).c_str(), b.fit.population_estimate,
                                 c.fit.population_estimate, e.fit.population_estimate,
                                 pairs_to_string(e.spec.pairs(), w.labels()).c_str(), secs)};
}

Outcome bootstrap_intervals() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    const char* data;
    EstimationMethod method;
    double lo, hi;
  };
  const std::vector<Case> cases = {{"new_orleans", Stepwise{0.02}, 717, 1657},
                                   {"western", Stepwise{0.02}, 1293, 3670},
                                   {"new_orleans", MainEffects{}, 644, 1618},
                                   {"new_orleans5", Stepwise{0.02}, 589, 1703}};
  bool ok = true;
  std::string got;
  for (const auto& c : cases) {
    BootstrapOptions o;
    o.method = c.method;
    o.n_boot = 1000;
    o.levels = {0.95};
    o.seed = kSeed;
    const auto b = bootstrap_estimate(builtin_dataset(c.data), o);
    const auto& iv = b.intervals.front();
    const bool lo_ok = std::abs(iv.lo - c.lo) <= 0.10 * c.lo, hi_ok = std::abs(iv.hi - c.hi) <= 0.10 * c.hi;
    ok = ok && lo_ok && hi_ok;
    got += fmt("%s%s (%.0f%s, %.0f%s) vs (%.0f, %.0f); ", c.data, std::holds_alternative<MainEffects>(c.method) ? "/main" : "",
               iv.lo, lo_ok ? "" : " OUT", iv.hi, hi_ok ? "" : " OUT", c.lo, c.hi);
  }
  return {ok, got + fmt("seed %llu, %.1fs", static_cast<unsigned long long>(kSeed), seconds_since(t0))};
}

Outcome audits() {
  bool ok = true;
  std::string got;
  for (const char* name : {"uk", "netherlands", "western", "new_orleans"}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto a = check_all_models(builtin_dataset(name));
    const double secs = seconds_since(t0);
    ok = ok && a.all_ok;
    if (std::string(name) == "uk" || std::string(name) == "netherlands") ok = ok && a.initial_sweep == 4;
    if (std::string(name) == "new_orleans") ok = ok && a.initial_sweep == (1 << 18) && secs <= 600;
    got += fmt("%s all_ok=%d sweep=%lld %.1fs; ", name, a.all_ok, static_cast<long long>(a.initial_sweep), secs);
  }
  return {ok, got};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240601);
  int n_fit = 0, n_audit = 0, n_rank = 0, bad_fit = 0, bad_audit = 0, bad_rank = 0;
  double worst = 0;
  for (int rep = 0; n_fit < 100 || n_audit < 100 || n_rank < 100; ++rep) {
    const int t = 3 + rep % 2;
    const auto d = oracle::random_sparse(rng, t);

    // (b) audit vs exhaustive enumeration
    auto brute = oracle::enumerate_failures(d);
    const auto audit = check_all_models(d);
    std::vector<std::pair<std::vector<ListPair>, std::string>> found;
    for (const auto& f : audit.failures) found.emplace_back(f.pairs, to_string(f.verdict));
    std::sort(brute.begin(), brute.end());
    std::sort(found.begin(), found.end());
    bad_audit += found != brute || audit.all_ok != brute.empty();
    ++n_audit;

    // (c) trace criterion vs direct rank
    bad_rank += identifiability(d, ModelSpec::full(t)) != oracle::full_model_rank_identifiable(d);
    ++n_rank;

    // (a) coefficients vs coordinate ascent
    std::vector<ListPair> chosen;
    for (auto p : all_pairs(t))
      if (rng() % 3 == 0) chosen.push_back(p);
    ModelSpec spec(t, chosen);
    if (check_model(d, spec).verdict != Verdict::ok) spec = ModelSpec::main_effects(t);
    const auto rep_ok = check_model(d, spec);
    if (rep_ok.verdict != Verdict::ok || rep_ok.s_max < 0.5) continue;
    const auto f = fit(d, spec);
    const auto o = oracle::ipf(d, spec);
    bool match = o.converged;
    for (const auto& [bits, value] : o.alpha) {
      const double mine = f.coefficient(CaptureHistory{bits});
      if (std::isinf(value)) {
        match = match && std::isinf(mine) && mine < 0;
      } else {
        worst = std::max(worst, std::abs(mine - value));
        match = match && std::abs(mine - value) <= 1e-5;
      }
    }
    bad_fit += !match;
    ++n_fit;
  }
  return {bad_fit == 0 && bad_audit == 0 && bad_rank == 0,
          fmt("fits %d/%d (max |diff| %.1e), audits %d/%d, rank %d/%d", n_fit - bad_fit, n_fit, worst,
              n_audit - bad_audit, n_audit, n_rank - bad_rank, n_rank)};
}

Outcome petersen() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<Count> u(1, 1000);
  double worst = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const Count na = u(rng), nb = u(rng), nab = u(rng), nc = u(rng);
    const CaptureDataset d({"A", "B", "C"}, std::vector<Cell>{{CaptureHistory{1}, na},
                                                             {CaptureHistory{2}, nb},
                                                             {CaptureHistory{3}, nab},
                                                             {CaptureHistory{4}, nc}});
    const auto f = fit(d, ModelSpec(3, {ListPair(0, 2), ListPair(1, 2)}));
    const double expect = static_cast<double>(na) * static_cast<double>(nb) / static_cast<double>(nab);
    worst = std::max(worst, std::abs(f.dark_figure - expect) / std::max(1.0, expect));
  }
  return {worst <= 1e-8, fmt("200 tables, max relative error %.1e", worst)};
}

Outcome deviance_qq() {
  const auto t0 = std::chrono::steady_clock::now();
  const double chi95 = boost::math::quantile(boost::math::chi_squared(1.0), 0.95);
  auto summary = [&](std::vector<double> probs, double& mean, double& ratio) {
    auto s = deviance_qq_study(probs, 1000, 10000, kSeed);
    std::sort(s.reductions.begin(), s.reductions.end());
    mean = 0;
    for (double x : s.reductions) mean += x / static_cast<double>(s.reductions.size());
    ratio = empirical_quantile(s.reductions, 0.95) / chi95;
  };
  double cm, cr, sm, sr;
  summary({0.3, 0.3, 0.3}, cm, cr);
  summary({0.01, 0.04, 0.2}, sm, sr);
  const bool classic_ok = cm >= 0.9 && cm <= 1.1 && cr >= 0.85 && cr <= 1.15;
  const bool sparse_off = !(sm >= 0.9 && sm <= 1.1) || !(sr >= 0.85 && sr <= 1.15);
  return {classic_ok && sparse_off, fmt("classic mean %.3f q95 ratio %.3f; sparse mean %.3f q95 ratio %.3f; %.1fs", cm,
                                        cr, sm, sr, seconds_since(t0))};
}

Outcome threshold_study_check() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto scenarios = study_scenarios(std::vector<double>{0.0});
  const auto r = threshold_study(scenarios, 200, kStudyThresholds, kSeed);
  const auto worst = std::max_element(r.column_means.begin(), r.column_means.end()) - r.column_means.begin();
  const auto at002 = std::find(kStudyThresholds.begin(), kStudyThresholds.end(), 0.02) - kStudyThresholds.begin();
  const bool ok = r.scenarios.size() == 7 && kStudyThresholds[static_cast<std::size_t>(worst)] == 1.0;
  return {ok, fmt("%zu scenarios; column mean at 1: %.3f, at 0.02: %.3f; worst column %g; %.1fs", r.scenarios.size(),
                  r.column_means.back(), r.column_means[static_cast<std::size_t>(at002)],
                  kStudyThresholds[static_cast<std::size_t>(worst)], seconds_since(t0))};
}

Outcome determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string seed = std::to_string(kSeed);
  std::vector<std::vector<std::string>> runs;
  for (const char* data : {"new_orleans", "western", "new_orleans5"})
    runs.push_back({"bootstrap", "--data", data, "--pthresh", "0.02", "--nboot", "1000", "--seed", seed});
  runs.push_back({"bootstrap", "--data", "new_orleans", "--model", "main", "--nboot", "1000", "--seed", seed});
  runs.push_back({"simulate", "deviance-qq", "--nsims", "10000", "--seed", seed});
  runs.push_back({"simulate", "deviance-qq", "--nsims", "10000", "--probs", "0.01,0.04,0.2", "--seed", seed});
  runs.push_back({"simulate", "threshold-study", "--nsims", "200", "--seed", seed});
  int same = 0;
  for (auto args : runs) {
    const auto a = cli(args);
    const auto again = cli(args);
    args.push_back("--threads");
    args.push_back("4");
    const auto b = cli(args);
    same += a == again && a == b && a.rfind("0\n", 0) == 0;
  }
  return {same == static_cast<int>(runs.size()),
          fmt("%d/%zu invocations byte-identical across repeats and --threads 1 vs 4; %.1fs", same, runs.size(),
              seconds_since(t0))};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "existence LP and identifiability on the artificial table", table3},
      {2, "p-values in the full-pairs context", table1},
      {3, "stepwise point estimates", point_estimates},
      {4, "BCa bootstrap intervals (n_boot 1000)", bootstrap_intervals},
      {5, "all-models audit of the published data", audits},
      {6, "oracle equivalence on random sparse tables", oracle_equivalence},
      {7, "Petersen identity", petersen},
      {8, "deviance reductions against chi-squared(1)", deviance_qq},
      {9, "threshold study, main-effects scenarios x 200", threshold_study_check},
      {10, "determinism across repeats and thread counts", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
