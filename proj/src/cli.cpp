#include "smse/cli.hpp"

#include <algorithm>
#include <fstream>

#include <CLI11.hpp>

#include "smse/builtin.hpp"
#include "smse/errors.hpp"
#include "smse/report.hpp"

namespace smse {

namespace {

struct Config {
  std::string data;
  double pthresh = kDefaultThreshold;
  std::string pairs;
  std::string model;  // main | full | stepwise; empty = subcommand default
  int nboot = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> levels = {0.80, 0.95};
  int threads = 1;
  std::string format;  // empty: json, or csv for simulate
  std::string dump_replicates;
  // simulate
  int nsims = 0;
  std::vector<double> scenario_models = {0.0};
  std::vector<double> est_thresholds = kStudyThresholds;
  bool full_study = false;
  std::vector<double> probs = {0.3, 0.3, 0.3};
  double pop = 1000.0;
};

CaptureDataset load(const std::string& data) {
  if (data.empty()) throw DataError("--data is required");
  const auto names = builtin_dataset_names();
  if (std::find(names.begin(), names.end(), data) != names.end()) return builtin_dataset(data);
  std::ifstream in(data);
  if (!in) throw DataError("cannot open '" + data + "' (not a file or builtin dataset name)");
  return parse_dataset_csv(in);
}

EstimationMethod method_of(const Config& c, const CaptureDataset& d, const std::string& fallback) {
  if (!c.pairs.empty()) {
    if (!c.model.empty() && c.model != "pairs") throw DataError("--pairs and --model are mutually exclusive");
    return FixedModel{ModelSpec(d.num_lists(), parse_pairs(c.pairs, d.labels()))};
  }
  const auto m = c.model.empty() ? fallback : c.model;
  if (m == "main") return MainEffects{};
  if (m == "full") return FixedModel{ModelSpec::full(d.num_lists())};
  if (m == "stepwise") return Stepwise{c.pthresh};
  throw DataError("--model must be main, full or stepwise");
}

std::string method_name(const EstimationMethod& m) {
  if (std::holds_alternative<MainEffects>(m)) return "main";
  if (std::holds_alternative<Stepwise>(m)) return "stepwise";
  return "fixed";
}

ModelSpec spec_of(const Config& c, const CaptureDataset& d) {
  const auto m = method_of(c, d, "main");
  if (const auto* f = std::get_if<FixedModel>(&m)) return f->spec;
  if (std::holds_alternative<MainEffects>(m)) return ModelSpec::main_effects(d.num_lists());
  throw DataError("this subcommand needs --pairs or --model main|full");
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

void print_fit_table(std::ostream& out, const FitResult& f) {
  out << "model: " << (f.spec.pairs().empty() ? "main effects" : pairs_to_string(f.spec.pairs(), f.labels, ", "))
      << '\n';
  out << "observed: " << f.observed_total << '\n';
  out << "dark figure: " << format_fixed(f.dark_figure, 2) << '\n';
  out << "estimate: " << format_fixed(f.population_estimate, 2) << '\n';
  if (!f.infinite_params.empty())
    out << "infinite parameters: " << pairs_to_string(f.infinite_params, f.labels, ", ") << '\n';
}

void print_bootstrap_table(std::ostream& out, const BootstrapResult& b) {
  out << "seed: " << b.seed << '\n';
  out << "bootstrap replicates: " << b.n_requested << " (redrawn " << b.n_failed << ")\n";
  out << "z0: " << format_fixed(b.z0, 4) << "  a: " << format_fixed(b.a, 4) << '\n';
  for (const auto& iv : b.intervals)
    out << format_fixed(100 * iv.level, 0) << "% BCa interval: (" << format_fixed(iv.lo, 1) << ", "
        << format_fixed(iv.hi, 1) << ")" << (iv.clamped ? " [clamped]" : "") << '\n';
}

void validate(const Config& c) {
  if (!(c.pthresh >= 0.0 && c.pthresh <= 1.0)) throw DataError("--pthresh must lie in [0, 1]");
  for (double l : c.levels)
    if (!(l > 0.0 && l < 1.0)) throw DataError("--levels must lie in (0, 1)");
  if (c.threads < 1) throw DataError("--threads must be at least 1");
  if (c.format != "json" && c.format != "csv" && c.format != "table")
    throw DataError("--format must be json, csv or table");
}

BootstrapResult run_bootstrap(const Config& c, const CaptureDataset& d, const EstimationMethod& m,
                              std::ostream& err) {
  if (c.nboot < 1) throw DataError("--nboot must be at least 1");
  BootstrapOptions o;
  o.method = m;
  o.n_boot = c.nboot;
  o.levels = c.levels;
  o.seed = c.seed;
  o.threads = c.threads;
  auto b = bootstrap_estimate(d, o);
  for (const auto& w : b.warnings) err << "warning: " << w << '\n';
  if (!c.dump_replicates.empty()) {
    std::ofstream rep(c.dump_replicates);
    if (!rep) throw DataError("cannot write '" + c.dump_replicates + "'");
    rep.precision(17);
    for (double r : b.replicates) rep << r << '\n';
  }
  return b;
}

int cmd_fit(const Config& c, std::ostream& out) {
  const auto d = load(c.data);
  const auto f = fit(d, spec_of(c, d));
  if (c.format == "table") print_fit_table(out, f);
  else emit(out, to_json(f));
  return 0;
}

int cmd_stepwise(const Config& c, std::ostream& out) {
  const auto d = load(c.data);
  const auto s = stepwise(d, c.pthresh);
  if (c.format == "table") {
    for (std::size_t r = 0; r < s.trail.rounds.size(); ++r) {
      const auto& round = s.trail.rounds[r];
      out << "round " << r + 1 << ": "
          << (round.chosen ? "added " + pair_label(*round.chosen, d.labels()) : std::string("stop")) << '\n';
    }
    print_fit_table(out, s.fit);
  } else {
    emit(out, {{"pthresh", c.pthresh},
               {"model", Json(to_json(s.fit)["model"])},
               {"estimate", s.fit.population_estimate},
               {"trail", to_json(s.trail, d.labels())},
               {"fit", to_json(s.fit)}});
  }
  return 0;
}

int cmd_estimate(const Config& c, std::ostream& out, std::ostream& err) {
  const auto d = load(c.data);
  const auto m = method_of(c, d, "stepwise");
  const auto e = estimate_population(d, m);
  std::optional<BootstrapResult> b;
  if (c.nboot > 0) b = run_bootstrap(c, d, m, err);
  if (c.format == "table") {
    print_fit_table(out, e.fit);
    if (b) print_bootstrap_table(out, *b);
    return 0;
  }
  Json j = {{"method", method_name(m)}};
  if (std::holds_alternative<Stepwise>(m)) j["pthresh"] = c.pthresh;
  j["model"] = to_json(e.fit)["model"];
  j["estimate"] = e.fit.population_estimate;
  if (b) {
    j["seed"] = b->seed;
    j["bootstrap"] = to_json(*b);
  }
  j["fit"] = to_json(e.fit);
  if (e.trail) j["trail"] = to_json(*e.trail, d.labels());
  emit(out, j);
  return 0;
}

int cmd_bootstrap(const Config& c, std::ostream& out, std::ostream& err) {
  const auto d = load(c.data);
  const auto m = method_of(c, d, "stepwise");
  const auto b = run_bootstrap(c, d, m, err);
  if (c.format == "table") {
    out << "point estimate: " << format_fixed(b.point, 2) << '\n';
    print_bootstrap_table(out, b);
  } else {
    emit(out, to_json(b));
  }
  return 0;
}

int cmd_check(const Config& c, std::ostream& out) {
  const auto d = load(c.data);
  const auto spec = spec_of(c, d);
  const auto r = check_model(d, spec);
  if (c.format == "table") {
    out << "s_max: " << r.s_max << "\nverdict: " << to_string(r.verdict) << '\n';
  } else {
    emit(out, to_json(r, spec, d.labels()));
  }
  return r.verdict == Verdict::ok ? 0 : 2;
}

int cmd_check_all(const Config& c, std::ostream& out) {
  const auto d = load(c.data);
  AuditOptions o;
  o.threads = c.threads;
  const auto a = check_all_models(d, o);
  if (c.format == "csv") {
    write_audit_csv(out, a, d.labels());
  } else if (c.format == "table") {
    out << "non-overlapping pairs: " << a.nonoverlapping.size() << '\n'
        << "linear programs solved: " << a.tested << " (initial sweep " << a.initial_sweep << ")\n"
        << (a.all_ok ? "every model is estimable and identifiable" : "failing models:") << '\n';
    for (const auto& f : a.failures)
      out << "  [" << pairs_to_string(f.pairs, d.labels(), ", ") << "] " << to_string(f.verdict) << '\n';
  } else {
    emit(out, to_json(a, d.labels()));
  }
  return a.all_ok ? 0 : 2;
}

int cmd_threshold_study(const Config& c, std::ostream& out, std::ostream& err) {
  int nsims = c.nsims > 0 ? c.nsims : (c.full_study ? 1000 : 200);
  std::vector<double> models = c.full_study ? std::vector<double>{0.0, 0.001, 0.05, 1.0} : c.scenario_models;
  for (double t : c.est_thresholds)
    if (!(t >= 0.0 && t <= 1.0)) throw DataError("--thresholds must lie in [0, 1]");
  const auto scenarios = study_scenarios(models);
  const auto r = threshold_study(scenarios, nsims, c.est_thresholds, c.seed, c.threads);
  for (const auto& w : r.warnings) err << "warning: " << w << '\n';
  if (c.format == "json") {
    Json j = {{"seed", c.seed}, {"n_sims", nsims}};
    j.update(to_json(r));
    emit(out, j);
  } else {
    out << "# seed " << c.seed << '\n';
    write_threshold_csv(out, r);
  }
  return 0;
}

int cmd_deviance_qq(const Config& c, std::ostream& out, std::ostream& err) {
  const int nsims = c.nsims > 0 ? c.nsims : 10000;
  const auto s = deviance_qq_study(c.probs, c.pop, nsims, c.seed, c.threads);
  if (s.n_dropped > 0) err << "warning: " << s.n_dropped << " realizations had no main-effects MLE and were dropped\n";
  out << "# seed " << c.seed << '\n';
  write_deviance_csv(out, s);
  return 0;
}

int cmd_datasets(const Config& c, std::ostream& out) {
  if (c.data.empty()) {
    for (const auto& n : builtin_dataset_names()) out << n << '\n';
    return 0;
  }
  const auto d = load(c.data);
  if (c.format == "json") out << Json::parse(dataset_to_json(d)).dump(2) << '\n';
  else write_dataset_csv(out, d);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Multiple systems estimation for sparse capture-recapture data", "smse"};
  app.require_subcommand(1);

  auto add_data = [&](CLI::App* s) { s->add_option("--data", c.data, "builtin dataset name or CSV path"); };
  auto add_common = [&](CLI::App* s) {
    s->add_option("--threads", c.threads, "worker threads (results do not depend on it)");
    s->add_option("--format", c.format, "json, csv or table");
  };
  auto add_model = [&](CLI::App* s) {
    s->add_option("--pairs", c.pairs, "two-list effects, e.g. A:B,C:D");
    s->add_option("--model", c.model, "main, full or stepwise");
  };
  auto add_boot = [&](CLI::App* s) {
    s->add_option("--nboot", c.nboot, "bootstrap replicates");
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--levels", c.levels, "confidence levels")->delimiter(',');
    s->add_option("--dump-replicates", c.dump_replicates, "write replicate estimates, one per line");
  };

  auto* fit_cmd = app.add_subcommand("fit", "fit one model");
  add_data(fit_cmd), add_model(fit_cmd), add_common(fit_cmd);
  auto* step_cmd = app.add_subcommand("stepwise", "stepwise model selection");
  add_data(step_cmd), add_common(step_cmd);
  step_cmd->add_option("--pthresh", c.pthresh, "p-value threshold");
  auto* est_cmd = app.add_subcommand("estimate", "point estimate with BCa intervals");
  add_data(est_cmd), add_model(est_cmd), add_boot(est_cmd), add_common(est_cmd);
  est_cmd->add_option("--pthresh", c.pthresh, "p-value threshold");
  auto* check_cmd = app.add_subcommand("check", "existence and identifiability of one model");
  add_data(check_cmd), add_model(check_cmd), add_common(check_cmd);
  auto* all_cmd = app.add_subcommand("check-all", "audit every possible model");
  add_data(all_cmd), add_common(all_cmd);
  auto* boot_cmd = app.add_subcommand("bootstrap", "BCa bootstrap of the estimation pipeline");
  add_data(boot_cmd), add_model(boot_cmd), add_boot(boot_cmd), add_common(boot_cmd);
  boot_cmd->add_option("--pthresh", c.pthresh, "p-value threshold");
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo studies");
  sim_cmd->require_subcommand(1);
  auto* ts_cmd = sim_cmd->add_subcommand("threshold-study", "log-MSE by selection threshold");
  add_common(ts_cmd);
  ts_cmd->add_option("--seed", c.seed, "random seed");
  ts_cmd->add_option("--nsims", c.nsims, "realizations per scenario (default 200, or 1000 with --full)");
  ts_cmd->add_option("--scenario-models", c.scenario_models, "thresholds defining the scenario models")
      ->delimiter(',');
  ts_cmd->add_option("--thresholds", c.est_thresholds, "estimation thresholds")->delimiter(',');
  ts_cmd->add_flag("--full", c.full_study, "all 28 scenarios at 1000 realizations");
  auto* qq_cmd = sim_cmd->add_subcommand("deviance-qq", "deviance reductions against chi-squared(1)");
  add_common(qq_cmd);
  qq_cmd->add_option("--seed", c.seed, "random seed");
  qq_cmd->add_option("--nsims", c.nsims, "realizations (default 10000)");
  qq_cmd->add_option("--probs", c.probs, "three capture probabilities")->delimiter(',');
  qq_cmd->add_option("--pop", c.pop, "expected population size");
  auto* data_cmd = app.add_subcommand("datasets", "list or dump builtin datasets");
  add_data(data_cmd), add_common(data_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  if (c.format.empty()) c.format = sim_cmd->parsed() ? "csv" : "json";

  try {
    validate(c);
    if (fit_cmd->parsed()) return cmd_fit(c, out);
    if (step_cmd->parsed()) return cmd_stepwise(c, out);
    if (est_cmd->parsed()) return cmd_estimate(c, out, err);
    if (check_cmd->parsed()) return cmd_check(c, out);
    if (all_cmd->parsed()) return cmd_check_all(c, out);
    if (boot_cmd->parsed()) return cmd_bootstrap(c, out, err);
    if (ts_cmd->parsed()) return cmd_threshold_study(c, out, err);
    if (qq_cmd->parsed()) return cmd_deviance_qq(c, out, err);
    if (data_cmd->parsed()) return cmd_datasets(c, out);
  } catch (const EstimabilityError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace smse
