#include "smse/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <boost/math/distributions/chi_squared.hpp>

namespace smse {

namespace {

std::string param_label(CaptureHistory h, const std::vector<std::string>& labels) {
  if (h.empty()) return "(intercept)";
  std::string out;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    if (!h.has_list(i)) continue;
    if (!out.empty()) out += ':';
    out += labels[static_cast<std::size_t>(i)];
  }
  return out;
}

Json pair_list(const std::vector<ListPair>& pairs, const std::vector<std::string>& labels) {
  Json arr = Json::array();
  for (auto p : pairs) arr.push_back(pair_label(p, labels));
  return arr;
}

// Ten significant digits: compact, and stable across runs.
std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

Json number_or_inf(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return v;
}

std::string format_fixed(double v, int digits) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Json to_json(const FitResult& f) {
  Json coef = Json::array();
  // Canonical order with the infinite pairs slotted in among the finite ones.
  std::vector<std::pair<CaptureHistory, double>> all;
  for (const auto& c : f.coefficients) all.emplace_back(c.param, c.value);
  for (auto p : f.infinite_params) all.emplace_back(p.history(), -INFINITY);
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return history_less(a.first, b.first); });
  for (const auto& [h, v] : all) coef.push_back({{"param", param_label(h, f.labels)}, {"value", number_or_inf(v)}});

  return {
      {"labels", f.labels},
      {"model", pair_list(f.spec.pairs(), f.labels)},
      {"estimate", f.population_estimate},
      {"dark_figure", f.dark_figure},
      {"observed", f.observed_total},
      {"infinite_params", pair_list(f.infinite_params, f.labels)},
      {"coefficients", coef},
      {"loglik", f.loglik},
      {"deviance", f.deviance},
      {"iterations", f.iterations},
      {"converged", f.converged},
  };
}

Json to_json(const EstimabilityReport& r, const ModelSpec& spec, const std::vector<std::string>& labels) {
  return {
      {"model", pair_list(spec.pairs(), labels)},
      {"s_max", r.s_max},
      {"exists", r.exists},
      {"identifiable", r.identifiable},
      {"verdict", to_string(r.verdict)},
  };
}

Json to_json(const StepwiseTrail& trail, const std::vector<std::string>& labels) {
  Json rounds = Json::array();
  for (const auto& round : trail.rounds) {
    Json cands = Json::array();
    for (const auto& c : round.candidates) {
      Json j = {{"pair", pair_label(c.pair, labels)}};
      if (c.p) j["p"] = *c.p;
      else j["blocked"] = to_string(c.verdict);
      cands.push_back(std::move(j));
    }
    rounds.push_back({{"candidates", cands},
                      {"chosen", round.chosen ? Json(pair_label(*round.chosen, labels)) : Json(nullptr)}});
  }
  return {{"rounds", rounds}, {"final_model", pair_list(trail.final_spec.pairs(), labels)}};
}

Json to_json(const BootstrapResult& b) {
  Json ivs = Json::array();
  for (const auto& iv : b.intervals)
    ivs.push_back({{"level", iv.level}, {"lo", iv.lo}, {"hi", iv.hi}, {"clamped", iv.clamped}});
  return {
      {"seed", b.seed},
      {"point", b.point},
      {"n_requested", b.n_requested},
      {"n_failed", b.n_failed},
      {"z0", b.z0},
      {"a", b.a},
      {"jackknife_degenerate", b.jackknife_degenerate},
      {"intervals", ivs},
  };
}

Json to_json(const AllModelsAudit& a, const std::vector<std::string>& labels) {
  Json fails = Json::array();
  for (const auto& f : a.failures)
    fails.push_back({{"model", pair_list(f.pairs, labels)},
                     {"removed_overlapping", pair_list(f.removed_overlapping, labels)},
                     {"verdict", to_string(f.verdict)},
                     {"s_max", f.s_max}});
  return {
      {"all_ok", a.all_ok},
      {"tested", a.tested},
      {"initial_sweep", a.initial_sweep},
      {"nonoverlapping", pair_list(a.nonoverlapping, labels)},
      {"failures", fails},
  };
}

Json to_json(const ThresholdStudyResult& r) {
  Json rows = Json::array();
  for (std::size_t s = 0; s < r.scenarios.size(); ++s)
    rows.push_back({{"dataset", r.scenarios[s].dataset},
                    {"model_threshold", r.scenarios[s].model_threshold},
                    {"n_pop", r.n_pop[s]},
                    {"n_used", r.n_used[s]},
                    {"log_mse", r.log_mse[s]}});
  return {{"thresholds", r.est_thresholds}, {"scenarios", rows}, {"column_means", r.column_means}};
}

void write_audit_csv(std::ostream& out, const AllModelsAudit& a, const std::vector<std::string>& labels) {
  out << "model,s_max,verdict\n";
  for (const auto& row : a.rows)
    out << '"' << pairs_to_string(row.pairs, labels, ";") << "\"," << csv_number(row.s_max) << ','
        << to_string(row.verdict) << '\n';
}

void write_threshold_csv(std::ostream& out, const ThresholdStudyResult& r) {
  out << "dataset,model";
  for (double t : r.est_thresholds) out << ',' << csv_number(t);
  out << '\n';
  for (std::size_t s = 0; s < r.scenarios.size(); ++s) {
    out << r.scenarios[s].dataset << ',' << csv_number(r.scenarios[s].model_threshold);
    for (double v : r.log_mse[s]) out << ',' << csv_number(v);
    out << '\n';
  }
  out << "mean,";
  for (double v : r.column_means) out << ',' << csv_number(v);
  out << '\n';
}

void write_deviance_csv(std::ostream& out, const DevianceStudy& s) {
  auto sorted = s.reductions;
  std::sort(sorted.begin(), sorted.end());
  const boost::math::chi_squared chi1(1.0);
  const auto n = static_cast<double>(sorted.size());
  out << "reduction,chisq1_quantile\n";
  for (std::size_t i = 0; i < sorted.size(); ++i)
    out << csv_number(sorted[i]) << ','
        << csv_number(boost::math::quantile(chi1, (static_cast<double>(i) + 0.5) / n)) << '\n';
}

}  // namespace smse
