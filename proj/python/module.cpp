// Python bindings. Results cross the boundary as plain dicts built from the
// same JSON the CLI prints, so both front ends agree field for field.

#include <algorithm>
#include <fstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "smse/builtin.hpp"
#include "smse/errors.hpp"
#include "smse/report.hpp"

namespace py = pybind11;
using namespace smse;

namespace {

// Builtin name, path to a CSV file, or CSV text.
CaptureDataset load(const std::string& data) {
  const auto names = builtin_dataset_names();
  if (std::find(names.begin(), names.end(), data) != names.end()) return builtin_dataset(data);
  if (data.find('\n') != std::string::npos) return parse_dataset_csv_string(data);
  std::ifstream in(data);
  if (!in) throw DataError("cannot open '" + data + "' (not a file, CSV text or builtin dataset name)");
  return parse_dataset_csv(in);
}

ModelSpec spec_of(const CaptureDataset& d, const std::string& model, const std::string& pairs) {
  if (!pairs.empty()) return ModelSpec(d.num_lists(), parse_pairs(pairs, d.labels()));
  if (model == "main") return ModelSpec::main_effects(d.num_lists());
  if (model == "full") return ModelSpec::full(d.num_lists());
  throw DataError("model must be 'main' or 'full' (or give pairs)");
}

EstimationMethod method_of(const CaptureDataset& d, const std::string& model, const std::string& pairs,
                           double pthresh) {
  if (!pairs.empty() || model == "full") return FixedModel{spec_of(d, model, pairs)};
  if (model == "main") return MainEffects{};
  if (model == "stepwise") return Stepwise{pthresh};
  throw DataError("model must be 'main', 'full' or 'stepwise'");
}

py::object to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::object estimate_json(const CaptureDataset& d, const Estimate& e) {
  auto j = to_json(e.fit);
  if (e.trail) j["trail"] = to_json(*e.trail, d.labels());
  return to_py(j);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Capture-recapture estimation for sparse multiple-systems data";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<EstimabilityError>(m, "EstimabilityError", PyExc_RuntimeError);
  py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);

  m.def("datasets", &builtin_dataset_names, "Names of the built-in datasets.");
  m.def(
      "dataset", [](const std::string& data) { return to_py(Json::parse(dataset_to_json(load(data)))); },
      py::arg("data"));

  m.def(
      "fit",
      [](const std::string& data, const std::string& model, const std::string& pairs) {
        const auto d = load(data);
        return to_py(to_json(fit(d, spec_of(d, model, pairs))));
      },
      py::arg("data"), py::arg("model") = "main", py::arg("pairs") = "");

  m.def(
      "check_model",
      [](const std::string& data, const std::string& model, const std::string& pairs) {
        const auto d = load(data);
        const auto spec = spec_of(d, model, pairs);
        return to_py(to_json(check_model(d, spec), spec, d.labels()));
      },
      py::arg("data"), py::arg("model") = "main", py::arg("pairs") = "");

  m.def(
      "check_all",
      [](const std::string& data, int threads) {
        const auto d = load(data);
        AuditOptions o;
        o.threads = threads;
        AllModelsAudit a;
        {
          py::gil_scoped_release release;
          a = check_all_models(d, o);
        }
        return to_py(to_json(a, d.labels()));
      },
      py::arg("data"), py::arg("threads") = 1);

  m.def(
      "p_value",
      [](const std::string& data, const std::string& pair, const std::string& model, const std::string& pairs) {
        const auto d = load(data);
        return p_value(d, spec_of(d, model, pairs), parse_pairs(pair, d.labels()).front());
      },
      py::arg("data"), py::arg("pair"), py::arg("model") = "full", py::arg("pairs") = "",
      "Two-tailed p-value of one pair within the given model.");

  m.def(
      "stepwise",
      [](const std::string& data, double pthresh) {
        const auto d = load(data);
        const auto s = stepwise(d, pthresh);
        return estimate_json(d, Estimate{s.fit, s.trail});
      },
      py::arg("data"), py::arg("pthresh") = kDefaultThreshold);

  m.def(
      "estimate",
      [](const std::string& data, const std::string& model, double pthresh, const std::string& pairs) {
        const auto d = load(data);
        return estimate_json(d, estimate_population(d, method_of(d, model, pairs, pthresh)));
      },
      py::arg("data"), py::arg("model") = "stepwise", py::arg("pthresh") = kDefaultThreshold, py::arg("pairs") = "");

  m.def(
      "bootstrap",
      [](const std::string& data, const std::string& model, double pthresh, const std::string& pairs, int n_boot,
         std::vector<double> levels, std::uint64_t seed, int threads) {
        const auto d = load(data);
        BootstrapOptions o;
        o.method = method_of(d, model, pairs, pthresh);
        o.n_boot = n_boot;
        o.levels = std::move(levels);
        o.seed = seed;
        o.threads = threads;
        BootstrapResult b;
        {
          py::gil_scoped_release release;
          b = bootstrap_estimate(d, o);
        }
        auto j = to_json(b);
        j["replicates"] = b.replicates;
        return to_py(j);
      },
      py::arg("data"), py::arg("model") = "stepwise", py::arg("pthresh") = kDefaultThreshold, py::arg("pairs") = "",
      py::arg("n_boot") = 1000, py::arg("levels") = std::vector<double>{0.80, 0.95},
      py::arg("seed") = kDefaultSeed, py::arg("threads") = 1);

  m.def(
      "deviance_qq",
      [](std::vector<double> probs, double pop, int n_sims, std::uint64_t seed, int threads) {
        DevianceStudy s;
        {
          py::gil_scoped_release release;
          s = deviance_qq_study(probs, pop, n_sims, seed, threads);
        }
        Json j;
        j["reductions"] = s.reductions;
        j["n_requested"] = s.n_requested;
        j["n_dropped"] = s.n_dropped;
        j["n_infinite"] = s.n_infinite;
        return to_py(j);
      },
      py::arg("probs") = std::vector<double>{0.3, 0.3, 0.3}, py::arg("pop") = 1000.0, py::arg("n_sims") = 10000,
      py::arg("seed") = kDefaultSeed, py::arg("threads") = 1);

  m.def(
      "threshold_study",
      [](int n_sims, std::vector<double> scenario_models, std::vector<double> thresholds, std::uint64_t seed,
         int threads) {
        ThresholdStudyResult r;
        {
          py::gil_scoped_release release;
          r = threshold_study(study_scenarios(scenario_models), n_sims, thresholds, seed, threads);
        }
        return to_py(to_json(r));
      },
      py::arg("n_sims") = 200, py::arg("scenario_models") = std::vector<double>{0.0},
      py::arg("thresholds") = kStudyThresholds,
      py::arg("seed") = kDefaultSeed, py::arg("threads") = 1);

}
