#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "smse/bootstrap.hpp"
#include "smse/estimability.hpp"
#include "smse/fit.hpp"
#include "smse/inference.hpp"
#include "smse/simulation.hpp"

namespace smse {

using Json = nlohmann::ordered_json;

/// Numbers stay numbers; only infinite coefficients become "-inf"/"inf".
Json number_or_inf(double v);

Json to_json(const FitResult& f);
Json to_json(const EstimabilityReport& r, const ModelSpec& spec, const std::vector<std::string>& labels);
Json to_json(const StepwiseTrail& trail, const std::vector<std::string>& labels);
Json to_json(const BootstrapResult& b);
Json to_json(const AllModelsAudit& a, const std::vector<std::string>& labels);
Json to_json(const ThresholdStudyResult& r);

/// One row per tested model: pairs;s_max;verdict.
void write_audit_csv(std::ostream& out, const AllModelsAudit& a, const std::vector<std::string>& labels);
/// dataset,model,<thresholds...> rows followed by a "mean" row.
void write_threshold_csv(std::ostream& out, const ThresholdStudyResult& r);
/// Sorted reductions against chi-squared(1) quantiles at (i - 1/2) / n.
void write_deviance_csv(std::ostream& out, const DevianceStudy& s);

/// Fixed-notation rendering used by the table output.
std::string format_fixed(double v, int digits);

}  // namespace smse
