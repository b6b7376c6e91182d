#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smse/dataset.hpp"
#include "smse/model.hpp"

namespace smse {

/// s_max above this is treated as strictly positive.
inline constexpr double kExistenceEpsilon = 1e-9;

enum class Verdict { ok, nonexistent_mle, unidentifiable };

std::string to_string(Verdict v);

struct EstimabilityReport {
  double s_max = 0.0;
  bool exists = false;
  bool identifiable = false;
  Verdict verdict = Verdict::nonexistent_mle;
};

/// Optimum of: maximize s subject to A'x = N*, x_w >= s for every retained
/// cell w. The extended MLE exists iff the optimum is strictly positive.
double existence_lp(const ReducedProblem& r);
double existence_lp(const CaptureDataset& d, const ModelSpec& spec);

/// Overlap indicator J (J_ij = 1 iff lists i and j share an individual) and
/// the trace of its cube, i.e. six times the number of fully overlapping
/// triples.
long long overlap_triangle_trace(const CaptureDataset& d);

/// False only for the full two-list model on data in which every triple of
/// lists contains a non-overlapping pair.
bool identifiability(const CaptureDataset& d, const ModelSpec& spec);

/// Column rank of the reduced design, computed directly.
int design_rank(const ReducedProblem& r);

EstimabilityReport check_model(const CaptureDataset& d, const ModelSpec& spec);

struct ModelFailure {
  std::vector<ListPair> pairs;  // full pair set of the failing model
  std::vector<ListPair> removed_overlapping;
  Verdict verdict = Verdict::nonexistent_mle;
  double s_max = 0.0;
};

struct AuditRow {
  std::vector<ListPair> pairs;
  double s_max = 0.0;
  Verdict verdict = Verdict::ok;
};

struct AllModelsAudit {
  std::int64_t tested = 0;         // LPs solved in total
  std::int64_t initial_sweep = 0;  // LPs in the 2^M sweep
  std::vector<ListPair> nonoverlapping;
  std::vector<ModelFailure> failures;
  std::vector<AuditRow> rows;  // every model tested, sweep order then descent
  bool all_ok = true;
};

struct AuditOptions {
  int max_nonoverlapping = 24;
  int threads = 1;
};

/// Checks every possible choice of two-list parameters by testing the 2^M
/// models containing all overlapping pairs and, for each failure, descending
/// through removals of overlapping pairs. Throws DataError if M exceeds the
/// configured limit.
AllModelsAudit check_all_models(const CaptureDataset& d, const AuditOptions& opts = {});

}  // namespace smse
