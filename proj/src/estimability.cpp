#include "smse/estimability.hpp"

#include <algorithm>
#include <stdexcept>

#include "smse/errors.hpp"
#include "smse/parallel.hpp"
#include "smse/simplex.hpp"

namespace smse {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ok: return "ok";
    case Verdict::nonexistent_mle: return "nonexistent_mle";
    case Verdict::unidentifiable: return "unidentifiable";
  }
  return "unknown";
}

double existence_lp(const ReducedProblem& r) {
  // Substitute x = s + u with u >= 0. Since x = N, s = min N is feasible and
  // counts are nonnegative, restricting s >= 0 leaves the optimum unchanged.
  const auto cells = r.design.rows();
  const auto params = r.design.cols();
  Eigen::MatrixXd A(params, cells + 1);
  A.leftCols(cells) = r.design.transpose();
  A.col(cells) = r.design.colwise().sum().transpose();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cells + 1);
  c(cells) = 1.0;
  const auto res = simplex_maximize(A, r.sufficient, c);
  if (res.status != LpStatus::optimal) {
    // x = N, s = min N is always feasible and s <= m / |cells| bounds the
    // objective, so anything else is a solver defect.
    throw std::logic_error("existence LP did not reach an optimum");
  }
  return std::max(0.0, res.objective);
}

double existence_lp(const CaptureDataset& d, const ModelSpec& spec) { return existence_lp(reduce(d, spec)); }

long long overlap_triangle_trace(const CaptureDataset& d) {
  const int t = d.num_lists();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(t, t);
  for (auto p : all_pairs(t))
    if (marginal_total(d, p.history()) > 0) J(p.i, p.j) = J(p.j, p.i) = 1.0;
  return static_cast<long long>(std::llround((J * J * J).trace()));
}

bool identifiability(const CaptureDataset& d, const ModelSpec& spec) {
  if (!spec.is_full()) return true;
  return overlap_triangle_trace(d) > 0;
}

int design_rank(const ReducedProblem& r) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(r.design);
  qr.setThreshold(1e-10);
  return static_cast<int>(qr.rank());
}

EstimabilityReport check_model(const CaptureDataset& d, const ModelSpec& spec) {
  EstimabilityReport rep;
  rep.s_max = existence_lp(d, spec);
  rep.exists = rep.s_max > kExistenceEpsilon;
  rep.identifiable = identifiability(d, spec);
  if (!rep.exists) rep.verdict = Verdict::nonexistent_mle;
  else if (!rep.identifiable) rep.verdict = Verdict::unidentifiable;
  else rep.verdict = Verdict::ok;
  return rep;
}

namespace {

std::vector<ListPair> subset_pairs(const std::vector<ListPair>& pool, std::uint64_t mask) {
  std::vector<ListPair> out;
  for (std::size_t k = 0; k < pool.size(); ++k)
    if (mask >> k & 1u) out.push_back(pool[k]);
  return out;
}

struct Descent {
  const CaptureDataset& d;
  const std::vector<ListPair>& overlapping;
  std::vector<ModelFailure> failures;
  std::vector<AuditRow> rows;
  std::int64_t tested = 0;

  // Removal sets are explored in increasing pair-index order. By monotonicity
  // every subset of a failing removal set also fails, so each failing set is
  // reached through its canonical chain of failing prefixes.
  void explore(const std::vector<ListPair>& base, std::vector<int>& removed, int next) {
    for (int k = next; k < static_cast<int>(overlapping.size()); ++k) {
      removed.push_back(k);
      std::vector<ListPair> pairs = base;
      std::vector<ListPair> removed_pairs;
      for (int idx : removed) removed_pairs.push_back(overlapping[static_cast<std::size_t>(idx)]);
      std::erase_if(pairs, [&](ListPair p) {
        return std::find(removed_pairs.begin(), removed_pairs.end(), p) != removed_pairs.end();
      });
      const ModelSpec spec(d.num_lists(), pairs);
      const auto rep = check_model(d, spec);
      ++tested;
      rows.push_back({spec.pairs(), rep.s_max, rep.verdict});
      if (rep.verdict != Verdict::ok) {
        failures.push_back({spec.pairs(), removed_pairs, rep.verdict, rep.s_max});
        explore(base, removed, k + 1);
      }
      removed.pop_back();
    }
  }
};

}  // namespace

AllModelsAudit check_all_models(const CaptureDataset& d, const AuditOptions& opts) {
  const int t = d.num_lists();
  AllModelsAudit audit;
  audit.nonoverlapping = nonoverlapping_pairs(d);
  std::vector<ListPair> overlapping;
  for (auto p : all_pairs(t))
    if (marginal_total(d, p.history()) > 0) overlapping.push_back(p);

  const auto M = static_cast<int>(audit.nonoverlapping.size());
  if (M > opts.max_nonoverlapping) {
    throw DataError("check-all: " + std::to_string(M) + " non-overlapping pairs (" +
                    pairs_to_string(audit.nonoverlapping, d.labels(), ",") + ") would require 2^" +
                    std::to_string(M) + " linear programs; limit is 2^" + std::to_string(opts.max_nonoverlapping));
  }

  const std::uint64_t n_models = std::uint64_t{1} << M;
  std::vector<EstimabilityReport> sweep(n_models);
  parallel_for(n_models, opts.threads, [&](std::size_t s) {
    auto pairs = overlapping;
    const auto extra = subset_pairs(audit.nonoverlapping, s);
    pairs.insert(pairs.end(), extra.begin(), extra.end());
    sweep[s] = check_model(d, ModelSpec(t, std::move(pairs)));
  });
  audit.initial_sweep = static_cast<std::int64_t>(n_models);
  audit.tested = audit.initial_sweep;

  Descent descent{d, overlapping, {}, {}, 0};
  for (std::uint64_t s = 0; s < n_models; ++s) {
    auto pairs = overlapping;
    const auto extra = subset_pairs(audit.nonoverlapping, s);
    pairs.insert(pairs.end(), extra.begin(), extra.end());
    const ModelSpec spec(t, pairs);
    audit.rows.push_back({spec.pairs(), sweep[s].s_max, sweep[s].verdict});
    if (sweep[s].verdict == Verdict::ok) continue;
    descent.failures.push_back({spec.pairs(), {}, sweep[s].verdict, sweep[s].s_max});
    std::vector<int> removed;
    descent.explore(spec.pairs(), removed, 0);
  }
  audit.tested += descent.tested;
  audit.rows.insert(audit.rows.end(), descent.rows.begin(), descent.rows.end());
  audit.failures = std::move(descent.failures);
  audit.all_ok = audit.failures.empty();
  return audit;
}

}  // namespace smse
