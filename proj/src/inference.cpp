#include "smse/inference.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "smse/errors.hpp"

namespace smse {

double poisson_two_tail(Count n, double lambda) {
  if (n < 0) return 0.0;
  if (lambda <= 0.0) return 1.0;  // degenerate at zero; only n = 0 is reachable
  if (n == 0) return std::exp(-lambda);
  const double k = static_cast<double>(n);
  const double lower = boost::math::gamma_q(k + 1.0, lambda);  // P[X <= n]
  const double upper = boost::math::gamma_p(k, lambda);        // P[X >= n]
  return std::clamp(std::min(lower, upper), 0.0, 1.0);
}

double p_value(const CaptureDataset& d, const ModelSpec& spec, ListPair pair, const FitOptions& opts) {
  const auto reduced = spec.without(pair);
  const auto rep = check_model(d, reduced);
  if (!rep.exists) return 0.0;
  if (!rep.identifiable) throw Unidentifiable("model without " + pair_label(pair, d.labels()) + " is not identifiable");
  FitOptions o = opts;
  o.check_existence = false;
  const auto f = fit(d, reduced, o);
  return poisson_two_tail(marginal_total(d, pair.history()), fitted_marginal(f, pair.history()));
}

StepwiseResult stepwise(const CaptureDataset& d, double threshold, const FitOptions& opts) {
  const int t = d.num_lists();
  ModelSpec current = ModelSpec::main_effects(t);
  const auto start = check_model(d, current);
  if (start.verdict != Verdict::ok)
    throw NonexistentMle("main-effects model is not estimable (" + to_string(start.verdict) + ")");

  FitOptions o = opts;
  o.check_existence = false;  // every model reached here has passed check_model
  StepwiseResult res{.spec = current, .trail = {}, .fit = fit(d, current, o)};
  while (true) {
    StepwiseRound round;
    std::optional<std::size_t> best;
    for (auto p : all_pairs(t)) {
      if (current.contains(p)) continue;
      const auto candidate = current.with(p);
      const auto rep = check_model(d, candidate);
      CandidateEval ev{p, std::nullopt, rep.verdict};
      if (rep.verdict == Verdict::ok) {
        // (current + p) \ p is the current model, whose fit is in hand.
        ev.p = poisson_two_tail(marginal_total(d, p.history()), fitted_marginal(res.fit, p.history()));
        if (!best || *ev.p < *round.candidates[*best].p - 1e-12) best = round.candidates.size();
      }
      round.candidates.push_back(ev);
    }
    if (best && *round.candidates[*best].p <= threshold) {
      const auto chosen = round.candidates[*best].pair;
      round.chosen = chosen;
      res.trail.rounds.push_back(std::move(round));
      current = current.with(chosen);
      res.fit = fit(d, current, o);
      continue;
    }
    res.trail.rounds.push_back(std::move(round));
    break;
  }
  res.spec = current;
  res.trail.final_spec = current;
  return res;
}

Estimate estimate_population(const CaptureDataset& d, const EstimationMethod& method, const FitOptions& opts) {
  return std::visit(
      [&](const auto& m) -> Estimate {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, MainEffects>) {
          return {fit(d, ModelSpec::main_effects(d.num_lists()), opts), std::nullopt};
        } else if constexpr (std::is_same_v<M, FixedModel>) {
          return {fit(d, m.spec, opts), std::nullopt};
        } else {
          auto sw = stepwise(d, m.threshold, opts);
          return {std::move(sw.fit), std::move(sw.trail)};
        }
      },
      method);
}

EstimationMethod method_for_threshold(double threshold, int t) {
  if (threshold <= 0.0) return MainEffects{};
  if (threshold >= 1.0) return FixedModel{ModelSpec::full(t)};
  return Stepwise{threshold};
}

}  // namespace smse
