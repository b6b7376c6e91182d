#include "smse/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "smse/errors.hpp"
#include "smse/parallel.hpp"

namespace smse {

namespace {

const boost::math::normal kStdNormal;

double phi(double x) { return boost::math::cdf(kStdNormal, x); }
double phi_inv(double p) { return boost::math::quantile(kStdNormal, p); }

// Point estimate for a resample, or nullopt when it is not estimable.
std::optional<double> try_estimate(const CaptureDataset& d, const EstimationMethod& method, const FitOptions& fo) {
  try {
    if (!check_model(d, ModelSpec::main_effects(d.num_lists())).exists) return std::nullopt;
    return estimate_population(d, method, fo).fit.population_estimate;
  } catch (const EstimabilityError&) {
    return std::nullopt;
  } catch (const NonConvergence&) {
    return std::nullopt;
  }
}

}  // namespace

CaptureDataset bootstrap_sample(const CaptureDataset& d, Philox4x32& rng) {
  const auto cells = d.observed_cells();
  std::vector<double> weights;
  weights.reserve(cells.size());
  for (const auto& c : cells) weights.push_back(static_cast<double>(c.count));
  const auto draw = sample_multinomial(d.total(), weights, rng);
  std::vector<Cell> out;
  out.reserve(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) out.push_back({cells[k].history, draw[k]});
  return CaptureDataset(d.labels(), out);
}

double weighted_acceleration(std::span<const double> weights, std::span<const double> values, bool& degenerate) {
  double wsum = 0.0, mean = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    wsum += weights[k];
    mean += weights[k] * values[k];
  }
  mean /= wsum;
  double s2 = 0.0, s3 = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double dev = mean - values[k];
    s2 += weights[k] * dev * dev;
    s3 += weights[k] * dev * dev * dev;
  }
  degenerate = !(s2 > 0.0);
  if (degenerate) return 0.0;
  return s3 / (6.0 * std::pow(s2, 1.5));
}

JackknifeResult weighted_jackknife(const CaptureDataset& d, const EstimationMethod& method, int threads,
                                   const FitOptions& fit_opts) {
  const auto cells = d.observed_cells();
  JackknifeResult out;
  out.leave_one_out.resize(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t k) {
    const auto& c = cells[k];
    const auto reduced = d.with_count(c.history, c.count - 1);
    out.leave_one_out[k] = {c.history, c.count, estimate_population(reduced, method, fit_opts).fit.population_estimate};
  });
  std::vector<double> w, v;
  double total = 0.0;
  for (const auto& j : out.leave_one_out) {
    w.push_back(static_cast<double>(j.weight));
    v.push_back(j.estimate);
    out.theta_dot += static_cast<double>(j.weight) * j.estimate;
    total += static_cast<double>(j.weight);
  }
  out.theta_dot /= total;
  out.a_hat = weighted_acceleration(w, v, out.degenerate);
  return out;
}

double bias_correction(std::span<const double> replicates, double point) {
  const auto R = static_cast<double>(replicates.size());
  double below = 0.0;
  for (double r : replicates) {
    if (r < point) below += 1.0;
    else if (r == point) below += 0.5;
  }
  const double frac = std::clamp(below / R, 0.5 / R, 1.0 - 0.5 / R);
  return phi_inv(frac);
}

double empirical_quantile(std::span<const double> sorted, double p) {
  const auto R = static_cast<double>(sorted.size());
  const double h = p * (R + 1.0);
  if (h <= 1.0) return sorted.front();
  if (h >= R) return sorted.back();
  const auto k = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(k);
  return sorted[k - 1] + frac * (sorted[k] - sorted[k - 1]);
}

Interval bca_interval(std::span<const double> replicates, double z0, double a, double level) {
  if (replicates.empty()) throw std::invalid_argument("bca_interval: no replicates");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bca_interval: level must be in (0, 1)");
  std::vector<double> sorted(replicates.begin(), replicates.end());
  std::sort(sorted.begin(), sorted.end());
  const auto R = static_cast<double>(sorted.size());
  const double lo_bound = 1.0 / (R + 1.0);
  const double hi_bound = R / (R + 1.0);

  Interval iv;
  iv.level = level;
  auto adjust = [&](double tail) {
    const double z = z0 + phi_inv(tail);
    const double denom = 1.0 - a * z;
    if (!(denom > 0.0)) {
      iv.clamped = true;
      return z > 0.0 ? hi_bound : lo_bound;
    }
    return phi(z0 + z / denom);
  };
  iv.alpha_lo = adjust((1.0 - level) / 2.0);
  iv.alpha_hi = adjust(1.0 - (1.0 - level) / 2.0);
  iv.lo = empirical_quantile(sorted, iv.alpha_lo);
  iv.hi = empirical_quantile(sorted, iv.alpha_hi);
  if (iv.lo > iv.hi) std::swap(iv.lo, iv.hi);
  return iv;
}

BootstrapResult bootstrap_estimate(const CaptureDataset& d, const BootstrapOptions& opts) {
  if (opts.n_boot < 1) throw std::invalid_argument("bootstrap needs at least one replicate");
  BootstrapResult res;
  res.seed = opts.seed;
  res.n_requested = opts.n_boot;
  res.point = estimate_population(d, opts.method, opts.fit).fit.population_estimate;

  const auto n = static_cast<std::size_t>(opts.n_boot);
  res.replicates.assign(n, 0.0);
  std::vector<int> failures(n, 0);
  std::atomic<int> total_failures{0};
  parallel_for(n, opts.threads, [&](std::size_t r) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      // Redraws use stream indices beyond n_boot, fixed by (r, attempt).
      auto rng = substream(opts.seed, StreamDomain::bootstrap, r + attempt * n);
      const auto sample = bootstrap_sample(d, rng);
      if (const auto est = try_estimate(sample, opts.method, opts.fit)) {
        res.replicates[r] = *est;
        return;
      }
      ++failures[r];
      if (++total_failures > opts.n_boot)
        throw std::runtime_error("bootstrap aborted: more than n_boot resamples were not estimable");
    }
  });
  for (int f : failures) res.n_failed += f;
  if (res.n_failed > opts.n_boot / 100)
    res.warnings.push_back(std::to_string(res.n_failed) + " of " + std::to_string(opts.n_boot + res.n_failed) +
                           " bootstrap resamples were not estimable and were redrawn");

  const auto jk = weighted_jackknife(d, opts.method, opts.threads, opts.fit);
  res.a = jk.a_hat;
  res.jackknife_degenerate = jk.degenerate;
  if (jk.degenerate) res.warnings.push_back("jackknife values have zero spread; acceleration set to 0");

  res.z0 = bias_correction(res.replicates, res.point);
  for (double level : opts.levels) {
    res.intervals.push_back(bca_interval(res.replicates, res.z0, res.a, level));
    if (res.intervals.back().clamped)
      res.warnings.push_back("BCa adjustment singular at level " + std::to_string(level) + "; percentile clamped");
  }
  return res;
}

}  // namespace smse
