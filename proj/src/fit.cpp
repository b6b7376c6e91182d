#include "smse/fit.hpp"

#include <cmath>
#include <limits>

#include "smse/errors.hpp"
#include "smse/estimability.hpp"

namespace smse {

double FitResult::coefficient(CaptureHistory param) const {
  for (const auto& c : coefficients)
    if (c.param == param) return c.value;
  for (auto p : infinite_params)
    if (p.history() == param) return -std::numeric_limits<double>::infinity();
  throw std::out_of_range("parameter not in model");
}

namespace {

double poisson_loglik(const Eigen::VectorXd& y, const Eigen::VectorXd& eta, const Eigen::VectorXd& mu) {
  return y.dot(eta) - mu.sum();
}

}  // namespace

FitResult fit(const CaptureDataset& d, const ModelSpec& spec, const FitOptions& opts) {
  const auto r = reduce(d, spec);
  const auto& X = r.design;
  const auto& y = r.counts;
  const auto n_cells = X.rows();
  const auto n_params = X.cols();

  if (opts.check_existence) {
    const double s_max = existence_lp(r);
    if (!(s_max > kExistenceEpsilon))
      throw NonexistentMle("maximum likelihood estimate does not exist for model {" +
                           pairs_to_string(spec.pairs(), d.labels(), ",") + "}");
  }
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(opts.rank_tol);
    if (qr.rank() < n_params)
      throw Unidentifiable("model {" + pairs_to_string(spec.pairs(), d.labels(), ",") +
                           "} is not identifiable: design has rank " + std::to_string(qr.rank()) + " < " +
                           std::to_string(n_params));
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(n_params);
  if (opts.start == FitStart::data_driven) {
    const Eigen::ArrayXd w = y.array() + 0.5;
    const Eigen::MatrixXd XtW = X.transpose() * w.matrix().asDiagonal();
    beta = (XtW * X).ldlt().solve(XtW * w.log().matrix());
  } else {
    beta(0) = std::log(static_cast<double>(d.total()) / static_cast<double>(n_cells));
  }
  Eigen::VectorXd eta = X * beta;
  Eigen::VectorXd mu = eta.array().exp();
  double ll = poisson_loglik(y, eta, mu);
  double rel_change = std::numeric_limits<double>::infinity();

  FitResult out;
  out.spec = spec;
  int iter = 0;
  for (;; ++iter) {
    const Eigen::VectorXd score = X.transpose() * (y - mu);
    if (score.lpNorm<Eigen::Infinity>() < opts.score_tol && rel_change < opts.rel_loglik_tol) {
      out.converged = true;
      break;
    }
    if (iter >= opts.max_iterations) break;

    const Eigen::MatrixXd H = X.transpose() * mu.asDiagonal() * X;
    const Eigen::VectorXd delta = H.ldlt().solve(score);

    // Step halving: the likelihood is concave, so a short enough Newton step
    // cannot decrease it.
    double step = 1.0;
    Eigen::VectorXd new_beta, new_eta, new_mu;
    double new_ll = -std::numeric_limits<double>::infinity();
    for (int h = 0; h < 60; ++h) {
      new_beta = beta + step * delta;
      new_eta = X * new_beta;
      new_mu = new_eta.array().exp();
      new_ll = poisson_loglik(y, new_eta, new_mu);
      if (std::isfinite(new_ll) && new_ll >= ll - 1e-12 * std::max(1.0, std::abs(ll))) break;
      step *= 0.5;
    }
    if (!std::isfinite(new_ll)) break;
    rel_change = std::abs(new_ll - ll) / std::max(1.0, std::abs(new_ll));
    beta = std::move(new_beta);
    eta = std::move(new_eta);
    mu = std::move(new_mu);
    ll = new_ll;
  }
  if (!out.converged)
    throw NonConvergence("IRLS did not converge within " + std::to_string(opts.max_iterations) + " iterations");

  out.labels = d.labels();
  out.iterations = iter;
  out.infinite_params = r.infinite_params;
  out.cells = r.omega;
  out.observed.assign(y.data(), y.data() + n_cells);
  out.fitted_means.assign(mu.data(), mu.data() + n_cells);
  for (Eigen::Index k = 0; k < n_params; ++k)
    out.coefficients.push_back({r.theta[static_cast<std::size_t>(k)], beta(k)});
  out.observed_total = d.total();
  out.loglik = ll;
  double dev = 0.0;
  for (Eigen::Index w = 0; w < n_cells; ++w) {
    const double yw = y(w), mw = mu(w);
    dev += (yw > 0 ? yw * std::log(yw / mw) : 0.0) - (yw - mw);
  }
  out.deviance = 2.0 * dev;
  out.dark_figure = std::exp(beta(0));
  out.population_estimate = static_cast<double>(d.total()) + out.dark_figure;
  return out;
}

double fitted_marginal(const FitResult& f, CaptureHistory h) {
  double s = 0.0;
  for (std::size_t w = 0; w < f.cells.size(); ++w)
    if (f.cells[w].contains(h)) s += f.fitted_means[w];
  return s;
}

}  // namespace smse
