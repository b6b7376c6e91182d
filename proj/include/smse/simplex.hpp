#pragma once

#include <vector>

#include <Eigen/Dense>

namespace smse {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
  int pivots = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feasibility_tol = 1e-7;
  int max_pivots = 100000;
};

/// Two-phase dense tableau simplex for
///
///   maximize c'x  subject to  A x = b,  x >= 0.
///
/// Entering and leaving variables follow Bland's rule, so the method cannot
/// cycle on degenerate problems. Redundant equality rows are detected and
/// dropped at the end of phase one.
LpResult simplex_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                          const SimplexOptions& opts = {});

}  // namespace smse
