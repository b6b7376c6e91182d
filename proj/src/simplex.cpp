#include "smse/simplex.hpp"

#include <cmath>
#include <limits>

namespace smse {

namespace {

class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), stride_(cols + 1), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * stride_ + c]; }
  double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * stride_ + c]; }
  double& rhs(int r) { return at(r, cols_); }
  // Objective row lives at index rows_.
  double& obj(int c) { return at(rows_, c); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void pivot(int pr, int pc) {
    double* prow = &data_[static_cast<std::size_t>(pr) * stride_];
    const double inv = 1.0 / prow[pc];
    for (int c = 0; c <= cols_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      double* row = &data_[static_cast<std::size_t>(r) * stride_];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
  }

  void drop_row(int r) {
    const std::size_t last = static_cast<std::size_t>(rows_) ;
    // move rows r+1..rows_ (including objective) up by one
    for (std::size_t i = static_cast<std::size_t>(r); i < last; ++i)
      for (int c = 0; c <= cols_; ++c) data_[i * stride_ + c] = data_[(i + 1) * stride_ + c];
    --rows_;
    data_.resize(static_cast<std::size_t>(rows_ + 1) * stride_);
  }

 private:
  int rows_;
  int cols_;
  int stride_;
  std::vector<double> data_;
};

// Runs primal simplex iterations with Bland's rule on columns [0, allowed).
LpStatus iterate(Tableau& T, std::vector<int>& basis, int allowed, const SimplexOptions& opts, int& pivots) {
  while (true) {
    int enter = -1;
    for (int c = 0; c < allowed; ++c) {
      if (T.obj(c) < -opts.pivot_tol) {
        enter = c;
        break;
      }
    }
    if (enter < 0) return LpStatus::optimal;

    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < T.rows(); ++r) {
      const double a = T.at(r, enter);
      if (a <= opts.pivot_tol) continue;
      const double ratio = T.rhs(r) / a;
      if (ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && leave >= 0 && basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
        best_ratio = ratio;
        leave = r;
      }
    }
    if (leave < 0) return LpStatus::unbounded;
    if (++pivots > opts.max_pivots) return LpStatus::iteration_limit;
    T.pivot(leave, enter);
    basis[static_cast<std::size_t>(leave)] = enter;
  }
}

}  // namespace

LpResult simplex_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                          const SimplexOptions& opts) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  LpResult result;

  // Phase one: artificial variables n..n+m-1 form the starting basis.
  Tableau T(m, n + m);
  std::vector<int> basis(static_cast<std::size_t>(m));
  double bscale = 1.0;
  for (int r = 0; r < m; ++r) {
    const double sign = b(r) < 0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) T.at(r, j) = sign * A(r, j);
    T.at(r, n + r) = 1.0;
    T.rhs(r) = sign * b(r);
    bscale = std::max(bscale, std::abs(b(r)));
    basis[static_cast<std::size_t>(r)] = n + r;
  }
  // Objective: maximize -sum(artificials). Row holds c_B B^-1 A_j - c_j.
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int r = 0; r < m; ++r) s += T.at(r, j);
    T.obj(j) = -s;
  }
  {
    double s = 0.0;
    for (int r = 0; r < m; ++r) s += T.rhs(r);
    T.obj(n + m) = -s;
  }

  auto status = iterate(T, basis, n, opts, result.pivots);
  if (status == LpStatus::iteration_limit) {
    result.status = status;
    return result;
  }
  if (-T.obj(n + m) > opts.feasibility_tol * bscale) {
    result.status = LpStatus::infeasible;
    return result;
  }

  // Drive remaining artificials out of the basis; drop redundant rows.
  for (int r = 0; r < T.rows();) {
    if (basis[static_cast<std::size_t>(r)] < n) {
      ++r;
      continue;
    }
    int col = -1;
    for (int j = 0; j < n; ++j)
      if (std::abs(T.at(r, j)) > opts.pivot_tol) {
        col = j;
        break;
      }
    if (col >= 0) {
      T.pivot(r, col);
      basis[static_cast<std::size_t>(r)] = col;
      ++r;
    } else {
      T.drop_row(r);
      basis.erase(basis.begin() + r);
    }
  }

  // Phase two objective row.
  for (int j = 0; j < n + m; ++j) {
    double s = -(j < n ? c(j) : 0.0);
    for (int r = 0; r < T.rows(); ++r) {
      const int bj = basis[static_cast<std::size_t>(r)];
      s += c(bj) * T.at(r, j);
    }
    T.obj(j) = s;
  }
  {
    double s = 0.0;
    for (int r = 0; r < T.rows(); ++r) s += c(basis[static_cast<std::size_t>(r)]) * T.rhs(r);
    T.obj(n + m) = s;
  }

  status = iterate(T, basis, n, opts, result.pivots);
  result.status = status;
  if (status != LpStatus::optimal) return result;

  result.x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < T.rows(); ++r) result.x(basis[static_cast<std::size_t>(r)]) = T.rhs(r);
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace smse
