#include "cslab/lp.hpp"

#include <limits>
#include <vector>

namespace cslab {

namespace {

constexpr double kEps = 1e-11;

// Tableau rows 0..m-1 are constraints, row m the objective in "z - c.x = 0" form.
// The last column is the right-hand side.
struct Tableau {
  Eigen::MatrixXd M;
  std::vector<int> basis;
  int m = 0;
  int ncols = 0;  // variable columns

  void pivot(int r, int j) {
    M.row(r) /= M(r, j);
    for (int i = 0; i <= m; ++i) {
      if (i == r) continue;
      const double f = M(i, j);
      if (f != 0.0) M.row(i) -= f * M.row(r);
    }
    basis[r] = j;
  }

  // Returns false when unbounded. Columns >= allowed are never entered.
  bool run(int allowed) {
    for (int iter = 0; iter < 50000; ++iter) {
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        if (M(m, j) < -kEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double a = M(i, enter);
        if (a > kEps) {
          const double ratio = M(i, ncols) / a;
          if (ratio < best - 1e-14 || (ratio <= best + 1e-14 && leave >= 0 &&
                                       basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

LpResult lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                     const Eigen::VectorXd& b) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  // Columns: x+ (n), x- (n), slacks (m), artificials (one per negative rhs row).
  std::vector<int> art_row;
  for (int i = 0; i < m; ++i)
    if (b(i) < 0) art_row.push_back(i);
  const int na = static_cast<int>(art_row.size());
  const int nv = 2 * n + m + na;

  Tableau t;
  t.m = m;
  t.ncols = nv;
  t.M = Eigen::MatrixXd::Zero(m + 1, nv + 1);
  t.basis.assign(m, -1);
  int a = 0;
  for (int i = 0; i < m; ++i) {
    const double s = b(i) < 0 ? -1.0 : 1.0;
    t.M.block(i, 0, 1, n) = s * A.row(i);
    t.M.block(i, n, 1, n) = -s * A.row(i);
    t.M(i, 2 * n + i) = s;
    t.M(i, nv) = s * b(i);
    if (b(i) < 0) {
      t.M(i, 2 * n + m + a) = 1.0;
      t.basis[i] = 2 * n + m + a;
      ++a;
    } else {
      t.basis[i] = 2 * n + i;
    }
  }

  LpResult res;
  if (na > 0) {
    // Phase 1: maximize -sum(artificials).
    for (int k = 0; k < na; ++k) t.M(m, 2 * n + m + k) = 1.0;
    for (int i : art_row) t.M.row(m) -= t.M.row(i);
    t.run(nv);
    if (t.M(m, nv) < -1e-9) {
      res.status = LpResult::Status::Infeasible;
      return res;
    }
    // Drive remaining artificials out of the basis.
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] >= 2 * n + m) {
        for (int j = 0; j < 2 * n + m; ++j) {
          if (std::abs(t.M(i, j)) > 1e-9) {
            t.pivot(i, j);
            break;
          }
        }
      }
    }
  }

  // Phase 2.
  t.M.row(m).setZero();
  for (int j = 0; j < n; ++j) {
    t.M(m, j) = -c(j);
    t.M(m, n + j) = c(j);
  }
  for (int i = 0; i < m; ++i) {
    const int j = t.basis[i];
    const double f = t.M(m, j);
    if (f != 0.0) t.M.row(m) -= f * t.M.row(i);
  }
  if (!t.run(2 * n + m)) {
    res.status = LpResult::Status::Unbounded;
    return res;
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(nv);
  for (int i = 0; i < m; ++i) y(t.basis[i]) = t.M(i, nv);
  res.x = y.head(n) - y.segment(n, n);
  res.value = c.dot(res.x);
  res.status = LpResult::Status::Optimal;
  return res;
}

}  // namespace cslab
