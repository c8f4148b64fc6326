#pragma once

#include <Eigen/Dense>

namespace cslab {

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  double value = 0.0;
  Eigen::VectorXd x;
};

// max c.x subject to A x <= b, x free. Dense two-phase simplex with Bland's rule;
// meant for the small problems of the high-dimensional knowledge sets.
LpResult lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                     const Eigen::VectorXd& b);

}  // namespace cslab
