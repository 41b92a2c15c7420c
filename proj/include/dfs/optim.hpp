#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace dfs {

/// Plain Nelder-Mead simplex descent; derivative-free, deterministic.
/// Returns the best point found after max_iters shrink-reflect cycles or
/// once the simplex spread drops below spread_tol.
struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0;
  long evaluations = 0;
};

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& start, double step, int max_iters,
                          double spread_tol = 1e-12);

}  // namespace dfs
