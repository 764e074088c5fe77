#pragma once

#include <functional>

#include <Eigen/Core>

namespace robgev {

struct NelderMeadOptions {
  int max_iterations = 2000;
  /// Stop when the objective spread over the simplex is below
  /// f_tolerance * max(1, |f_best|) and every vertex lies within x_tolerance
  /// (max-norm) of the best one.
  double f_tolerance = 1e-9;
  double x_tolerance = 1e-7;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free simplex minimization. Non-finite objective values are
/// treated as +inf, so infeasible regions act as a barrier.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start, const Eigen::VectorXd& steps,
                             const NelderMeadOptions& options = {});

}  // namespace robgev
