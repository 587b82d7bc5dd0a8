#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace cellflow {

/// Why LSMR stopped. Values follow the classic LSMR istop codes.
enum class LsmrStop {
  ZeroSolution = 0,     ///< b = 0 or A^T b = 0; x = 0 is exact
  Compatible = 1,       ///< ||r|| small: Ax = b solved to btol/atol
  LeastSquares = 2,     ///< ||A^T r|| small: least-squares optimum to atol
  MachineCompatible = 4,
  MachineLeastSquares = 5,
  IterationLimit = 7,
};

struct LsmrResult {
  Eigen::VectorXd x;
  LsmrStop stop = LsmrStop::ZeroSolution;
  int iterations = 0;
  double residual_norm = 0.0;         ///< ||b - Ax|| estimate
  double normal_residual_norm = 0.0;  ///< ||A^T (b - Ax)|| estimate
  bool converged() const { return stop != LsmrStop::IterationLimit; }
};

/// Least squares min ||Ax - b||_2 by LSMR (Fong & Saunders), without damping.
/// For rank-deficient A it converges to the minimum-norm solution.
LsmrResult lsmr(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b, double atol,
                double btol, int max_iterations);

}  // namespace cellflow
