#pragma once

#include <Eigen/Core>

#include "cellflow/complex.hpp"

namespace cellflow {

/// Edge flows, one column per sample; row order matches the skeleton's edges.
using FlowMatrix = Eigen::MatrixXd;

struct SolverConfig {
  double atol = 1e-8;
  double btol = 1e-8;
  /// Per-solve LSMR iteration cap; 0 selects 10 * (rows + cols) of the system.
  int max_iterations = 0;
  /// Column-level fan-out; 0 selects default_thread_count().
  std::size_t threads = 0;

  /// Throws InvalidInput unless tolerances are positive and the cap is >= 0.
  void validate() const;
};

/// F - B1^T x*, with x* the least-squares node potentials of each column.
/// The result is orthogonal to Im(B1^T) up to solver tolerance.
FlowMatrix project_gradient_out(const RealSparse& b1, const FlowMatrix& flows,
                                const SolverConfig& cfg = {});

/// F - B2 y* for gradient-free F, i.e. the harmonic part w.r.t. the cells in B2.
/// An empty B2 returns the input unchanged.
FlowMatrix project_harmonic(const RealSparse& b2, const FlowMatrix& gradient_free_flows,
                            const SolverConfig& cfg = {});

/// ||harm(F)||_F for gradient-free flows.
double loss(const CellComplex& complex, const FlowMatrix& gradient_free_flows,
            const SolverConfig& cfg = {});

/// Loss after appending `candidate` to the complex whose boundary matrix is
/// `b2`, given the current harmonic residual (the output of project_harmonic
/// for that complex).
///
/// Only one extra solve is needed: the part of the candidate column outside
/// Im(B2) is found by least squares and the residual is projected off it.
/// Candidates whose column already lies in Im(B2) leave the loss unchanged.
double loss_delta(const RealSparse& b2, const FlowMatrix& residual, const Skeleton& skeleton,
                  const TwoCell& candidate, const SolverConfig& cfg = {});

/// Gradient, curl and harmonic parts of raw flows; they sum to the input.
struct Decomposition {
  FlowMatrix gradient;
  FlowMatrix curl;
  FlowMatrix harmonic;
};

Decomposition decompose(const CellComplex& complex, const FlowMatrix& flows,
                        const SolverConfig& cfg = {});

/// Least-squares residual b - A x* of a single right-hand side.
Eigen::VectorXd least_squares_residual(const RealSparse& a, const Eigen::VectorXd& b,
                                       const SolverConfig& cfg);

}  // namespace cellflow
