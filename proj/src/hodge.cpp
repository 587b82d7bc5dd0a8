#include "cellflow/hodge.hpp"

#include <cmath>
#include <string>

#include "cellflow/errors.hpp"
#include "cellflow/lsmr.hpp"
#include "cellflow/parallel.hpp"

namespace cellflow {

namespace {

// ||c_perp|| / ||c|| below this means the candidate adds nothing to Im(B2).
constexpr double kRedundantColumn = 1e-6;

int iteration_cap(const RealSparse& a, const SolverConfig& cfg) {
  if (cfg.max_iterations > 0) return cfg.max_iterations;
  return static_cast<int>(10 * (a.rows() + a.cols()));
}

std::size_t thread_cap(const SolverConfig& cfg) {
  return cfg.threads > 0 ? cfg.threads : default_thread_count();
}

void check_finite(const FlowMatrix& flows) {
  if (!flows.allFinite()) throw InvalidInput("flow matrix contains non-finite entries");
}

FlowMatrix residual_columns(const RealSparse& a, const FlowMatrix& rhs, const SolverConfig& cfg) {
  FlowMatrix out(rhs.rows(), rhs.cols());
  parallel_for(static_cast<std::size_t>(rhs.cols()), thread_cap(cfg), [&](std::size_t j) {
    const auto col = static_cast<Eigen::Index>(j);
    out.col(col) = least_squares_residual(a, rhs.col(col), cfg);
  });
  return out;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(atol > 0.0) || !(btol > 0.0)) throw InvalidInput("solver tolerances must be positive");
  if (max_iterations < 0) throw InvalidInput("max_iterations must be >= 1 (or 0 for auto)");
}

Eigen::VectorXd least_squares_residual(const RealSparse& a, const Eigen::VectorXd& b,
                                       const SolverConfig& cfg) {
  if (a.rows() != b.size()) throw InvalidInput("least squares: dimension mismatch");
  if (a.cols() == 0) return b;
  const int cap = iteration_cap(a, cfg);
  const LsmrResult res = lsmr(a, b, cfg.atol, cfg.btol, cap);
  if (!res.converged()) {
    throw SolverError("LSMR did not converge within " + std::to_string(cap) +
                      " iterations (||A^T r|| = " + std::to_string(res.normal_residual_norm) + ")");
  }
  return b - a * res.x;
}

FlowMatrix project_gradient_out(const RealSparse& b1, const FlowMatrix& flows,
                                const SolverConfig& cfg) {
  cfg.validate();
  check_finite(flows);
  if (b1.cols() != flows.rows()) throw InvalidInput("gradient projection: B1 columns != flow rows");
  const RealSparse b1t = b1.transpose();
  return residual_columns(b1t, flows, cfg);
}

FlowMatrix project_harmonic(const RealSparse& b2, const FlowMatrix& gradient_free_flows,
                            const SolverConfig& cfg) {
  cfg.validate();
  check_finite(gradient_free_flows);
  if (b2.rows() != gradient_free_flows.rows()) {
    throw InvalidInput("harmonic projection: B2 rows != flow rows");
  }
  if (b2.cols() == 0) return gradient_free_flows;
  return residual_columns(b2, gradient_free_flows, cfg);
}

double loss(const CellComplex& complex, const FlowMatrix& gradient_free_flows,
            const SolverConfig& cfg) {
  const RealSparse b2 = to_real(build_b2(complex));
  return project_harmonic(b2, gradient_free_flows, cfg).norm();
}

double loss_delta(const RealSparse& b2, const FlowMatrix& residual, const Skeleton& skeleton,
                  const TwoCell& candidate, const SolverConfig& cfg) {
  cfg.validate();
  if (residual.rows() != static_cast<Eigen::Index>(skeleton.edge_count()) ||
      b2.rows() != residual.rows()) {
    throw InvalidInput("loss_delta: dimension mismatch");
  }
  const Eigen::VectorXd column = cell_column(skeleton, candidate);
  const Eigen::VectorXd perp =
      b2.cols() == 0 ? column : least_squares_residual(b2, column, cfg);
  const double perp_norm2 = perp.squaredNorm();
  if (perp_norm2 <= kRedundantColumn * kRedundantColumn * column.squaredNorm()) {
    return residual.norm();
  }
  // Residual minus its projection onto span(perp).
  const Eigen::RowVectorXd coeff = (perp.transpose() * residual) / perp_norm2;
  return (residual - perp * coeff).norm();
}

Decomposition decompose(const CellComplex& complex, const FlowMatrix& flows,
                        const SolverConfig& cfg) {
  const auto [b1, b2] = boundary_matrices(complex);
  Decomposition d;
  const FlowMatrix gradient_free = project_gradient_out(to_real(b1), flows, cfg);
  d.gradient = flows - gradient_free;
  d.harmonic = project_harmonic(to_real(b2), gradient_free, cfg);
  d.curl = gradient_free - d.harmonic;
  return d;
}

}  // namespace cellflow
