#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cellflow/complex.hpp"
#include "cellflow/heuristics.hpp"
#include "cellflow/hodge.hpp"

namespace cellflow {

enum class Heuristic { Max, Similarity, Triangles, TrueCells };

std::optional<Heuristic> parse_heuristic(std::string_view name);
std::string_view to_string(Heuristic h);

struct InferenceConfig {
  Heuristic heuristic = Heuristic::Similarity;
  std::size_t candidates = 5;  ///< m
  int clusters = 4;            ///< k, similarity only
  std::optional<std::size_t> max_cells;      ///< n (cell budget)
  std::optional<double> epsilon;             ///< stop once loss < epsilon
  std::optional<std::size_t> b2_nnz_budget;  ///< cap on ||B2||_0
  SolverConfig solver;
  std::uint64_t seed = 0;

  /// Throws InvalidInput unless m >= 1, k >= 1, epsilon >= 0 and at least one
  /// stopping rule is set.
  void validate() const;
};

enum class StopReason { MaxCells, Epsilon, ZeroResidual, NoCandidates, NnzBudget };

std::string_view to_string(StopReason r);

struct CandidateEvaluation {
  TwoCell cell;
  double score;
  double loss;  ///< loss if this candidate were added
};

struct IterationRecord {
  TwoCell cell;
  double loss;  ///< after adding `cell`
  std::size_t cells_count;
  std::size_t b2_nnz;
  double wall_time_ms;  ///< elapsed since infer() started
  std::vector<CandidateEvaluation> evaluated;
};

struct InferenceResult {
  CellComplex complex;
  double flow_norm = 0.0;     ///< ||F||_F of the raw input
  double initial_loss = 0.0;  ///< ||F||_F after removing the gradient part
  std::vector<IterationRecord> history;
  StopReason stop = StopReason::MaxCells;

  double final_loss() const { return history.empty() ? initial_loss : history.back().loss; }
};

/// Greedy cell inference. Flows are gradient-projected once; each iteration
/// asks the heuristic for candidates, adds the one with the smallest
/// loss_delta (first in heuristic order on ties) and re-projects.
///
/// `ground_truth` is only consulted by Heuristic::TrueCells, which requires it.
/// SolverError is rethrown with the failing iteration index in its message.
InferenceResult infer(const Skeleton& skeleton, const FlowMatrix& flows,
                      const InferenceConfig& config, std::span<const TwoCell> ground_truth = {});

/// Fraction of ground-truth cells present in `cells` up to canonical form.
double recovery_accuracy(std::span<const TwoCell> cells, std::span<const TwoCell> ground_truth);
double recovery_accuracy(const InferenceResult& result, std::span<const TwoCell> ground_truth);

/// Recovery after the first `iterations` cells of the run.
double recovery_after(const InferenceResult& result, std::span<const TwoCell> ground_truth,
                      std::size_t iterations);

struct SparsityPoint {
  std::size_t budget;
  std::size_t cells_count;
  std::size_t b2_nnz;
  double loss;
};

/// One greedy run up to the largest budget; row b reports the state after
/// min(b, iterations performed) cells. `budget_grid` must be ascending.
std::vector<SparsityPoint> sparsity_curve(const Skeleton& skeleton, const FlowMatrix& flows,
                                          InferenceConfig config,
                                          std::span<const std::size_t> budget_grid,
                                          std::span<const TwoCell> ground_truth = {});

}  // namespace cellflow
