#include "cellflow/inference.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <string>

#include "cellflow/errors.hpp"
#include "cellflow/parallel.hpp"

namespace cellflow {

namespace {

constexpr double kZeroResidual = 1e-12;

std::vector<CellCandidate> search(Heuristic h, const CellComplex& complex,
                                  const FlowMatrix& residual, const InferenceConfig& cfg,
                                  std::span<const TwoCell> truth, std::size_t iteration,
                                  std::size_t threads) {
  switch (h) {
    case Heuristic::Max:
      return cs_max(complex, residual, cfg.candidates);
    case Heuristic::Similarity:
      return cs_similarity(complex, residual, cfg.clusters, cfg.candidates, cfg.seed + iteration,
                           threads);
    case Heuristic::Triangles:
      return cs_triangles(complex, residual, cfg.candidates);
    case Heuristic::TrueCells:
      return cs_true_cells(complex, truth);
  }
  return {};
}

}  // namespace

std::optional<Heuristic> parse_heuristic(std::string_view name) {
  if (name == "max") return Heuristic::Max;
  if (name == "similarity") return Heuristic::Similarity;
  if (name == "triangles") return Heuristic::Triangles;
  if (name == "true-cells" || name == "true_cells") return Heuristic::TrueCells;
  return std::nullopt;
}

std::string_view to_string(Heuristic h) {
  switch (h) {
    case Heuristic::Max: return "max";
    case Heuristic::Similarity: return "similarity";
    case Heuristic::Triangles: return "triangles";
    case Heuristic::TrueCells: return "true-cells";
  }
  return "?";
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::MaxCells: return "max_cells";
    case StopReason::Epsilon: return "epsilon";
    case StopReason::ZeroResidual: return "zero_residual";
    case StopReason::NoCandidates: return "no_candidates";
    case StopReason::NnzBudget: return "b2_nnz_budget";
  }
  return "?";
}

void InferenceConfig::validate() const {
  if (candidates < 1) throw InvalidInput("candidate count m must be >= 1");
  if (clusters < 1) throw InvalidInput("cluster count k must be >= 1");
  if (epsilon && !(*epsilon >= 0.0)) throw InvalidInput("epsilon must be >= 0");
  if (!max_cells && !epsilon && !b2_nnz_budget) {
    throw InvalidInput("at least one stopping rule (max cells, epsilon, B2 budget) is required");
  }
  solver.validate();
}

InferenceResult infer(const Skeleton& skeleton, const FlowMatrix& flows,
                      const InferenceConfig& config, std::span<const TwoCell> ground_truth) {
  config.validate();
  if (flows.rows() != static_cast<Eigen::Index>(skeleton.edge_count())) {
    throw InvalidInput("flow rows (" + std::to_string(flows.rows()) + ") != edge count (" +
                       std::to_string(skeleton.edge_count()) + ")");
  }
  if (config.heuristic == Heuristic::TrueCells && ground_truth.empty()) {
    throw InvalidInput("the true-cells heuristic needs ground-truth cells");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  };
  const std::size_t threads =
      config.solver.threads > 0 ? config.solver.threads : default_thread_count();
  SolverConfig column_solver = config.solver;
  column_solver.threads = 1;

  InferenceResult result{CellComplex(skeleton), 0.0, 0.0, {}, StopReason::MaxCells};
  result.flow_norm = flows.norm();

  const FlowMatrix gradient_free =
      project_gradient_out(to_real(build_b1(skeleton)), flows, config.solver);
  FlowMatrix residual = gradient_free;
  double current = residual.norm();
  result.initial_loss = current;

  RealSparse b2(static_cast<Eigen::Index>(skeleton.edge_count()), 0);
  for (std::size_t iteration = 0;; ++iteration) {
    CellComplex& complex = result.complex;
    if (config.max_cells && complex.cell_count() >= *config.max_cells) {
      result.stop = StopReason::MaxCells;
      break;
    }
    if (config.epsilon && current < *config.epsilon) {
      result.stop = StopReason::Epsilon;
      break;
    }
    if (current <= kZeroResidual * result.flow_norm) {
      result.stop = StopReason::ZeroResidual;
      break;
    }
    const std::size_t nnz = complex.boundary_nnz();
    if (config.b2_nnz_budget && nnz >= *config.b2_nnz_budget) {
      result.stop = StopReason::NnzBudget;
      break;
    }

    std::vector<CellCandidate> candidates =
        search(config.heuristic, complex, residual, config, ground_truth, iteration, threads);
    if (config.b2_nnz_budget) {
      const std::size_t room = *config.b2_nnz_budget - nnz;
      const auto before = candidates.size();
      std::erase_if(candidates, [&](const CellCandidate& c) { return c.cell.length() > room; });
      if (candidates.empty() && before > 0) {
        result.stop = StopReason::NnzBudget;
        break;
      }
    }
    if (candidates.empty()) {
      result.stop = StopReason::NoCandidates;
      break;
    }

    std::vector<double> losses(candidates.size());
    try {
      parallel_for(candidates.size(), threads, [&](std::size_t i) {
        losses[i] = loss_delta(b2, residual, skeleton, candidates[i].cell, column_solver);
      });
    } catch (const SolverError& e) {
      throw SolverError("iteration " + std::to_string(iteration + 1) + ": " + e.what());
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < losses.size(); ++i) {
      if (losses[i] < losses[best]) best = i;
    }

    IterationRecord record{candidates[best].cell, 0.0, 0, 0, 0.0, {}};
    record.evaluated.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      record.evaluated.push_back({candidates[i].cell, candidates[i].score, losses[i]});
    }
    complex.add_cell(std::move(candidates[best].cell));
    b2 = to_real(build_b2(complex));
    try {
      residual = project_harmonic(b2, gradient_free, config.solver);
    } catch (const SolverError& e) {
      throw SolverError("iteration " + std::to_string(iteration + 1) + ": " + e.what());
    }
    current = residual.norm();
    record.loss = current;
    record.cells_count = complex.cell_count();
    record.b2_nnz = complex.boundary_nnz();
    record.wall_time_ms = elapsed_ms();
    result.history.push_back(std::move(record));
  }
  return result;
}

double recovery_accuracy(std::span<const TwoCell> cells, std::span<const TwoCell> ground_truth) {
  if (ground_truth.empty()) return 0.0;
  CellKeySet found;
  for (const auto& c : cells) found.insert(c.key());
  CellKeySet truth;
  for (const auto& c : ground_truth) truth.insert(c.key());
  std::size_t hits = 0;
  for (const auto& key : truth) hits += found.contains(key) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double recovery_accuracy(const InferenceResult& result, std::span<const TwoCell> ground_truth) {
  return recovery_accuracy(result.complex.cells(), ground_truth);
}

double recovery_after(const InferenceResult& result, std::span<const TwoCell> ground_truth,
                      std::size_t iterations) {
  const auto& cells = result.complex.cells();
  const std::size_t n = std::min(iterations, cells.size());
  return recovery_accuracy(std::span<const TwoCell>(cells.data(), n), ground_truth);
}

std::vector<SparsityPoint> sparsity_curve(const Skeleton& skeleton, const FlowMatrix& flows,
                                          InferenceConfig config,
                                          std::span<const std::size_t> budget_grid,
                                          std::span<const TwoCell> ground_truth) {
  if (budget_grid.empty()) return {};
  if (!std::is_sorted(budget_grid.begin(), budget_grid.end())) {
    throw InvalidInput("sparsity_curve: budget grid must be ascending");
  }
  const std::size_t largest = budget_grid.back();
  config.max_cells = config.max_cells ? std::min(*config.max_cells, largest) : largest;
  const InferenceResult run = infer(skeleton, flows, config, ground_truth);

  std::vector<SparsityPoint> curve;
  curve.reserve(budget_grid.size());
  for (std::size_t budget : budget_grid) {
    const std::size_t done = std::min(budget, run.history.size());
    if (done == 0) {
      curve.push_back({budget, 0, 0, run.initial_loss});
    } else {
      const auto& rec = run.history[done - 1];
      curve.push_back({budget, rec.cells_count, rec.b2_nnz, rec.loss});
    }
  }
  return curve;
}

}  // namespace cellflow
