#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cellflow/complex.hpp"
#include "cellflow/hodge.hpp"

namespace cellflow {

enum class GraphFamily { Triangulation, SmallWorld };

struct SynthConfig {
  GraphFamily family = GraphFamily::Triangulation;
  std::size_t node_count = 60;
  std::size_t cell_count = 5;
  std::size_t min_cell_length = 6;
  std::size_t max_cell_length = 6;
  double sigma_c = 1.0;  ///< std of cell flows
  double sigma_n = 0.0;  ///< std of edge noise
  std::size_t samples = 20;
  double prune_prob = 0.3;        ///< triangulation only
  double extra_edge_prob = 0.01;  ///< small-world only
  std::uint64_t seed = 0;

  void validate() const;
};

struct Point2 {
  double x;
  double y;
};

/// Skeleton plus the planted cells (the complex's cells are the ground truth).
struct SyntheticComplex {
  CellComplex complex;
  std::vector<Point2> points;  ///< per node; empty for small-world graphs
};

/// Uniform points in the unit square -> Delaunay skeleton -> planted cycles ->
/// random deletion of nodes/edges outside every planted cell. Surviving nodes
/// are relabelled in ascending order and isolated nodes dropped.
/// Throws GenerationError if the cells cannot be planted within 100 * cell_count
/// walk attempts.
SyntheticComplex generate_triangulation_complex(const SynthConfig& config);

/// Ring 0-1-...-(n-1)-0 plus every other node pair independently with
/// probability `extra_edge_prob`.
Skeleton generate_smallworld(std::size_t node_count, double extra_edge_prob, std::uint64_t seed);

/// Small-world skeleton with planted cycles (no pruning).
SyntheticComplex generate_smallworld_complex(const SynthConfig& config);

/// Dispatches on config.family.
SyntheticComplex generate_complex(const SynthConfig& config);

/// Plants `count` distinct simple cycles by self-avoiding random walks that
/// close back onto their start once their length lies in [min_length, max_length].
std::vector<TwoCell> plant_cycles(const Skeleton& skeleton, std::size_t count,
                                  std::size_t min_length, std::size_t max_length,
                                  std::mt19937_64& rng);

/// f_i = B2 x_i + y_i with x_i ~ N(0, sigma_c^2 I) on cells and
/// y_i ~ N(0, sigma_n^2 I) on edges, independently per sample.
FlowMatrix sample_flows(const CellComplex& truth, const SynthConfig& config);

}  // namespace cellflow
