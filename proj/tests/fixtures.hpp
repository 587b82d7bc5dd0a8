#pragma once
// Shared hand-built instances.

#include <random>
#include <vector>

#include <Eigen/Core>

#include "cellflow/complex.hpp"
#include "cellflow/hodge.hpp"

namespace cellflow::fixture {

/// 5 nodes, 6 edges (1->2, 1->4, 1->5, 2->3, 3->4, 4->5 in 1-based labels).
inline Skeleton small_skeleton() {
  return Skeleton(5, {{0, 1}, {0, 3}, {0, 4}, {1, 2}, {2, 3}, {3, 4}});
}

inline std::vector<TwoCell> small_cells(const Skeleton& g) {
  const std::vector<NodeId> tri{0, 3, 4}, quad{0, 1, 2, 3};
  return {canonicalize(g, tri), canonicalize(g, quad)};
}

/// 5 x 3 grid, node id = row * 5 + column.
inline Skeleton grid_skeleton() {
  std::vector<Edge> edges;
  auto id = [](int r, int c) { return static_cast<NodeId>(r * 5 + c); };
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 5; ++c) {
      if (c + 1 < 5) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < 3) edges.push_back({id(r, c), id(r + 1, c)});
    }
  }
  return Skeleton(15, std::move(edges));
}

/// Left 2x2 block, top 3x1 strip and bottom 3x1 strip (red, green, blue).
inline std::vector<TwoCell> grid_cells(const Skeleton& g) {
  const std::vector<std::vector<NodeId>> walks{{0, 1, 2, 7, 12, 11, 10, 5},
                                               {1, 2, 3, 4, 9, 8, 7, 6},
                                               {6, 7, 8, 9, 14, 13, 12, 11}};
  std::vector<TwoCell> cells;
  for (const auto& w : walks) cells.push_back(canonicalize(g, w));
  return cells;
}

/// Two flows built from fixed cell circulations plus N(0, 0.3^2) edge noise,
/// gradient part removed. Rows are drawn edge by edge, samples inside.
inline FlowMatrix grid_flows(const Skeleton& g, std::uint64_t seed) {
  const auto cells = grid_cells(g);
  Eigen::MatrixXd circulation(3, 2);
  circulation << -0.6, -2.6,
                 -2.9, 1.4,
                 -2.4, 1.0;
  FlowMatrix f = to_real(build_b2(g, cells)) * circulation;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (Eigen::Index i = 0; i < f.rows(); ++i)
    for (Eigen::Index j = 0; j < f.cols(); ++j) f(i, j) += noise(rng);
  return project_gradient_out(to_real(build_b1(g)), f);
}

inline constexpr std::uint64_t kGridSeed = 3;

}  // namespace cellflow::fixture
