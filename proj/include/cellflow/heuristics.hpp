#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cellflow/complex.hpp"
#include "cellflow/hodge.hpp"

namespace cellflow {

// ---------------------------------------------------------------------------
// Spanning-tree machinery
// ---------------------------------------------------------------------------

struct WeightedEdge {
  double weight;
  EdgeId edge;
};

struct SpanningForest {
  std::vector<EdgeId> tree_edges;
  std::vector<EdgeId> cycle_edges;  ///< rejected edges; each closes one tree cycle
};

/// Greedy union-find acceptance over `sorted_edges` in the given order: an
/// edge joins the forest iff its endpoints are not yet connected. Sorting
/// descending by weight yields a maximum spanning forest.
SpanningForest find_spanning_tree(const Skeleton& skeleton,
                                  std::span<const WeightedEdge> sorted_edges);

constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

/// Rooted spanning forest with flow potentials.
///
/// potentials(j, v) is the signed sum of sample j's flow along the tree path
/// root -> v (+F when the path traverses an edge in reference orientation).
struct SpanningTreeData {
  std::vector<NodeId> parent;       ///< parent[root] == root
  std::vector<EdgeId> parent_edge;  ///< kNoEdge for roots
  std::vector<std::uint32_t> depth;
  Eigen::MatrixXd potentials;       ///< samples x nodes
  std::vector<EdgeId> non_tree_edges;
};

/// BFS from the smallest node of each component over `tree_edges`.
/// Throws InvalidInput if `tree_edges` contains a cycle.
SpanningTreeData build_tree(const Skeleton& skeleton, std::span<const EdgeId> tree_edges,
                            const FlowMatrix& flows);

/// Cycle induced by one non-tree edge, scored without materialising it.
struct TreeCycleScore {
  double score;  ///< ||f||_1 / length
  std::uint32_t length;
  EdgeId edge;
  NodeId lca;
  Eigen::VectorXd flow;  ///< circulation per sample, oriented tail -> head on `edge`
};

/// Scores every cycle edge via node potentials; cycle lengths come from one
/// offline LCA pass: depth(u) + depth(v) - 2 depth(lca) + 1.
std::vector<TreeCycleScore> evaluate_tree(const Skeleton& skeleton, const SpanningTreeData& tree,
                                          const FlowMatrix& flows,
                                          std::span<const EdgeId> cycle_edges);

/// The simple cycle formed by the tree path u -> lca -> v and the edge (v, u).
TwoCell extract_cycle(const Skeleton& skeleton, const SpanningTreeData& tree, NodeId u, NodeId v);

// ---------------------------------------------------------------------------
// Candidate search
// ---------------------------------------------------------------------------

struct CellCandidate {
  TwoCell cell;
  double score = 0.0;        ///< normalized cycle flow
  EdgeId origin_edge = kNoEdge;
};

/// Maximum spanning tree under ||F[e,:]||_1 edge weights; top-m induced cycles
/// by score (ties: shorter cycle, then smaller origin edge).
std::vector<CellCandidate> cs_max(const CellComplex& complex, const FlowMatrix& residual,
                                  std::size_t m);

/// One spanning tree per k-means center of the 2E signed edge-flow rows;
/// candidates from all trees merged, deduplicated, top-m by score.
std::vector<CellCandidate> cs_similarity(const CellComplex& complex, const FlowMatrix& residual,
                                         int k, std::size_t m, std::uint64_t seed,
                                         std::size_t threads = 1);

/// Triangles of the skeleton ranked by ||circulation||_1 / 3.
std::vector<CellCandidate> cs_triangles(const CellComplex& complex, const FlowMatrix& residual,
                                        std::size_t m);

/// Every ground-truth cell not yet in the complex, unscored, in truth order.
std::vector<CellCandidate> cs_true_cells(const CellComplex& complex,
                                         std::span<const TwoCell> ground_truth);

}  // namespace cellflow
