#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

namespace cellflow {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

using IntSparse = Eigen::SparseMatrix<int>;
using RealSparse = Eigen::SparseMatrix<double>;

/// Reference orientation of one edge.
struct Edge {
  NodeId tail;
  NodeId head;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Result of looking up an unordered node pair.
struct OrientedEdge {
  EdgeId edge;
  int sign;  ///< +1 if queried in reference orientation, -1 otherwise
};

/// Simple undirected graph with a fixed reference orientation per edge.
///
/// Self-loops, parallel edges and out-of-range endpoints are rejected at
/// construction, so every Skeleton in circulation is valid.
class Skeleton {
 public:
  Skeleton(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  /// Edge joining `from` and `to`, with +1 when from->to matches the
  /// reference orientation.
  std::optional<OrientedEdge> find_edge(NodeId from, NodeId to) const;

  /// Sorted neighbour list of `v`.
  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_[v].data(), adjacency_[v].size()};
  }

  std::size_t component_count() const;

 private:
  static std::uint64_t pair_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  std::size_t node_count_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, EdgeId> index_;
  std::vector<std::vector<NodeId>> adjacency_;
};

/// One boundary entry of a 2-cell.
struct BoundaryTerm {
  EdgeId edge;
  int sign;
  friend bool operator==(const BoundaryTerm&, const BoundaryTerm&) = default;
};

/// A polygonal 2-cell stored in canonical form.
///
/// The node cycle is rotated so its smallest node comes first, and traversed in
/// the direction whose second node is the smaller neighbour. The boundary walk
/// follows that same cycle, so two TwoCells describe the same cell iff their
/// keys compare equal.
class TwoCell {
 public:
  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<BoundaryTerm>& boundary() const { return boundary_; }
  std::size_t length() const { return nodes_.size(); }

  /// Canonical node sequence; equal for every rotation/reflection of the cycle.
  const std::vector<NodeId>& key() const { return nodes_; }

  std::string to_string(char sep = '-') const;

  friend bool operator==(const TwoCell& a, const TwoCell& b) { return a.nodes_ == b.nodes_; }
  friend bool operator<(const TwoCell& a, const TwoCell& b) { return a.nodes_ < b.nodes_; }

 private:
  friend TwoCell canonicalize(const Skeleton&, std::span<const NodeId>);
  std::vector<NodeId> nodes_;
  std::vector<BoundaryTerm> boundary_;
};

/// Builds the canonical TwoCell for a closed node walk (the first node is not
/// repeated at the end). Throws InvalidInput for walks shorter than 3, with
/// repeated nodes, or using a pair of nodes that is not an edge.
TwoCell canonicalize(const Skeleton& skeleton, std::span<const NodeId> cycle);

/// Rotation/reflection normal form of a node cycle, without edge validation.
std::vector<NodeId> canonical_node_order(std::span<const NodeId> cycle);

struct CellKeyHash {
  std::size_t operator()(const std::vector<NodeId>& key) const noexcept;
};

using CellKeySet = std::unordered_set<std::vector<NodeId>, CellKeyHash>;

/// A 1-skeleton plus an ordered list of distinct 2-cells.
class CellComplex {
 public:
  explicit CellComplex(Skeleton skeleton) : skeleton_(std::move(skeleton)) {}
  CellComplex(Skeleton skeleton, std::vector<TwoCell> cells);

  const Skeleton& skeleton() const { return skeleton_; }
  const std::vector<TwoCell>& cells() const { return cells_; }
  std::size_t cell_count() const { return cells_.size(); }

  bool contains(const TwoCell& cell) const { return keys_.contains(cell.key()); }

  /// Appends `cell`; throws InvalidInput if an equal cell is already present
  /// or the cell uses edges that do not belong to the skeleton.
  void add_cell(TwoCell cell);

  /// ||B2||_0, the total boundary length over all cells.
  std::size_t boundary_nnz() const;

 private:
  Skeleton skeleton_;
  std::vector<TwoCell> cells_;
  CellKeySet keys_;
};

/// Node-to-edge incidence: column k holds -1 at tail(e_k) and +1 at head(e_k).
IntSparse build_b1(const Skeleton& skeleton);

/// Edge-to-cell incidence: column j holds each boundary sign of cell j.
/// Throws InvalidInput if two cells share a canonical key.
IntSparse build_b2(const Skeleton& skeleton, std::span<const TwoCell> cells);
IntSparse build_b2(const CellComplex& complex);

struct BoundaryMatrices {
  IntSparse b1;
  IntSparse b2;
};

BoundaryMatrices boundary_matrices(const CellComplex& complex);

/// Single column of B2 for `cell`, as a dense edge vector.
Eigen::VectorXd cell_column(const Skeleton& skeleton, const TwoCell& cell);

inline RealSparse to_real(const IntSparse& m) { return m.cast<double>(); }

}  // namespace cellflow
