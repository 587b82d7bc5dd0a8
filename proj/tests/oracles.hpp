#pragma once
// Test-only reference implementations. Nothing here may call into the code
// paths they are used to check (LSMR, spanning-tree potentials, LCA, ...).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cellflow/complex.hpp"

namespace cellflow::oracle {

inline Eigen::MatrixXd dense(const IntSparse& m) { return Eigen::MatrixXd(m.cast<double>()); }

inline Eigen::MatrixXd pinv(const Eigen::MatrixXd& a) {
  if (a.cols() == 0 || a.rows() == 0) return Eigen::MatrixXd::Zero(a.cols(), a.rows());
  return a.completeOrthogonalDecomposition().pseudoInverse();
}

/// B1^T (B1^T)^+ F
inline Eigen::MatrixXd gradient_part(const IntSparse& b1, const Eigen::MatrixXd& f) {
  const Eigen::MatrixXd a = dense(b1).transpose();
  return a * (pinv(a) * f);
}

/// B2 B2^+ F
inline Eigen::MatrixXd curl_part(const IntSparse& b2, const Eigen::MatrixXd& f) {
  if (b2.cols() == 0) return Eigen::MatrixXd::Zero(f.rows(), f.cols());
  const Eigen::MatrixXd a = dense(b2);
  return a * (pinv(a) * f);
}

/// (I - L1 L1^+) F with L1 = B1^T B1 + B2 B2^T
inline Eigen::MatrixXd harmonic_part(const IntSparse& b1, const IntSparse& b2,
                                     const Eigen::MatrixXd& f) {
  const Eigen::MatrixXd d1 = dense(b1);
  Eigen::MatrixXd l1 = d1.transpose() * d1;
  if (b2.cols() > 0) {
    const Eigen::MatrixXd d2 = dense(b2);
    l1 += d2 * d2.transpose();
  }
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(l1.rows(), l1.cols());
  return (id - l1 * pinv(l1)) * f;
}

/// Every simple cycle (length >= 3) of the graph, as canonical node lists.
/// Exponential; only for graphs with a handful of nodes.
inline std::vector<std::vector<NodeId>> all_simple_cycles(const Skeleton& g) {
  std::set<std::vector<NodeId>> found;
  const auto n = static_cast<NodeId>(g.node_count());
  std::vector<NodeId> path;
  std::vector<char> on_path(n, 0);
  std::function<void(NodeId, NodeId)> dfs = [&](NodeId start, NodeId v) {
    for (NodeId w : g.neighbors(v)) {
      if (w == start && path.size() >= 3) {
        found.insert(canonical_node_order(path));
      } else if (w > start && !on_path[w]) {
        on_path[w] = 1;
        path.push_back(w);
        dfs(start, w);
        path.pop_back();
        on_path[w] = 0;
      }
    }
  };
  for (NodeId s = 0; s < n; ++s) {
    path = {s};
    on_path[s] = 1;
    dfs(s, s);
    on_path[s] = 0;
  }
  return {found.begin(), found.end()};
}

/// Walks the cycle in its canonical order and sums signed flows per sample.
inline Eigen::VectorXd cycle_circulation(const Skeleton& g, const std::vector<NodeId>& cycle,
                                         const Eigen::MatrixXd& flows) {
  Eigen::VectorXd total = Eigen::VectorXd::Zero(flows.cols());
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const NodeId a = cycle[i];
    const NodeId b = cycle[(i + 1) % cycle.size()];
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const auto& ed = g.edge(e);
      if (ed.tail == a && ed.head == b) total += flows.row(e).transpose();
      if (ed.tail == b && ed.head == a) total -= flows.row(e).transpose();
    }
  }
  return total;
}

/// Random connected graph: random spanning tree plus extra chords.
inline Skeleton random_graph(std::mt19937_64& rng, std::size_t nodes, std::size_t extra_edges) {
  std::vector<Edge> edges;
  std::set<std::pair<NodeId, NodeId>> seen;
  auto add = [&](NodeId a, NodeId b) {
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) return false;
    edges.push_back({a, b});
    return true;
  };
  for (NodeId v = 1; v < nodes; ++v) {
    std::uniform_int_distribution<NodeId> pick(0, v - 1);
    add(pick(rng), v);
  }
  std::uniform_int_distribution<NodeId> any(0, static_cast<NodeId>(nodes - 1));
  const std::size_t max_edges = nodes * (nodes - 1) / 2;
  while (edges.size() < std::min(max_edges, nodes - 1 + extra_edges)) add(any(rng), any(rng));
  return Skeleton(nodes, std::move(edges));
}

/// Up to `count` distinct random simple cycles taken from the full cycle list.
inline std::vector<TwoCell> random_cells(std::mt19937_64& rng, const Skeleton& g,
                                         std::size_t count) {
  auto cycles = all_simple_cycles(g);
  std::shuffle(cycles.begin(), cycles.end(), rng);
  std::vector<TwoCell> out;
  for (std::size_t i = 0; i < std::min(count, cycles.size()); ++i) {
    out.push_back(canonicalize(g, cycles[i]));
  }
  return out;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = nd(rng);
  return m;
}

/// Classic Kruskal (maximum spanning forest) on (weight, edge) with ties
/// broken by edge index; returns the sorted set of chosen edge ids.
inline std::vector<EdgeId> kruskal_max(const Skeleton& g, const std::vector<double>& weight) {
  std::vector<EdgeId> order(g.edge_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](EdgeId a, EdgeId b) { return weight[a] > weight[b]; });
  std::vector<NodeId> label(g.node_count());
  std::iota(label.begin(), label.end(), 0);
  std::vector<EdgeId> tree;
  for (EdgeId e : order) {
    const NodeId la = label[g.edge(e).tail];
    const NodeId lb = label[g.edge(e).head];
    if (la == lb) continue;
    // relabel the whole component, O(n) per merge
    for (auto& l : label)
      if (l == lb) l = la;
    tree.push_back(e);
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

}  // namespace cellflow::oracle
