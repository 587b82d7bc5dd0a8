#include "cellflow/heuristics.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <queue>
#include <tuple>

#include "cellflow/errors.hpp"
#include "cellflow/kmeans.hpp"
#include "cellflow/lca.hpp"
#include "cellflow/parallel.hpp"
#include "cellflow/union_find.hpp"

namespace cellflow {

SpanningForest find_spanning_tree(const Skeleton& skeleton,
                                  std::span<const WeightedEdge> sorted_edges) {
  SpanningForest forest;
  UnionFind uf(skeleton.node_count());
  forest.tree_edges.reserve(skeleton.node_count());
  for (const auto& we : sorted_edges) {
    const auto& e = skeleton.edge(we.edge);
    if (uf.find(e.tail) != uf.find(e.head)) {
      uf.join(e.tail, e.head);
      forest.tree_edges.push_back(we.edge);
    } else {
      forest.cycle_edges.push_back(we.edge);
    }
  }
  return forest;
}

SpanningTreeData build_tree(const Skeleton& skeleton, std::span<const EdgeId> tree_edges,
                            const FlowMatrix& flows) {
  const std::size_t n = skeleton.node_count();
  if (flows.rows() != static_cast<Eigen::Index>(skeleton.edge_count())) {
    throw InvalidInput("build_tree: flow rows != edge count");
  }

  std::vector<char> in_tree(skeleton.edge_count(), 0);
  std::vector<std::vector<EdgeId>> incident(n);
  for (EdgeId e : tree_edges) {
    if (e >= skeleton.edge_count()) throw InvalidInput("build_tree: unknown edge");
    if (in_tree[e]) throw InvalidInput("build_tree: duplicate tree edge");
    in_tree[e] = 1;
    incident[skeleton.edge(e).tail].push_back(e);
    incident[skeleton.edge(e).head].push_back(e);
  }

  SpanningTreeData tree;
  tree.parent.assign(n, 0);
  tree.parent_edge.assign(n, kNoEdge);
  tree.depth.assign(n, 0);
  tree.potentials = Eigen::MatrixXd::Zero(flows.cols(), static_cast<Eigen::Index>(n));
  std::vector<char> seen(n, 0);
  std::deque<NodeId> queue;

  for (NodeId root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    tree.parent[root] = root;
    queue.push_back(root);
    while (!queue.empty()) {
      const NodeId v = queue.front();
      queue.pop_front();
      for (EdgeId e : incident[v]) {
        if (e == tree.parent_edge[v]) continue;
        const auto& ed = skeleton.edge(e);
        const bool forward = ed.tail == v;
        const NodeId u = forward ? ed.head : ed.tail;
        if (seen[u]) throw InvalidInput("build_tree: tree edges contain a cycle");
        seen[u] = 1;
        tree.parent[u] = v;
        tree.parent_edge[u] = e;
        tree.depth[u] = tree.depth[v] + 1;
        const auto flow = flows.row(e).transpose();
        if (forward) {
          tree.potentials.col(u) = tree.potentials.col(v) + flow;
        } else {
          tree.potentials.col(u) = tree.potentials.col(v) - flow;
        }
        queue.push_back(u);
      }
    }
  }

  for (EdgeId e = 0; e < skeleton.edge_count(); ++e) {
    if (!in_tree[e]) tree.non_tree_edges.push_back(e);
  }
  return tree;
}

std::vector<TreeCycleScore> evaluate_tree(const Skeleton& skeleton, const SpanningTreeData& tree,
                                          const FlowMatrix& flows,
                                          std::span<const EdgeId> cycle_edges) {
  std::vector<std::pair<NodeId, NodeId>> queries;
  queries.reserve(cycle_edges.size());
  for (EdgeId e : cycle_edges) queries.emplace_back(skeleton.edge(e).tail, skeleton.edge(e).head);
  const std::vector<NodeId> lca = offline_lca(tree.parent, queries);

  std::vector<TreeCycleScore> out;
  out.reserve(cycle_edges.size());
  for (std::size_t i = 0; i < cycle_edges.size(); ++i) {
    const EdgeId e = cycle_edges[i];
    const auto [u, v] = queries[i];
    TreeCycleScore s;
    s.edge = e;
    s.lca = lca[i];
    s.length = tree.depth[u] + tree.depth[v] - 2 * tree.depth[s.lca] + 1;
    s.flow = tree.potentials.col(u) - tree.potentials.col(v) + flows.row(e).transpose();
    s.score = s.flow.lpNorm<1>() / s.length;
    out.push_back(std::move(s));
  }
  return out;
}

TwoCell extract_cycle(const Skeleton& skeleton, const SpanningTreeData& tree, NodeId u, NodeId v) {
  std::vector<NodeId> up_u{u};
  std::vector<NodeId> up_v{v};
  NodeId a = u;
  NodeId b = v;
  while (tree.depth[a] > tree.depth[b]) up_u.push_back(a = tree.parent[a]);
  while (tree.depth[b] > tree.depth[a]) up_v.push_back(b = tree.parent[b]);
  while (a != b) {
    if (tree.parent[a] == a) throw InvalidInput("extract_cycle: nodes lie in different trees");
    up_u.push_back(a = tree.parent[a]);
    up_v.push_back(b = tree.parent[b]);
  }
  // up_u ends at the lca; drop it from up_v so it appears once
  up_v.pop_back();
  std::vector<NodeId> cycle = std::move(up_u);
  cycle.insert(cycle.end(), up_v.rbegin(), up_v.rend());
  return canonicalize(skeleton, cycle);
}

namespace {

// Heap order: larger score first, then shorter cycle, smaller origin edge,
// then earlier tree.
struct RankedCycle {
  double score;
  std::uint32_t length;
  EdgeId edge;
  std::uint32_t tree;
};

bool ranks_before(const RankedCycle& a, const RankedCycle& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.length != b.length) return a.length < b.length;
  if (a.edge != b.edge) return a.edge < b.edge;
  return a.tree < b.tree;
}

struct HeapLess {
  bool operator()(const RankedCycle& a, const RankedCycle& b) const { return ranks_before(b, a); }
};

std::vector<WeightedEdge> stable_sorted(std::vector<WeightedEdge> edges, bool descending) {
  std::stable_sort(edges.begin(), edges.end(), [descending](const auto& a, const auto& b) {
    return descending ? a.weight > b.weight : a.weight < b.weight;
  });
  return edges;
}

// Pops from the merged heap until m fresh cells are collected.
std::vector<CellCandidate> pop_candidates(const CellComplex& complex,
                                          std::span<const SpanningTreeData> trees,
                                          std::vector<RankedCycle> ranked, std::size_t m) {
  const Skeleton& skeleton = complex.skeleton();
  std::priority_queue<RankedCycle, std::vector<RankedCycle>, HeapLess> heap(HeapLess{},
                                                                            std::move(ranked));
  std::vector<CellCandidate> out;
  CellKeySet seen;
  while (out.size() < m && !heap.empty()) {
    const RankedCycle top = heap.top();
    heap.pop();
    const auto& e = skeleton.edge(top.edge);
    TwoCell cell = extract_cycle(skeleton, trees[top.tree], e.tail, e.head);
    if (complex.contains(cell) || !seen.insert(cell.key()).second) continue;
    out.push_back({std::move(cell), top.score, top.edge});
  }
  return out;
}

void append_ranked(std::vector<RankedCycle>& ranked, const std::vector<TreeCycleScore>& scores,
                   std::uint32_t tree) {
  for (const auto& s : scores) ranked.push_back({s.score, s.length, s.edge, tree});
}

}  // namespace

std::vector<CellCandidate> cs_max(const CellComplex& complex, const FlowMatrix& residual,
                                  std::size_t m) {
  const Skeleton& skeleton = complex.skeleton();
  std::vector<WeightedEdge> edges(skeleton.edge_count());
  for (EdgeId e = 0; e < skeleton.edge_count(); ++e) {
    edges[e] = {residual.row(e).lpNorm<1>(), e};
  }
  edges = stable_sorted(std::move(edges), /*descending=*/true);
  const SpanningForest forest = find_spanning_tree(skeleton, edges);
  std::vector<SpanningTreeData> trees;
  trees.push_back(build_tree(skeleton, forest.tree_edges, residual));
  std::vector<RankedCycle> ranked;
  append_ranked(ranked, evaluate_tree(skeleton, trees[0], residual, forest.cycle_edges), 0);
  return pop_candidates(complex, trees, std::move(ranked), m);
}

std::vector<CellCandidate> cs_similarity(const CellComplex& complex, const FlowMatrix& residual,
                                         int k, std::size_t m, std::uint64_t seed,
                                         std::size_t threads) {
  if (k < 1) throw InvalidInput("cs_similarity: k must be >= 1");
  const Skeleton& skeleton = complex.skeleton();
  const Eigen::Index edges = residual.rows();
  if (edges == 0) return {};

  Eigen::MatrixXd points(2 * edges, residual.cols());
  points.topRows(edges) = residual;
  points.bottomRows(edges) = -residual;
  const KMeansResult clusters = kmeans(points, k, seed);
  const auto centers = static_cast<std::size_t>(clusters.centers.rows());

  std::vector<SpanningTreeData> trees(centers);
  std::vector<std::vector<TreeCycleScore>> scores(centers);
  parallel_for(centers, threads, [&](std::size_t c) {
    const Eigen::RowVectorXd center = clusters.centers.row(static_cast<Eigen::Index>(c));
    std::vector<WeightedEdge> order(skeleton.edge_count());
    for (EdgeId e = 0; e < skeleton.edge_count(); ++e) {
      // whichever orientation copy lies nearer to the center
      const double d_pos = (residual.row(e) - center).norm();
      const double d_neg = (residual.row(e) + center).norm();
      order[e] = {std::min(d_pos, d_neg), e};
    }
    order = stable_sorted(std::move(order), /*descending=*/false);
    const SpanningForest forest = find_spanning_tree(skeleton, order);
    trees[c] = build_tree(skeleton, forest.tree_edges, residual);
    scores[c] = evaluate_tree(skeleton, trees[c], residual, forest.cycle_edges);
  });

  std::vector<RankedCycle> ranked;
  for (std::size_t c = 0; c < centers; ++c) {
    append_ranked(ranked, scores[c], static_cast<std::uint32_t>(c));
  }
  return pop_candidates(complex, trees, std::move(ranked), m);
}

std::vector<CellCandidate> cs_triangles(const CellComplex& complex, const FlowMatrix& residual,
                                        std::size_t m) {
  const Skeleton& skeleton = complex.skeleton();
  struct Triangle {
    double score;
    NodeId a, b, c;
  };
  std::vector<Triangle> found;
  for (const auto& edge : skeleton.edges()) {
    const NodeId a = std::min(edge.tail, edge.head);
    const NodeId b = std::max(edge.tail, edge.head);
    const auto na = skeleton.neighbors(a);
    const auto nb = skeleton.neighbors(b);
    // common neighbours above b, so each triangle is found once via its two smallest nodes
    auto ia = std::upper_bound(na.begin(), na.end(), b);
    auto ib = std::upper_bound(nb.begin(), nb.end(), b);
    while (ia != na.end() && ib != nb.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        const NodeId c = *ia;
        // canonical walk a -> b -> c -> a
        Eigen::VectorXd circ = Eigen::VectorXd::Zero(residual.cols());
        for (auto [x, y] : {std::pair{a, b}, std::pair{b, c}, std::pair{c, a}}) {
          const auto oe = *skeleton.find_edge(x, y);
          circ += oe.sign * residual.row(oe.edge).transpose();
        }
        found.push_back({circ.lpNorm<1>() / 3.0, a, b, c});
        ++ia;
        ++ib;
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Triangle& x, const Triangle& y) {
    return std::tie(y.score, x.a, x.b, x.c) < std::tie(x.score, y.a, y.b, y.c);
  });

  std::vector<CellCandidate> out;
  for (const auto& t : found) {
    if (out.size() >= m) break;
    const NodeId nodes[] = {t.a, t.b, t.c};
    TwoCell cell = canonicalize(skeleton, nodes);
    if (complex.contains(cell)) continue;
    const EdgeId origin = cell.boundary().front().edge;
    out.push_back({std::move(cell), t.score, origin});
  }
  return out;
}

std::vector<CellCandidate> cs_true_cells(const CellComplex& complex,
                                         std::span<const TwoCell> ground_truth) {
  std::vector<CellCandidate> out;
  for (const auto& cell : ground_truth) {
    if (!complex.contains(cell)) out.push_back({cell, 0.0, cell.boundary().front().edge});
  }
  return out;
}

}  // namespace cellflow
