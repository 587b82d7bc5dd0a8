#include "cellflow/complex.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cellflow/errors.hpp"

namespace cellflow {

Skeleton::Skeleton(std::size_t node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)), adjacency_(node_count) {
  if (node_count_ == 0) throw InvalidInput("skeleton needs at least one node");
  index_.reserve(edges_.size());
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const auto [t, h] = edges_[e];
    if (t >= node_count_ || h >= node_count_) {
      throw InvalidInput("edge " + std::to_string(e) + " references node outside [0, " +
                         std::to_string(node_count_) + ")");
    }
    if (t == h) throw InvalidInput("self-loop at node " + std::to_string(t));
    if (!index_.emplace(pair_key(t, h), e).second) {
      throw InvalidInput("parallel edge between " + std::to_string(t) + " and " + std::to_string(h));
    }
    adjacency_[t].push_back(h);
    adjacency_[h].push_back(t);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

std::optional<OrientedEdge> Skeleton::find_edge(NodeId from, NodeId to) const {
  if (from >= node_count_ || to >= node_count_) return std::nullopt;
  const auto it = index_.find(pair_key(from, to));
  if (it == index_.end()) return std::nullopt;
  const int sign = edges_[it->second].tail == from ? 1 : -1;
  return OrientedEdge{it->second, sign};
}

std::size_t Skeleton::component_count() const {
  std::vector<char> seen(node_count_, 0);
  std::vector<NodeId> stack;
  std::size_t components = 0;
  for (NodeId s = 0; s < node_count_; ++s) {
    if (seen[s]) continue;
    ++components;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : adjacency_[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  return components;
}

std::vector<NodeId> canonical_node_order(std::span<const NodeId> cycle) {
  const std::size_t n = cycle.size();
  std::vector<NodeId> out;
  if (n == 0) return out;
  const std::size_t start =
      static_cast<std::size_t>(std::min_element(cycle.begin(), cycle.end()) - cycle.begin());
  const NodeId next = cycle[(start + 1) % n];
  const NodeId prev = cycle[(start + n - 1) % n];
  out.reserve(n);
  if (next <= prev) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(cycle[(start + i) % n]);
  } else {
    for (std::size_t i = 0; i < n; ++i) out.push_back(cycle[(start + n - i) % n]);
  }
  return out;
}

TwoCell canonicalize(const Skeleton& skeleton, std::span<const NodeId> cycle) {
  if (cycle.size() < 3) throw InvalidInput("a 2-cell needs at least 3 nodes");
  {
    std::vector<NodeId> sorted(cycle.begin(), cycle.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InvalidInput("cycle visits a node twice");
    }
  }
  TwoCell cell;
  cell.nodes_ = canonical_node_order(cycle);
  const auto& nodes = cell.nodes_;
  cell.boundary_.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeId a = nodes[i];
    const NodeId b = nodes[(i + 1) % nodes.size()];
    const auto oe = skeleton.find_edge(a, b);
    if (!oe) {
      throw InvalidInput("cycle uses missing edge " + std::to_string(a) + "-" + std::to_string(b));
    }
    cell.boundary_.push_back({oe->edge, oe->sign});
  }
  return cell;
}

std::string TwoCell::to_string(char sep) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (i) os << sep;
    os << nodes_[i];
  }
  return os.str();
}

std::size_t CellKeyHash::operator()(const std::vector<NodeId>& key) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (NodeId v : key) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

CellComplex::CellComplex(Skeleton skeleton, std::vector<TwoCell> cells)
    : skeleton_(std::move(skeleton)) {
  cells_.reserve(cells.size());
  for (auto& c : cells) add_cell(std::move(c));
}

void CellComplex::add_cell(TwoCell cell) {
  for (const auto& term : cell.boundary()) {
    if (term.edge >= skeleton_.edge_count()) throw InvalidInput("cell references missing edge");
  }
  if (!keys_.insert(cell.key()).second) {
    throw InvalidInput("duplicate cell " + cell.to_string());
  }
  cells_.push_back(std::move(cell));
}

std::size_t CellComplex::boundary_nnz() const {
  return std::accumulate(cells_.begin(), cells_.end(), std::size_t{0},
                         [](std::size_t acc, const TwoCell& c) { return acc + c.length(); });
}

IntSparse build_b1(const Skeleton& skeleton) {
  IntSparse b1(static_cast<Eigen::Index>(skeleton.node_count()),
               static_cast<Eigen::Index>(skeleton.edge_count()));
  std::vector<Eigen::Triplet<int>> trips;
  trips.reserve(2 * skeleton.edge_count());
  for (EdgeId e = 0; e < skeleton.edge_count(); ++e) {
    const auto& ed = skeleton.edge(e);
    trips.emplace_back(ed.tail, e, -1);
    trips.emplace_back(ed.head, e, 1);
  }
  b1.setFromTriplets(trips.begin(), trips.end());
  return b1;
}

IntSparse build_b2(const Skeleton& skeleton, std::span<const TwoCell> cells) {
  IntSparse b2(static_cast<Eigen::Index>(skeleton.edge_count()),
               static_cast<Eigen::Index>(cells.size()));
  CellKeySet seen;
  std::vector<Eigen::Triplet<int>> trips;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (!seen.insert(cells[j].key()).second) {
      throw InvalidInput("duplicate cell " + cells[j].to_string());
    }
    for (const auto& term : cells[j].boundary()) {
      if (term.edge >= skeleton.edge_count()) throw InvalidInput("cell references missing edge");
      trips.emplace_back(term.edge, static_cast<int>(j), term.sign);
    }
  }
  b2.setFromTriplets(trips.begin(), trips.end());
  return b2;
}

IntSparse build_b2(const CellComplex& complex) {
  return build_b2(complex.skeleton(), complex.cells());
}

BoundaryMatrices boundary_matrices(const CellComplex& complex) {
  return {build_b1(complex.skeleton()), build_b2(complex)};
}

Eigen::VectorXd cell_column(const Skeleton& skeleton, const TwoCell& cell) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(skeleton.edge_count()));
  for (const auto& term : cell.boundary()) c[term.edge] = term.sign;
  return c;
}

}  // namespace cellflow
