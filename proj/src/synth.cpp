#include "cellflow/synth.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "cellflow/delaunay.hpp"
#include "cellflow/errors.hpp"

namespace cellflow {

namespace {

constexpr std::int64_t kLattice = std::int64_t{1} << 20;

// Independent stream for flow sampling so that flows do not shift when the
// structural generator changes how many draws it consumes.
constexpr std::uint64_t kFlowStream = 0x9e3779b97f4a7c15ULL;

bool adjacent(const Skeleton& g, NodeId a, NodeId b) {
  const auto nb = g.neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

}  // namespace

void SynthConfig::validate() const {
  if (node_count < 3) throw InvalidInput("synthetic graphs need at least 3 nodes");
  if (min_cell_length < 3) throw InvalidInput("cell length must be >= 3");
  if (max_cell_length < min_cell_length) throw InvalidInput("cell length range is empty");
  if (!(sigma_c >= 0.0) || !(sigma_n >= 0.0)) throw InvalidInput("sigmas must be >= 0");
  if (!(prune_prob >= 0.0 && prune_prob <= 1.0)) throw InvalidInput("prune_prob not in [0,1]");
  if (!(extra_edge_prob >= 0.0 && extra_edge_prob <= 1.0)) {
    throw InvalidInput("extra_edge_prob not in [0,1]");
  }
}

std::vector<TwoCell> plant_cycles(const Skeleton& skeleton, std::size_t count,
                                  std::size_t min_length, std::size_t max_length,
                                  std::mt19937_64& rng) {
  std::vector<TwoCell> cells;
  if (count == 0) return cells;
  min_length = std::max<std::size_t>(min_length, 3);
  CellKeySet keys;
  std::uniform_int_distribution<NodeId> any_node(0, static_cast<NodeId>(skeleton.node_count() - 1));
  std::vector<char> on_path(skeleton.node_count(), 0);
  std::vector<NodeId> path;
  std::vector<NodeId> options;

  const std::size_t budget = 100 * count;
  for (std::size_t attempt = 0; attempt < budget && cells.size() < count; ++attempt) {
    const NodeId start = any_node(rng);
    for (NodeId v : path) on_path[v] = 0;
    path.assign(1, start);
    on_path[start] = 1;
    bool closed = false;
    while (path.size() < max_length) {
      const NodeId cur = path.back();
      if (path.size() >= min_length && adjacent(skeleton, cur, start)) {
        closed = true;
        break;
      }
      const bool last_step = path.size() + 1 == max_length;
      options.clear();
      for (NodeId w : skeleton.neighbors(cur)) {
        if (on_path[w]) continue;
        if (last_step && (path.size() + 1 < 3 || !adjacent(skeleton, w, start))) continue;
        options.push_back(w);
      }
      if (options.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
      const NodeId next = options[pick(rng)];
      on_path[next] = 1;
      path.push_back(next);
    }
    if (!closed && path.size() == max_length && path.size() >= min_length &&
        adjacent(skeleton, path.back(), start)) {
      closed = true;
    }
    if (!closed) continue;
    TwoCell cell = canonicalize(skeleton, path);
    if (keys.insert(cell.key()).second) cells.push_back(std::move(cell));
  }
  for (NodeId v : path) on_path[v] = 0;
  if (cells.size() < count) {
    throw GenerationError("planted only " + std::to_string(cells.size()) + " of " +
                          std::to_string(count) + " cells with length in [" +
                          std::to_string(min_length) + ", " + std::to_string(max_length) +
                          "] after " + std::to_string(budget) + " attempts");
  }
  return cells;
}

SyntheticComplex generate_triangulation_complex(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);

  // 1. uniform points on a fine lattice of the unit square
  std::vector<LatticePoint> lattice;
  lattice.reserve(config.node_count);
  {
    std::uniform_int_distribution<std::int64_t> coord(0, kLattice - 1);
    std::set<std::pair<std::int64_t, std::int64_t>> used;
    while (lattice.size() < config.node_count) {
      const LatticePoint p{coord(rng), coord(rng)};
      if (used.insert({p.x, p.y}).second) lattice.push_back(p);
    }
  }

  // 2. Delaunay skeleton
  const Triangulation tri = delaunay(lattice);
  const Skeleton full(config.node_count, tri.edges);

  // 3. planted cycles
  const std::vector<TwoCell> planted = plant_cycles(full, config.cell_count,
                                                    config.min_cell_length,
                                                    config.max_cell_length, rng);

  // 4. random deletion outside the planted cells
  std::vector<char> keep_node(config.node_count, 1);
  std::vector<char> protected_node(config.node_count, 0);
  std::vector<char> protected_edge(full.edge_count(), 0);
  for (const auto& c : planted) {
    for (NodeId v : c.nodes()) protected_node[v] = 1;
    for (const auto& t : c.boundary()) protected_edge[t.edge] = 1;
  }
  std::bernoulli_distribution drop(config.prune_prob);
  for (NodeId v = 0; v < config.node_count; ++v) {
    if (!protected_node[v] && drop(rng)) keep_node[v] = 0;
  }
  std::vector<char> keep_edge(full.edge_count(), 0);
  std::vector<std::size_t> degree(config.node_count, 0);
  for (EdgeId e = 0; e < full.edge_count(); ++e) {
    const auto& ed = full.edge(e);
    if (!keep_node[ed.tail] || !keep_node[ed.head]) continue;
    if (!protected_edge[e] && drop(rng)) continue;
    keep_edge[e] = 1;
    ++degree[ed.tail];
    ++degree[ed.head];
  }

  std::vector<NodeId> relabel(config.node_count, static_cast<NodeId>(-1));
  SyntheticComplex out{CellComplex(Skeleton(1, {})), {}};
  NodeId next = 0;
  for (NodeId v = 0; v < config.node_count; ++v) {
    if (!keep_node[v] || degree[v] == 0) continue;
    relabel[v] = next++;
    out.points.push_back({static_cast<double>(lattice[v].x) / static_cast<double>(kLattice),
                          static_cast<double>(lattice[v].y) / static_cast<double>(kLattice)});
  }
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < full.edge_count(); ++e) {
    if (!keep_edge[e]) continue;
    const NodeId a = relabel[full.edge(e).tail];
    const NodeId b = relabel[full.edge(e).head];
    edges.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return x.tail != y.tail ? x.tail < y.tail : x.head < y.head;
  });
  if (next == 0) throw GenerationError("pruning removed every node");
  Skeleton pruned(next, std::move(edges));

  std::vector<TwoCell> cells;
  cells.reserve(planted.size());
  for (const auto& c : planted) {
    std::vector<NodeId> nodes;
    for (NodeId v : c.nodes()) nodes.push_back(relabel[v]);
    cells.push_back(canonicalize(pruned, nodes));
  }
  out.complex = CellComplex(std::move(pruned), std::move(cells));
  return out;
}

Skeleton generate_smallworld(std::size_t node_count, double extra_edge_prob, std::uint64_t seed) {
  if (node_count < 3) throw InvalidInput("small-world graphs need at least 3 nodes");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution chord(extra_edge_prob);
  const auto n = static_cast<NodeId>(node_count);
  std::vector<Edge> edges;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      const bool ring = b == a + 1 || (a == 0 && b == n - 1);
      if (ring || chord(rng)) edges.push_back({a, b});
    }
  }
  return Skeleton(node_count, std::move(edges));
}

SyntheticComplex generate_smallworld_complex(const SynthConfig& config) {
  config.validate();
  Skeleton skeleton = generate_smallworld(config.node_count, config.extra_edge_prob, config.seed);
  std::mt19937_64 rng(config.seed ^ 0x5bd1e995ULL);
  std::vector<TwoCell> cells = plant_cycles(skeleton, config.cell_count, config.min_cell_length,
                                            config.max_cell_length, rng);
  return {CellComplex(std::move(skeleton), std::move(cells)), {}};
}

SyntheticComplex generate_complex(const SynthConfig& config) {
  switch (config.family) {
    case GraphFamily::Triangulation: return generate_triangulation_complex(config);
    case GraphFamily::SmallWorld: return generate_smallworld_complex(config);
  }
  throw InvalidInput("unknown graph family");
}

FlowMatrix sample_flows(const CellComplex& truth, const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed ^ kFlowStream);
  std::normal_distribution<double> standard(0.0, 1.0);
  const auto edges = static_cast<Eigen::Index>(truth.skeleton().edge_count());
  const auto cells = static_cast<Eigen::Index>(truth.cell_count());
  const auto samples = static_cast<Eigen::Index>(config.samples);
  Eigen::MatrixXd cell_flow(cells, samples);
  Eigen::MatrixXd noise(edges, samples);
  for (Eigen::Index j = 0; j < samples; ++j) {
    for (Eigen::Index c = 0; c < cells; ++c) cell_flow(c, j) = config.sigma_c * standard(rng);
    for (Eigen::Index e = 0; e < edges; ++e) noise(e, j) = config.sigma_n * standard(rng);
  }
  const RealSparse b2 = to_real(build_b2(truth));
  return b2 * cell_flow + noise;
}

}  // namespace cellflow
