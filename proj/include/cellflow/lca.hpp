#pragma once

#include <span>
#include <utility>
#include <vector>

#include "cellflow/complex.hpp"

namespace cellflow {

/// Tarjan's offline lowest-common-ancestor algorithm over a rooted forest.
///
/// `parent[v] == v` marks a root. Every query pair must lie in the same tree.
/// One DFS over the forest answers all queries; result i belongs to query i.
std::vector<NodeId> offline_lca(std::span<const NodeId> parent,
                                std::span<const std::pair<NodeId, NodeId>> queries);

}  // namespace cellflow
