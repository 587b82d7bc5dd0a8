#include "cellflow/lca.hpp"

#include "cellflow/errors.hpp"
#include "cellflow/union_find.hpp"

namespace cellflow {

std::vector<NodeId> offline_lca(std::span<const NodeId> parent,
                                std::span<const std::pair<NodeId, NodeId>> queries) {
  const std::size_t n = parent.size();

  // children in CSR form
  std::vector<std::uint32_t> child_start(n + 1, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (parent[v] >= n) throw InvalidInput("offline_lca: parent index out of range");
    if (parent[v] != v) ++child_start[parent[v] + 1];
  }
  for (std::size_t i = 0; i < n; ++i) child_start[i + 1] += child_start[i];
  std::vector<NodeId> children(child_start[n]);
  {
    std::vector<std::uint32_t> fill(child_start.begin(), child_start.end() - 1);
    for (NodeId v = 0; v < n; ++v)
      if (parent[v] != v) children[fill[parent[v]]++] = v;
  }

  // queries attached to both endpoints
  std::vector<std::uint32_t> query_start(n + 1, 0);
  for (const auto& [a, b] : queries) {
    if (a >= n || b >= n) throw InvalidInput("offline_lca: query node out of range");
    ++query_start[a + 1];
    ++query_start[b + 1];
  }
  for (std::size_t i = 0; i < n; ++i) query_start[i + 1] += query_start[i];
  std::vector<std::pair<NodeId, std::uint32_t>> incident(query_start[n]);
  {
    std::vector<std::uint32_t> fill(query_start.begin(), query_start.end() - 1);
    for (std::uint32_t q = 0; q < queries.size(); ++q) {
      const auto [a, b] = queries[q];
      incident[fill[a]++] = {b, q};
      incident[fill[b]++] = {a, q};
    }
  }

  constexpr NodeId kUnset = static_cast<NodeId>(-1);
  std::vector<NodeId> answer(queries.size(), kUnset);
  UnionFind sets(n);
  std::vector<NodeId> ancestor(n);
  std::vector<char> done(n, 0);
  std::vector<NodeId> tree_of(n, kUnset);

  // Iterative DFS: (node, next child offset).
  std::vector<std::pair<NodeId, std::uint32_t>> stack;
  for (NodeId root = 0; root < n; ++root) {
    if (parent[root] != root) continue;
    stack.push_back({root, child_start[root]});
    ancestor[root] = root;
    tree_of[root] = root;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < child_start[v + 1]) {
        const NodeId c = children[next++];
        ancestor[c] = c;
        tree_of[c] = root;
        stack.push_back({c, child_start[c]});
        continue;
      }
      const NodeId finished = v;
      done[finished] = 1;
      for (std::uint32_t i = query_start[finished]; i < query_start[finished + 1]; ++i) {
        const auto [other, q] = incident[i];
        if (!done[other]) continue;
        if (tree_of[other] != root) {
          throw InvalidInput("offline_lca: query endpoints lie in different trees");
        }
        answer[q] = ancestor[sets.find(other)];
      }
      stack.pop_back();
      if (!stack.empty()) {
        const NodeId p = stack.back().first;
        ancestor[sets.join(p, finished)] = p;
      }
    }
  }

  for (NodeId a : answer) {
    if (a == kUnset) throw InvalidInput("offline_lca: parent array is not a rooted forest");
  }
  return answer;
}

}  // namespace cellflow
