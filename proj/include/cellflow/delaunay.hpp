#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cellflow/complex.hpp"

namespace cellflow {

/// Point on the integer lattice; all predicates on these are exact.
struct LatticePoint {
  std::int64_t x;
  std::int64_t y;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

/// Coordinates must lie in [0, kMaxLatticeCoordinate).
inline constexpr std::int64_t kMaxLatticeCoordinate = std::int64_t{1} << 24;

struct Triangulation {
  std::vector<std::array<NodeId, 3>> triangles;  ///< counter-clockwise
  std::vector<Edge> edges;                       ///< tail < head, sorted
};

/// Incremental Bowyer-Watson Delaunay triangulation with exact integer
/// orientation and in-circle tests. Points are inserted in Hilbert order and
/// located by a visibility walk.
///
/// A bounding super-triangle is used, so a few near-degenerate convex-hull
/// triangles can be missing; every returned triangle is Delaunay.
/// Throws InvalidInput on duplicate or out-of-range points.
Triangulation delaunay(std::span<const LatticePoint> points);

}  // namespace cellflow
