#include "cellflow/delaunay.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cellflow/errors.hpp"

namespace cellflow {

namespace {

constexpr std::int64_t kSuper = std::int64_t{1} << 26;

std::int64_t orient(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// > 0 iff d lies strictly inside the circumcircle of counter-clockwise (a, b, c).
int incircle(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c,
             const LatticePoint& d) {
  using I = __int128;
  const I adx = a.x - d.x, ady = a.y - d.y;
  const I bdx = b.x - d.x, bdy = b.y - d.y;
  const I cdx = c.x - d.x, cdy = c.y - d.y;
  const I alift = adx * adx + ady * ady;
  const I blift = bdx * bdx + bdy * bdy;
  const I clift = cdx * cdx + cdy * cdy;
  const I det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                clift * (adx * bdy - bdx * ady);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

std::uint64_t hilbert_index(std::uint64_t x, std::uint64_t y) {
  constexpr std::uint64_t n = std::uint64_t{1} << 24;
  std::uint64_t d = 0;
  for (std::uint64_t s = n / 2; s > 0; s /= 2) {
    const std::uint64_t rx = (x & s) ? 1 : 0;
    const std::uint64_t ry = (y & s) ? 1 : 0;
    d += s * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = n - 1 - x;
        y = n - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

struct Tri {
  std::array<std::uint32_t, 3> v;
  std::array<std::int32_t, 3> nb;  // neighbour opposite v[i], -1 on the outer boundary
  bool alive;
};

class Builder {
 public:
  explicit Builder(std::span<const LatticePoint> points) : n_(points.size()) {
    pts_.assign(points.begin(), points.end());
    pts_.push_back({-kSuper, -kSuper});
    pts_.push_back({kSuper, -kSuper});
    pts_.push_back({0, kSuper});
    const auto s = static_cast<std::uint32_t>(n_);
    tris_.push_back({{s, s + 1, s + 2}, {-1, -1, -1}, true});
    first_of_.assign(pts_.size(), -1);
    second_of_.assign(pts_.size(), -1);
  }

  void insert(std::uint32_t p) {
    const std::int32_t start = locate(pts_[p]);
    carve(start, p);
  }

  Triangulation finish() const {
    Triangulation out;
    for (const auto& t : tris_) {
      if (!t.alive) continue;
      if (t.v[0] >= n_ || t.v[1] >= n_ || t.v[2] >= n_) continue;
      out.triangles.push_back({t.v[0], t.v[1], t.v[2]});
      for (int i = 0; i < 3; ++i) {
        const NodeId a = t.v[i];
        const NodeId b = t.v[(i + 1) % 3];
        out.edges.push_back({std::min(a, b), std::max(a, b)});
      }
    }
    // hull edges whose outer triangle touches the super-triangle
    for (const auto& t : tris_) {
      if (!t.alive) continue;
      int outer = 0;
      for (auto v : t.v) outer += v >= n_ ? 1 : 0;
      if (outer != 1) continue;
      for (int i = 0; i < 3; ++i) {
        if (t.v[i] < n_) continue;
        const NodeId a = t.v[(i + 1) % 3];
        const NodeId b = t.v[(i + 2) % 3];
        out.edges.push_back({std::min(a, b), std::max(a, b)});
      }
    }
    std::sort(out.edges.begin(), out.edges.end(), [](const Edge& x, const Edge& y) {
      return x.tail != y.tail ? x.tail < y.tail : x.head < y.head;
    });
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
    return out;
  }

 private:
  std::int32_t locate(const LatticePoint& p) {
    std::int32_t t = last_;
    std::uint32_t rot = 0;
    for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
      const Tri& tri = tris_[static_cast<std::size_t>(t)];
      bool moved = false;
      rot = rot * 1103515245u + 12345u;
      const std::uint32_t off = (rot >> 16) % 3;
      for (std::uint32_t k = 0; k < 3; ++k) {
        const std::uint32_t i = (k + off) % 3;
        const auto& a = pts_[tri.v[(i + 1) % 3]];
        const auto& b = pts_[tri.v[(i + 2) % 3]];
        if (orient(a, b, p) < 0 && tri.nb[i] >= 0) {
          t = tri.nb[i];
          moved = true;
          break;
        }
      }
      if (!moved) return t;
    }
    throw InvalidInput("delaunay: point location did not terminate");
  }

  void carve(std::int32_t start, std::uint32_t p) {
    const LatticePoint& pp = pts_[p];
    state_.resize(tris_.size(), 0);
    std::vector<std::int32_t> cavity{start};
    std::vector<std::int32_t> touched{start};
    state_[static_cast<std::size_t>(start)] = 1;
    for (std::size_t k = 0; k < cavity.size(); ++k) {
      const Tri& t = tris_[static_cast<std::size_t>(cavity[k])];
      for (std::int32_t nb : t.nb) {
        if (nb < 0 || state_[static_cast<std::size_t>(nb)] != 0) continue;
        const Tri& o = tris_[static_cast<std::size_t>(nb)];
        const bool inside = incircle(pts_[o.v[0]], pts_[o.v[1]], pts_[o.v[2]], pp) > 0;
        state_[static_cast<std::size_t>(nb)] = inside ? 1 : 2;
        touched.push_back(nb);
        if (inside) cavity.push_back(nb);
      }
    }

    struct Rim {
      std::uint32_t a, b;
      std::int32_t outside, old;
    };
    std::vector<Rim> rim;
    for (std::int32_t c : cavity) {
      const Tri& t = tris_[static_cast<std::size_t>(c)];
      for (int i = 0; i < 3; ++i) {
        const std::int32_t nb = t.nb[i];
        if (nb >= 0 && state_[static_cast<std::size_t>(nb)] == 1) continue;
        rim.push_back({t.v[(i + 1) % 3], t.v[(i + 2) % 3], nb, c});
      }
    }
    for (std::int32_t c : touched) state_[static_cast<std::size_t>(c)] = 0;
    for (std::int32_t c : cavity) tris_[static_cast<std::size_t>(c)].alive = false;

    std::vector<std::int32_t> created;
    created.reserve(rim.size());
    for (const auto& r : rim) {
      if (orient(pts_[r.a], pts_[r.b], pp) <= 0) {
        throw InvalidInput("delaunay: degenerate cavity at point " + std::to_string(p));
      }
      const auto id = static_cast<std::int32_t>(tris_.size());
      tris_.push_back({{r.a, r.b, p}, {-1, -1, r.outside}, true});
      if (r.outside >= 0) {
        for (auto& nb : tris_[static_cast<std::size_t>(r.outside)].nb) {
          if (nb == r.old) nb = id;
        }
      }
      first_of_[r.a] = id;
      second_of_[r.b] = id;
      created.push_back(id);
    }
    for (std::int32_t id : created) {
      Tri& t = tris_[static_cast<std::size_t>(id)];
      t.nb[0] = first_of_[t.v[1]];   // edge (b, p)
      t.nb[1] = second_of_[t.v[0]];  // edge (p, a)
    }
    for (std::int32_t id : created) {
      const Tri& t = tris_[static_cast<std::size_t>(id)];
      first_of_[t.v[0]] = -1;
      second_of_[t.v[1]] = -1;
    }
    last_ = created.front();
  }

  std::size_t n_;
  std::vector<LatticePoint> pts_;
  std::vector<Tri> tris_;
  std::vector<char> state_;
  std::vector<std::int32_t> first_of_;
  std::vector<std::int32_t> second_of_;
  std::int32_t last_ = 0;
};

}  // namespace

Triangulation delaunay(std::span<const LatticePoint> points) {
  for (const auto& p : points) {
    if (p.x < 0 || p.y < 0 || p.x >= kMaxLatticeCoordinate || p.y >= kMaxLatticeCoordinate) {
      throw InvalidInput("delaunay: coordinate outside lattice range");
    }
  }
  std::vector<std::uint32_t> order(points.size());
  std::iota(order.begin(), order.end(), 0u);
  std::vector<std::uint64_t> key(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    key[i] = hilbert_index(static_cast<std::uint64_t>(points[i].x),
                           static_cast<std::uint64_t>(points[i].y));
  }
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (key[a] != key[b]) return key[a] < key[b];
    if (points[a].x != points[b].x) return points[a].x < points[b].x;
    return points[a].y < points[b].y;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (points[order[i]] == points[order[i - 1]]) {
      throw InvalidInput("delaunay: duplicate point " + std::to_string(order[i]));
    }
  }
  Builder builder(points);
  for (std::uint32_t p : order) builder.insert(p);
  return builder.finish();
}

}  // namespace cellflow
