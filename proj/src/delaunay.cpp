#include "udg/delaunay.hpp"

#include <numeric>
#include <random>

namespace udg {

namespace {

using Real = long double;

Real orient(const Point& a, const Point& b, const Point& c) {
  return (static_cast<Real>(b.x) - a.x) * (static_cast<Real>(c.y) - a.y) -
         (static_cast<Real>(b.y) - a.y) * (static_cast<Real>(c.x) - a.x);
}

// > 0 iff d lies strictly inside the circle through counter-clockwise a, b, c
Real incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const Real adx = static_cast<Real>(a.x) - d.x, ady = static_cast<Real>(a.y) - d.y;
  const Real bdx = static_cast<Real>(b.x) - d.x, bdy = static_cast<Real>(b.y) - d.y;
  const Real cdx = static_cast<Real>(c.x) - d.x, cdy = static_cast<Real>(c.y) - d.y;
  const Real alift = adx * adx + ady * ady;
  const Real blift = bdx * bdx + bdy * bdy;
  const Real clift = cdx * cdx + cdy * cdy;
  return alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
         clift * (adx * bdy - ady * bdx);
}

std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y) {
  std::uint64_t d = 0;
  for (std::uint32_t s = 1u << 15; s > 0; s >>= 1) {
    const std::uint32_t rx = (x & s) ? 1 : 0;
    const std::uint32_t ry = (y & s) ? 1 : 0;
    d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

class Builder {
 public:
  explicit Builder(std::vector<Point> pts) : p_(std::move(pts)), ghost_(static_cast<int>(p_.size())) {}

  // returns false if all points are collinear
  bool run(const std::vector<int>& order) {
    const int a = order[0];
    const int b = order[1];
    std::size_t k = 2;
    while (k < order.size() && orient(p_[a], p_[b], p_[order[k]]) == 0) ++k;
    if (k == order.size()) return false;
    int c = order[k];
    int x = a, y = b;
    if (orient(p_[x], p_[y], p_[c]) < 0) std::swap(x, y);
    std::vector<int> fresh;
    fresh.push_back(make({x, y, c}));
    fresh.push_back(make({y, x, ghost_}));
    fresh.push_back(make({c, y, ghost_}));
    fresh.push_back(make({x, c, ghost_}));
    link(fresh);
    last_ = fresh[0];
    for (std::size_t i = 2; i < order.size(); ++i) {
      if (i == k) continue;
      insert(order[i]);
    }
    return true;
  }

  std::vector<std::array<int, 3>> triangles() const {
    std::vector<std::array<int, 3>> out;
    for (const Tri& t : tris_) {
      if (t.alive && t.v[2] != ghost_) out.push_back(t.v);
    }
    return out;
  }

 private:
  struct Tri {
    std::array<int, 3> v{};
    std::array<int, 3> nb{-1, -1, -1};
    bool alive = true;
    int mark = -1;
  };

  int make(std::array<int, 3> v) {
    if (v[0] == ghost_) v = {v[1], v[2], v[0]};
    else if (v[1] == ghost_) v = {v[2], v[0], v[1]};
    Tri t;
    t.v = v;
    tris_.push_back(t);
    return static_cast<int>(tris_.size() - 1);
  }

  // connect triangles created together along their shared directed edges
  void link(const std::vector<int>& ids) {
    struct Edge {
      int from, to, tri, slot;
    };
    std::vector<Edge> edges;
    for (int id : ids) {
      for (int k = 0; k < 3; ++k) {
        edges.push_back({tris_[id].v[(k + 1) % 3], tris_[id].v[(k + 2) % 3], id, k});
      }
    }
    auto key_less = [](const Edge& l, const Edge& r) {
      return l.from != r.from ? l.from < r.from : l.to < r.to;
    };
    std::vector<Edge> sorted = edges;
    std::sort(sorted.begin(), sorted.end(), key_less);
    for (const Edge& e : edges) {
      const Edge probe{e.to, e.from, 0, 0};
      auto it = std::lower_bound(sorted.begin(), sorted.end(), probe, key_less);
      if (it != sorted.end() && it->from == e.to && it->to == e.from) {
        tris_[e.tri].nb[e.slot] = it->tri;
      }
    }
  }

  bool conflict(int t, int q) const {
    const Tri& tri = tris_[t];
    const Point& pq = p_[q];
    if (tri.v[2] != ghost_) {
      return incircle(p_[tri.v[0]], p_[tri.v[1]], p_[tri.v[2]], pq) > 0;
    }
    const Point& a = p_[tri.v[0]];
    const Point& b = p_[tri.v[1]];
    const Real o = orient(a, b, pq);
    if (o > 0) return true;
    if (o < 0) return false;
    const Real dot = (static_cast<Real>(pq.x) - a.x) * (static_cast<Real>(b.x) - a.x) +
                     (static_cast<Real>(pq.y) - a.y) * (static_cast<Real>(b.y) - a.y);
    const Real len = (static_cast<Real>(b.x) - a.x) * (static_cast<Real>(b.x) - a.x) +
                     (static_cast<Real>(b.y) - a.y) * (static_cast<Real>(b.y) - a.y);
    return dot > 0 && dot < len;
  }

  int locate(int q) {
    int t = last_;
    if (!tris_[t].alive) {
      for (t = static_cast<int>(tris_.size()) - 1; !tris_[t].alive; --t) {
      }
    }
    const Point& pq = p_[q];
    for (std::size_t guard = 0; guard < 4 * tris_.size() + 16; ++guard) {
      const Tri& tri = tris_[t];
      if (tri.v[2] == ghost_) {
        if (conflict(t, q)) return t;
        t = tri.nb[2];
        continue;
      }
      const int start = static_cast<int>(rng_() % 3);
      int next = -1;
      for (int i = 0; i < 3; ++i) {
        const int k = (start + i) % 3;
        if (orient(p_[tri.v[(k + 1) % 3]], p_[tri.v[(k + 2) % 3]], pq) < 0) {
          next = tri.nb[k];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
      if (tris_[i].alive && conflict(i, q)) return i;
    }
    throw ConsistencyError("delaunay point location failed");
  }

  void insert(int q) {
    const int start = locate(q);
    std::vector<int> cavity{start};
    tris_[start].mark = q;
    struct Boundary {
      int u, w, outside, outside_slot;
    };
    std::vector<Boundary> boundary;
    for (std::size_t i = 0; i < cavity.size(); ++i) {
      const int t = cavity[i];
      for (int k = 0; k < 3; ++k) {
        const int n = tris_[t].nb[k];
        if (tris_[n].mark == q) continue;
        if (conflict(n, q)) {
          tris_[n].mark = q;
          cavity.push_back(n);
          continue;
        }
        int slot = 0;
        while (tris_[n].nb[slot] != t) ++slot;
        boundary.push_back({tris_[t].v[(k + 1) % 3], tris_[t].v[(k + 2) % 3], n, slot});
      }
    }
    for (int t : cavity) tris_[t].alive = false;
    std::vector<int> fresh;
    fresh.reserve(boundary.size());
    for (const Boundary& e : boundary) {
      const int id = make({e.u, e.w, q});
      // the slot opposite q now faces the outside triangle
      int slot = 0;
      while (tris_[id].v[slot] != q) ++slot;
      tris_[id].nb[slot] = e.outside;
      tris_[e.outside].nb[e.outside_slot] = id;
      fresh.push_back(id);
    }
    link_inner(fresh, q);
    last_ = fresh.front();
  }

  // link new triangles along edges incident to q
  void link_inner(const std::vector<int>& ids, int q) {
    struct Edge {
      int from, to, tri, slot;
    };
    std::vector<Edge> edges;
    for (int id : ids) {
      for (int k = 0; k < 3; ++k) {
        const int a = tris_[id].v[(k + 1) % 3];
        const int b = tris_[id].v[(k + 2) % 3];
        if (a == q || b == q) edges.push_back({a, b, id, k});
      }
    }
    auto key_less = [](const Edge& l, const Edge& r) {
      return l.from != r.from ? l.from < r.from : l.to < r.to;
    };
    std::vector<Edge> sorted = edges;
    std::sort(sorted.begin(), sorted.end(), key_less);
    for (const Edge& e : edges) {
      const Edge probe{e.to, e.from, 0, 0};
      auto it = std::lower_bound(sorted.begin(), sorted.end(), probe, key_less);
      if (it == sorted.end() || it->from != e.to || it->to != e.from) {
        throw ConsistencyError("delaunay cavity is not closed");
      }
      tris_[e.tri].nb[e.slot] = it->tri;
    }
  }

  std::vector<Point> p_;
  int ghost_;
  std::vector<Tri> tris_;
  int last_ = 0;
  std::mt19937 rng_{12345};
};

}  // namespace

double orient2d(const Point& a, const Point& b, const Point& c) {
  return static_cast<double>(orient(a, b, c));
}

Point circumcenter(const Point& a, const Point& b, const Point& c) {
  const Real bx = static_cast<Real>(b.x) - a.x, by = static_cast<Real>(b.y) - a.y;
  const Real cx = static_cast<Real>(c.x) - a.x, cy = static_cast<Real>(c.y) - a.y;
  const Real d = 2 * (bx * cy - by * cx);
  const Real b2 = bx * bx + by * by;
  const Real c2 = cx * cx + cy * cy;
  const Real ux = (cy * b2 - by * c2) / d;
  const Real uy = (bx * c2 - cx * b2) / d;
  return {static_cast<double>(a.x + ux), static_cast<double>(a.y + uy)};
}

Triangulation delaunay(std::span<const Point> points, std::uint64_t seed) {
  Triangulation out;
  const std::size_t n = points.size();
  if (n < 2) return out;

  std::vector<Index> sorted(n);
  std::iota(sorted.begin(), sorted.end(), Index{0});
  std::sort(sorted.begin(), sorted.end(), [&](Index a, Index b) {
    if (points[a].x != points[b].x) return points[a].x < points[b].x;
    if (points[a].y != points[b].y) return points[a].y < points[b].y;
    return a < b;
  });
  std::vector<Index> reps;  // first occurrence of each distinct point, in sorted order
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || !(points[sorted[i]] == points[sorted[i - 1]])) reps.push_back(sorted[i]);
  }
  auto collinear_path = [&] {
    for (std::size_t i = 1; i < reps.size(); ++i) {
      out.edges.push_back({std::min(reps[i - 1], reps[i]), std::max(reps[i - 1], reps[i])});
    }
    std::sort(out.edges.begin(), out.edges.end());
  };
  if (reps.size() < 3) {
    collinear_path();
    return out;
  }

  // relative coordinates, inserted in Hilbert order with a shuffled prefix
  const Point origin = points[reps[0]];
  double span = 0.0;
  std::vector<Point> local;
  local.reserve(reps.size());
  for (Index r : reps) {
    local.push_back({points[r].x - origin.x, points[r].y - origin.y});
    span = std::max({span, std::abs(local.back().x), std::abs(local.back().y)});
  }
  const std::size_t m = local.size();
  std::vector<std::pair<std::uint64_t, int>> keyed(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sx = span > 0 ? (local[i].x / span + 1.0) / 2.0 : 0.0;
    const double sy = span > 0 ? (local[i].y / span + 1.0) / 2.0 : 0.0;
    const auto qx = static_cast<std::uint32_t>(std::clamp(sx, 0.0, 1.0) * 65535.0);
    const auto qy = static_cast<std::uint32_t>(std::clamp(sy, 0.0, 1.0) * 65535.0);
    keyed[i] = {hilbert_index(qx, qy), static_cast<int>(i)};
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = keyed[i].second;
  std::mt19937_64 rng(seed);
  const std::size_t prefix = std::min<std::size_t>(m, 8);
  std::shuffle(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(prefix), rng);

  Builder builder(std::move(local));
  if (!builder.run(order)) {
    collinear_path();
    return out;
  }
  for (const auto& t : builder.triangles()) {
    out.triangles.push_back({reps[t[0]], reps[t[1]], reps[t[2]]});
    for (int k = 0; k < 3; ++k) {
      const Index a = reps[t[k]];
      const Index b = reps[t[(k + 1) % 3]];
      out.edges.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

std::vector<std::array<Index, 3>> delaunay_brute_force(std::span<const Point> points) {
  std::vector<std::array<Index, 3>> out;
  const auto n = static_cast<Index>(points.size());
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) {
        Real o = orient(points[i], points[j], points[k]);
        if (o == 0) continue;
        std::array<Index, 3> t{i, j, k};
        if (o < 0) std::swap(t[1], t[2]);
        bool empty = true;
        for (Index q = 0; q < n && empty; ++q) {
          if (q == i || q == j || q == k) continue;
          if (incircle(points[t[0]], points[t[1]], points[t[2]], points[q]) > 0) empty = false;
        }
        if (empty) out.push_back(t);
      }
    }
  }
  return out;
}

}  // namespace udg
