#pragma once

#include <array>
#include <span>
#include <vector>

#include "udg/core.hpp"

namespace udg {

struct Triangulation {
  // counter-clockwise triangles over indices into the input
  std::vector<std::array<Index, 3>> triangles;
  // undirected edges (i < j)
  std::vector<std::array<Index, 2>> edges;
};

// Delaunay triangulation by randomized incremental insertion. Duplicate
// points are merged into their first occurrence; collinear input yields no
// triangles and the path through the sorted points as edges.
Triangulation delaunay(std::span<const Point> points, std::uint64_t seed = 0x5eed);

// Triangles of all triples whose circumcircle has no point strictly inside.
// O(n^4); used as a reference.
std::vector<std::array<Index, 3>> delaunay_brute_force(std::span<const Point> points);

// Circumcenter of a non-degenerate triangle.
Point circumcenter(const Point& a, const Point& b, const Point& c);

double orient2d(const Point& a, const Point& b, const Point& c);

}  // namespace udg
