#pragma once

#include <cstddef>
#include <vector>

#include "udg/core.hpp"
#include "udg/grid.hpp"

namespace udg {

// Shortest path distance per point, kInf when unreachable. Hop counts are
// stored as doubles.
using DistArray = std::vector<double>;

inline constexpr Index kNoIndex = static_cast<Index>(-1);

struct SearchLimit {
  double max_hops = kInf;    // unweighted only: stop after this many BFS steps
  Index target = kNoIndex;   // stop once the target's distance is final
};

// BFS in G_r(P) under L2 using the grid and bichromatic envelopes.
DistArray bfs_unweighted(const PointSet& points, Index s, double r,
                         const SearchLimit& limit = {});

// BFS in G_r(P) under L1; takes the rotated point set.
DistArray bfs_unweighted_l1(const RotatedPointSet& rotated, Index s, double r,
                            const SearchLimit& limit = {});

// Weighted SSSP in G_r(P) under L2 (cell-by-cell Dijkstra variant).
DistArray wx_weighted(const PointSet& points, Index s, double r,
                      const SearchLimit& limit = {});

// Weighted SSSP in G_r(P) under L1 (Dijkstra over grid patches).
DistArray dijkstra_l1(const RotatedPointSet& rotated, Index s, double r,
                      const SearchLimit& limit = {});

// Explicit-graph BFS/Dijkstra. Throws OracleCapError when n exceeds cap.
DistArray reference_sssp(const PointSet& points, Index s, double r, Metric m,
                         bool weighted, std::size_t cap);

// Default oracle cap: UDG_ORACLE_CAP or 4096.
std::size_t oracle_cap_from_env();

// Additively weighted nearest neighbour with insertions (logarithmic method).
class AwnnIndex {
 public:
  void insert(const Point& p, double weight);
  // min over inserted (q, w) of w + |q - p|; kInf when empty
  double query(const Point& p) const;
  std::size_t size() const { return count_; }

 private:
  struct Site {
    Point p;
    double w;
  };
  std::vector<std::vector<Site>> buckets_;  // bucket k empty or of size 2^k, sorted by weight
  std::size_t count_ = 0;
};

// d_r(s, t) <= lambda (or max_t d_r(s, t) <= lambda) for one fixed problem.
class DecisionProblem {
 public:
  DecisionProblem(PointSet points, Metric metric, bool weighted, Index s, Index t,
                  double lambda, bool single_source);

  bool operator()(double r) const;
  DistArray distances(double r, const SearchLimit& limit) const;

  const PointSet& points() const { return points_; }
  const RotatedPointSet& rotated() const { return rotated_; }
  Metric metric() const { return metric_; }
  bool weighted() const { return weighted_; }
  Index source() const { return s_; }
  Index target() const { return t_; }
  // unweighted lambda is floored
  double lambda() const { return lambda_; }
  bool single_source() const { return single_source_; }

 private:
  PointSet points_;
  RotatedPointSet rotated_;
  Metric metric_;
  bool weighted_;
  Index s_, t_;
  double lambda_;
  bool single_source_;
};

bool decide(const PointSet& points, Index s, Index t, double lambda, double r,
            Metric metric, bool weighted, bool single_source = false);

}  // namespace udg
