#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "udg/core.hpp"
#include "udg/envelope.hpp"
#include "udg/grid.hpp"
#include "udg/sssp.hpp"

namespace udg {

struct RspInstance {
  PointSet points;
  Index s = 0;
  Index t = 0;
  double lambda = 1.0;
  Metric metric = Metric::L2;
  bool weighted = false;
  bool single_source = false;
};

struct RspOptions {
  // cells with at least this many points are large; nullopt picks the default
  std::optional<double> threshold;
  std::size_t expander_degree = 64;
  std::uint64_t seed = 1;
  IntervalObserver observer;
  MatrixSearch matrix_search = MatrixSearch::Selection;
  // snap and check the result against all pairwise distances (O(n^2))
  bool verify = false;
};

struct RspStats {
  std::size_t decision_calls = 0;
  std::size_t steps = 0;   // BFS steps, WX iterations or L1 stages
  std::size_t stages = 0;  // observer notifications
};

struct RspResult {
  double r_star = 0.0;
  RspStats stats;
};

// Binary search over all pairwise distances with the decision procedure.
// Works for every metric and weighting. Throws InfeasibleError.
RspResult rsp_baseline(const RspInstance& inst, const RspOptions& opts = {});

// Parametric BFS (L2, unweighted).
RspResult rsp_unweighted_algo1(const RspInstance& inst, const RspOptions& opts = {});

// Parametric BFS where instances between two small cells are solved at the
// sample radius after small_pair_preprocess (L2, unweighted).
RspResult rsp_unweighted_algo2(const RspInstance& inst, const RspOptions& opts = {});

// Parametric cell-by-cell weighted SSSP (L2, weighted).
RspResult rsp_weighted(const RspInstance& inst, const RspOptions& opts = {});

// (n / log n)^(3/4) and n^(3/4) log^(3/2) n, logarithms base 2.
double default_threshold_unweighted(std::size_t n);
double default_threshold_weighted(std::size_t n);

struct IndexSetPair {
  std::span<const Index> a;
  std::span<const Index> b;
};

// Shrink the interval until no distance between a[i] and b[i] of any pair
// lies in its interior.
void small_pair_preprocess(const PointSet& points, std::span<const IndexSetPair> pairs,
                           IntervalSearch& search);

// For each v, the smallest i with |u[i] - v| <= r* (-1 if none). u and v are
// separated by an axis-parallel line; side is the side of v.
std::vector<int> partition_v_parametric(const PointSet& points, std::span<const Index> u,
                                        std::span<const Index> v, Side side,
                                        IntervalSearch& search);

}  // namespace udg
