#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "udg/core.hpp"
#include "udg/range_tree.hpp"
#include "udg/rsp_l2.hpp"

namespace udg {

// Pairs (K_g, L_g): K_g holds the points p whose annulus cover uses the
// canonical subset L_g. Stored by canonical id in compressed rows.
struct CanonicalPairs {
  std::vector<CanonicalId> ids;       // canonical ids with non-empty K_g, increasing
  std::vector<std::size_t> offsets;   // K_g = k[offsets[g], offsets[g + 1])
  std::vector<Index> k;

  std::size_t size() const { return ids.size(); }
  std::span<const Index> query_points(std::size_t g) const {
    return {k.data() + offsets[g], offsets[g + 1] - offsets[g]};
  }
};

CanonicalPairs collect_pairs(const PointSet& uv, const RangeTree2D& tree,
                             const RadiusInterval& interval);

// Number of pairs {p, q} with L-infinity distance in (lo, hi].
std::size_t count_in_interval(const PointSet& uv, const RangeTree2D& tree,
                              const RadiusInterval& interval);

// Number of pairs {p, q} with L-infinity distance at most r.
std::size_t count_pairs_leq(const PointSet& uv, const RangeTree2D& tree, double r);

using BipartiteEdge = std::pair<std::uint32_t, std::uint32_t>;

// Union of d random balanced assignments of the a left vertices to the b
// right vertices, parallel edges merged. Deterministic per seed.
std::vector<BipartiteEdge> expander_edges(std::size_t a, std::size_t b, std::size_t d,
                                          std::uint64_t seed);

struct L1SearchOptions {
  std::size_t expander_degree = 64;
  std::uint64_t seed = 1;
  std::size_t stage_cap = 0;  // 0 picks 4 log2 n
};

struct L1SearchStats {
  std::size_t stages = 0;
  bool fallback = false;
  std::vector<std::size_t> counts;  // |Pi ∩ I| before each stage
};

// Shrink the search interval to (a, r*] where r* is the smallest L-infinity
// distance of uv accepted by the search oracle. Returns r*.
double l1_stage_search(const PointSet& uv, const RangeTree2D& tree, IntervalSearch& search,
                       const L1SearchOptions& opts, L1SearchStats* stats = nullptr);

// L1 reverse shortest path, either weighting.
RspResult rsp_l1(const RspInstance& inst, const RspOptions& opts = {});

struct SelectResult {
  double value = 0.0;
  std::size_t decision_calls = 0;
  L1SearchStats stats;
};

// k-th smallest L1 distance among all pairs, 1 <= k <= n(n-1)/2.
SelectResult l1_distance_select(const PointSet& points, std::size_t k,
                                const L1SearchOptions& opts = {},
                                const IntervalObserver& observer = {});

}  // namespace udg
