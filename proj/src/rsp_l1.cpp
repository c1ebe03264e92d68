#include "udg/rsp_l1.hpp"

#include <numeric>
#include <random>

#include "rsp_common.hpp"

namespace udg {

CanonicalPairs collect_pairs(const PointSet& uv, const RangeTree2D& tree,
                             const RadiusInterval& interval) {
  const auto rects = annulus_rects(interval);
  const std::size_t n = uv.size();
  std::vector<std::size_t> row(n + 1, 0);
  std::vector<CanonicalId> cover;
  for (Index p = 0; p < n; ++p) {
    for (const auto& rect : rects) tree.report(uv[p], rect, cover);
    row[p + 1] = cover.size();
  }
  // invert p -> R_p into L_g -> K_g by counting sort
  std::vector<std::size_t> count(tree.canonical_count() + 1, 0);
  for (CanonicalId g : cover) ++count[g + 1];
  for (std::size_t g = 0; g < tree.canonical_count(); ++g) count[g + 1] += count[g];
  CanonicalPairs out;
  out.k.resize(cover.size());
  std::vector<std::size_t> fill(count.begin(), count.end() - 1);
  for (Index p = 0; p < n; ++p) {
    for (std::size_t e = row[p]; e < row[p + 1]; ++e) out.k[fill[cover[e]]++] = p;
  }
  out.offsets.push_back(0);
  for (std::size_t g = 0; g < tree.canonical_count(); ++g) {
    if (count[g + 1] == count[g]) continue;
    out.ids.push_back(static_cast<CanonicalId>(g));
    out.offsets.push_back(count[g + 1]);
  }
  return out;
}

std::size_t count_in_interval(const PointSet& uv, const RangeTree2D& tree,
                              const RadiusInterval& interval) {
  const auto rects = annulus_rects(interval);
  std::size_t total = 0;
  for (Index p = 0; p < uv.size(); ++p) {
    for (const auto& rect : rects) total += tree.count(uv[p], rect);
  }
  return total / 2;
}

std::size_t count_pairs_leq(const PointSet& uv, const RangeTree2D& tree, double r) {
  if (r < 0.0) return 0;
  const OffsetRange side{-r, r, false, false};
  std::size_t total = 0;
  for (Index p = 0; p < uv.size(); ++p) total += tree.count(uv[p], {side, side});
  return (total - uv.size()) / 2;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<BipartiteEdge> expander_edges(std::size_t a, std::size_t b, std::size_t d,
                                          std::uint64_t seed) {
  std::vector<BipartiteEdge> edges;
  if (a == 0 || b == 0 || d == 0) return edges;
  std::minstd_rand rng(static_cast<std::uint32_t>(mix(seed) % 2147483646ULL) + 1);
  std::vector<std::uint32_t> perm(a);
  std::iota(perm.begin(), perm.end(), std::uint32_t{0});
  edges.reserve(a * d);
  for (std::size_t round = 0; round < d; ++round) {
    std::shuffle(perm.begin(), perm.end(), rng);
    // rotate the right side so loads stay balanced across rounds
    const std::size_t shift = (round * a) % b;
    for (std::size_t i = 0; i < a; ++i) {
      edges.push_back({perm[i], static_cast<std::uint32_t>((i + shift) % b)});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

namespace {

// Distances of the expander edges of every normalized block, restricted to
// the interior of the interval.
std::vector<double> stage_candidates(const PointSet& uv, const RangeTree2D& tree,
                                     const CanonicalPairs& pairs, const RadiusInterval& iv,
                                     std::size_t degree, std::uint64_t seed) {
  std::vector<double> w;
  std::vector<Index> left, right;
  for (std::size_t g = 0; g < pairs.size(); ++g) {
    const auto kg = pairs.query_points(g);
    const auto lg = tree.members(pairs.ids[g]);
    // name exchange: the larger side is partitioned into blocks
    const bool swap = kg.size() < lg.size();
    const auto big = swap ? lg : kg;
    const auto small = swap ? kg : lg;
    const std::size_t blocks = big.size() / small.size();
    const std::size_t base = big.size() / blocks;
    const std::size_t extra = big.size() % blocks;
    std::size_t at = 0;
    for (std::size_t i = 0; i < blocks; ++i) {
      const std::size_t len = base + (i < extra ? 1 : 0);
      const auto block = big.subspan(at, len);
      at += len;
      auto push = [&](Index p, Index q) {
        const double d = dist_linf(uv[p], uv[q]);
        if (iv.interior(d)) w.push_back(d);
      };
      if (small.size() <= degree) {
        for (Index p : block) {
          for (Index q : small) push(p, q);
        }
        continue;
      }
      const std::uint64_t key = mix(seed ^ mix(pairs.ids[g] * 0x100000001B3ULL + i));
      for (const auto& [x, y] : expander_edges(block.size(), small.size(), degree, key)) {
        push(block[x], small[y]);
      }
    }
  }
  return w;
}

// Resolve every distance of Pi inside the interval, sampling when there are
// more than the budget.
void enumerate_and_shrink(const PointSet& uv, const RangeTree2D& tree, IntervalSearch& search,
                          std::uint64_t seed) {
  constexpr std::size_t kBudget = std::size_t{1} << 22;
  std::mt19937_64 rng(seed);
  std::vector<double> keep;
  while (true) {
    const RadiusInterval iv = search.interval();
    const auto rects = annulus_rects(iv);
    keep.clear();
    std::size_t seen = 0;
    for (Index p = 0; p < uv.size(); ++p) {
      for (const auto& rect : rects) {
        tree.for_each(uv[p], rect, [&](Index q) {
          if (q <= p) return;
          const double d = dist_linf(uv[p], uv[q]);
          if (!iv.interior(d)) return;
          ++seen;
          if (keep.size() < kBudget) {
            keep.push_back(d);
          } else {
            const std::size_t slot = std::uniform_int_distribution<std::size_t>(0, seen - 1)(rng);
            if (slot < kBudget) keep[slot] = d;
          }
        });
      }
    }
    search.shrink(keep, "l1-stage");
    if (seen <= kBudget) return;
  }
}

}  // namespace

double l1_stage_search(const PointSet& uv, const RangeTree2D& tree, IntervalSearch& search,
                       const L1SearchOptions& opts, L1SearchStats* stats) {
  const std::size_t n = uv.size();
  std::size_t cap = opts.stage_cap;
  if (cap == 0) cap = 4 * static_cast<std::size_t>(std::ceil(std::log2(std::max<std::size_t>(n, 2))));
  L1SearchStats local;
  L1SearchStats& st = stats ? *stats : local;
  while (true) {
    const RadiusInterval iv = search.interval();
    const std::size_t remaining = count_in_interval(uv, tree, iv);
    st.counts.push_back(remaining);
    if (remaining <= n) {
      enumerate_and_shrink(uv, tree, search, opts.seed);
      break;
    }
    if (st.stages >= cap) {
      st.fallback = true;
      enumerate_and_shrink(uv, tree, search, opts.seed);
      break;
    }
    ++st.stages;
    const CanonicalPairs pairs = collect_pairs(uv, tree, iv);
    search.shrink(stage_candidates(uv, tree, pairs, iv, opts.expander_degree,
                                   mix(opts.seed + st.stages)),
                  "l1-stage");
  }
  return search.interval().hi;
}

RspResult rsp_l1(const RspInstance& inst, const RspOptions& opts) {
  if (inst.metric != Metric::L1) throw InvalidInputError("solver needs an L1 instance");
  detail::RspSession ses(inst, opts);
  if (auto r = ses.precheck()) return ses.finish(*r);
  const PointSet& uv = ses.problem.rotated().uv;
  const RangeTree2D tree(uv);
  L1SearchOptions lo;
  lo.expander_degree = opts.expander_degree;
  lo.seed = opts.seed;
  L1SearchStats st;
  const double r = l1_stage_search(uv, tree, ses.search, lo, &st);
  ses.stats.steps = st.stages;
  return ses.finish(r);
}

SelectResult l1_distance_select(const PointSet& points, std::size_t k, const L1SearchOptions& opts,
                                const IntervalObserver& observer) {
  const std::size_t n = points.size();
  if (n < 2) throw EmptyInputError("need at least two points");
  if (k < 1 || k > n * (n - 1) / 2) throw InvalidInputError("k out of range");
  const PointSet uv = rotate45(points).uv;
  const RangeTree2D tree(uv);
  DecisionOracle oracle([&](double r) { return count_pairs_leq(uv, tree, r) >= k; });
  SelectResult res;
  if (oracle(0.0)) {
    res.decision_calls = oracle.call_count();
    return res;
  }
  IntervalSearch search(oracle, {}, observer);
  res.value = l1_stage_search(uv, tree, search, opts, &res.stats);
  res.decision_calls = oracle.call_count();
  return res;
}

}  // namespace udg
