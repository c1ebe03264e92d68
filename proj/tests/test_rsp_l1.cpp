#include <gtest/gtest.h>

#include <map>
#include <set>

#include "test_util.hpp"
#include "udg/rsp_l1.hpp"

using namespace udg;

namespace {

RspInstance make(std::vector<Point> pts, Index s, Index t, double lambda, bool weighted = false,
                 bool single_source = false) {
  RspInstance inst;
  inst.points = PointSet(std::move(pts));
  inst.s = s;
  inst.t = t;
  inst.lambda = lambda;
  inst.metric = Metric::L1;
  inst.weighted = weighted;
  inst.single_source = single_source;
  return inst;
}

bool in_rect(const Point& c, const Point& q, const OffsetRect& r) {
  return r.du.contains(q.x - c.x) && r.dv.contains(q.y - c.y);
}

}  // namespace

TEST(Rotate45, Examples) {
  const Point p = rotate45(Point{1, 2});
  EXPECT_EQ(p.x, 3);
  EXPECT_EQ(p.y, -1);
  EXPECT_EQ(dist_linf(rotate45(Point{0, 0}), rotate45(Point{3, 4})), 7);
  EXPECT_EQ(dist_l1({0, 0}, {3, 4}), 7);
}

TEST(AnnulusRects, Examples) {
  const auto rects = annulus_rects({1, 2});
  ASSERT_EQ(rects.size(), 4u);
  auto hits = [&](Point q) {
    int k = 0;
    for (const auto& r : rects) k += in_rect({0, 0}, q, r);
    return k;
  };
  EXPECT_EQ(hits({1.5, 0}), 1);
  EXPECT_EQ(hits({2, 2}), 1);
  EXPECT_EQ(hits({-2, -2}), 1);
  EXPECT_EQ(hits({0, 1.5}), 1);
  EXPECT_EQ(hits({1, 1}), 0);
  EXPECT_EQ(hits({0.5, 0.5}), 0);
  EXPECT_EQ(hits({2.5, 0}), 0);

  EXPECT_EQ(annulus_rects({0, 1}).size(), 4u);
  const auto inf = annulus_rects({1, kInf});
  EXPECT_EQ(inf.size(), 4u);
}

TEST(AnnulusRects, PartitionMatchesDistance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int trial = 0; trial < 200; ++trial) {
    double a = std::abs(u(rng)), b = std::abs(u(rng));
    if (a > b) std::swap(a, b);
    const auto rects = annulus_rects({a, b});
    const Point c{u(rng), u(rng)};
    for (int k = 0; k < 50; ++k) {
      // integer offsets hit the boundaries often
      const Point q = k % 2 ? Point{u(rng), u(rng)} : Point{std::round(u(rng)), std::round(u(rng))};
      int hits = 0;
      for (const auto& r : rects) hits += in_rect(c, q, r);
      const double d = dist_linf(c, q);
      EXPECT_EQ(hits, (d > a && d <= b) ? 1 : 0);
    }
  }
}

TEST(RangeTree2D, CountAndReportMatchBruteForce) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 1 + seed * 7;
    const PointSet uv = rotate45(PointSet(fixtures::random_int_points(n, 12, seed))).uv;
    const RangeTree2D tree(uv);
    std::mt19937_64 rng(seed);
    for (int q = 0; q < 20; ++q) {
      const double a = static_cast<double>(rng() % 6);
      const double b = a + static_cast<double>(rng() % 8);
      const Point c = uv[rng() % n];
      for (const auto& rect : annulus_rects({a, b})) {
        std::multiset<Index> expect;
        for (Index i = 0; i < n; ++i) {
          if (in_rect(c, uv[i], rect)) expect.insert(i);
        }
        EXPECT_EQ(tree.count(c, rect), expect.size());
        std::vector<CanonicalId> ids;
        tree.report(c, rect, ids);
        std::multiset<Index> got;
        for (CanonicalId g : ids) {
          for (Index i : tree.members(g)) got.insert(i);
        }
        EXPECT_EQ(got, expect);
        std::multiset<Index> each;
        tree.for_each(c, rect, [&](Index i) { each.insert(i); });
        EXPECT_EQ(each, expect);
      }
    }
  }
}

TEST(RangeTree2D, ReportUsesLogarithmicSubsets) {
  const PointSet uv = rotate45(PointSet(fixtures::random_points(1000, 100, 3))).uv;
  const RangeTree2D tree(uv);
  for (Index p = 0; p < 50; ++p) {
    std::vector<CanonicalId> ids;
    for (const auto& rect : annulus_rects({5, 20})) tree.report(uv[p], rect, ids);
    EXPECT_LE(ids.size(), 4u * 2 * 10 * 2 * 10);
  }
}

TEST(CollectPairs, Example) {
  const PointSet uv = rotate45(PointSet({{0, 0}, {1, 0}, {3, 0}})).uv;
  const RangeTree2D tree(uv);
  const CanonicalPairs pairs = collect_pairs(uv, tree, {0, kInf});
  std::size_t total = 0;
  for (std::size_t g = 0; g < pairs.size(); ++g) {
    total += pairs.query_points(g).size() * tree.members(pairs.ids[g]).size();
  }
  EXPECT_EQ(total, 6u);
}

TEST(CollectPairs, CoversEveryOrderedPairOnce) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 127;
    const PointSet ps(seed % 2 ? fixtures::random_int_points(n, 20, seed)
                               : fixtures::random_points(n, 20, seed));
    const PointSet uv = rotate45(ps).uv;
    const RangeTree2D tree(uv);
    const auto all = pairwise_distances(ps, Metric::L1);
    const double a = all[seed % all.size()];
    const double b = all[(seed * 7 + all.size() / 2) % all.size()];
    const RadiusInterval iv{std::min(a, b), std::max(a, b)};
    const CanonicalPairs pairs = collect_pairs(uv, tree, iv);

    std::map<std::pair<Index, Index>, int> seen;
    std::size_t sum = 0;
    for (std::size_t g = 0; g < pairs.size(); ++g) {
      const auto kg = pairs.query_points(g);
      const auto lg = tree.members(pairs.ids[g]);
      sum += kg.size() * lg.size();
      for (Index p : kg) {
        for (Index q : lg) ++seen[{p, q}];
      }
    }
    std::size_t inside = 0;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) inside += iv.contains(dist_l1(ps[p], ps[q]));
    }
    EXPECT_EQ(sum, 2 * inside) << "seed " << seed;
    EXPECT_EQ(count_in_interval(uv, tree, iv), inside);
    for (const auto& [pq, k] : seen) {
      EXPECT_EQ(k, 1);
      EXPECT_TRUE(iv.contains(dist_l1(ps[pq.first], ps[pq.second])));
    }
  }
}

TEST(ExpanderEdges, Examples) {
  EXPECT_TRUE(expander_edges(0, 5, 3, 1).empty());
  const auto e = expander_edges(8, 4, 2, 1);
  EXPECT_EQ(e, expander_edges(8, 4, 2, 1));
  std::vector<int> left(8, 0), right(4, 0);
  for (const auto& [x, y] : e) {
    ++left[x];
    ++right[y];
  }
  for (int d : left) {
    EXPECT_GE(d, 1);
    EXPECT_LE(d, 2);
  }
  for (int d : right) EXPECT_LE(d, 4);
}

TEST(ExpanderEdges, DegreeBounds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t b = 1 + seed % 40;
    const std::size_t a = b + seed % 17;
    const std::size_t d = 1 + seed % 9;
    const auto e = expander_edges(a, b, d, seed);
    EXPECT_TRUE(std::is_sorted(e.begin(), e.end()));
    EXPECT_EQ(std::adjacent_find(e.begin(), e.end()), e.end());
    std::vector<std::size_t> left(a, 0), right(b, 0);
    for (const auto& [x, y] : e) {
      ASSERT_LT(x, a);
      ASSERT_LT(y, b);
      ++left[x];
      ++right[y];
    }
    for (std::size_t v : left) {
      EXPECT_GE(v, 1u);
      EXPECT_LE(v, d);
    }
    for (std::size_t v : right) EXPECT_LE(v, (d * a + b - 1) / b);
  }
}

TEST(CountPairsLeq, Examples) {
  const PointSet uv = rotate45(PointSet({{0, 0}, {1, 0}, {3, 0}})).uv;
  const RangeTree2D tree(uv);
  EXPECT_EQ(count_pairs_leq(uv, tree, 1), 1u);
  EXPECT_EQ(count_pairs_leq(uv, tree, 3), 3u);
  EXPECT_EQ(count_pairs_leq(uv, tree, 0.5), 0u);
  EXPECT_EQ(count_pairs_leq(uv, tree, -1), 0u);
}

TEST(L1DistanceSelect, AllRanks) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 2 + seed * 3;
    const PointSet ps(seed % 3 == 0 ? fixtures::random_int_points(n, 8, seed)
                                    : fixtures::random_points(n, 30, seed));
    const auto all = pairwise_distances(ps, Metric::L1);
    L1SearchOptions opts;
    opts.expander_degree = 4;
    opts.seed = seed;
    for (std::size_t k = 1; k <= all.size(); ++k) {
      std::size_t violations = 0;
      const SelectResult res =
          l1_distance_select(ps, k, opts, [&](std::string_view, const RadiusInterval& iv) {
            violations += !iv.contains(all[k - 1]);
          });
      ASSERT_EQ(res.value, all[k - 1]) << "seed " << seed << " k " << k;
      EXPECT_EQ(violations, 0u);
    }
  }
}

TEST(L1DistanceSelect, RejectsBadRank) {
  const PointSet ps({{0, 0}, {1, 0}, {3, 0}});
  EXPECT_THROW(l1_distance_select(ps, 0), InvalidInputError);
  EXPECT_THROW(l1_distance_select(ps, 4), InvalidInputError);
  EXPECT_THROW(l1_distance_select(PointSet({{0, 0}}), 1), EmptyInputError);
}

TEST(L1StageSearch, StagesShrinkCount) {
  const PointSet ps(fixtures::random_points(3000, 1000, 11));
  const std::size_t total = 3000 * 2999 / 2;
  L1SearchOptions opts;
  opts.expander_degree = 8;
  const SelectResult res = l1_distance_select(ps, total / 3, opts);
  const auto all = pairwise_distances(ps, Metric::L1);
  EXPECT_EQ(res.value, all[total / 3 - 1]);
  EXPECT_FALSE(res.stats.fallback);
  EXPECT_GE(res.stats.stages, 1u);
  EXPECT_LE(res.stats.stages, 4u * 12);
  for (std::size_t i = 1; i < res.stats.counts.size(); ++i) {
    EXPECT_LT(res.stats.counts[i], res.stats.counts[i - 1]);
  }
}

TEST(L1StageSearch, FallbackAfterCap) {
  const PointSet ps(fixtures::random_points(600, 100, 4));
  L1SearchOptions opts;
  opts.stage_cap = 1;
  opts.expander_degree = 1;
  const SelectResult res = l1_distance_select(ps, 1000, opts);
  const auto all = pairwise_distances(ps, Metric::L1);
  EXPECT_EQ(res.value, all[999]);
  EXPECT_LE(res.stats.stages, 1u);
}

TEST(RspL1, Examples) {
  EXPECT_EQ(rsp_l1(make(fixtures::chain(6), 0, 5, 5)).r_star, 1.0);
  EXPECT_EQ(rsp_l1(make({{0, 0}, {1, 1}, {2, 2}}, 0, 2, 2)).r_star, 2.0);
  EXPECT_EQ(rsp_l1(make({{0, 0}, {1, 1}, {2, 2}}, 0, 2, 4, true)).r_star, 2.0);
  EXPECT_EQ(rsp_l1(make({{0, 0}, {1, 1}, {2, 2}}, 0, 2, 1)).r_star, 4.0);
  EXPECT_THROW(rsp_l1(make({{0, 0}, {1, 1}}, 0, 1, 1.5, true)), InfeasibleError);
  RspInstance l2 = make(fixtures::chain(3), 0, 2, 2);
  l2.metric = Metric::L2;
  EXPECT_THROW(rsp_l1(l2), InvalidInputError);
}

class RspL1Agreement : public ::testing::TestWithParam<bool> {};

TEST_P(RspL1Agreement, MatchesBruteForce) {
  const bool weighted = GetParam();
  std::mt19937_64 rng(101);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 4 + seed * 3;
    const int side = static_cast<int>(std::sqrt(static_cast<double>(n)) * 3);
    const PointSet ps(seed % 2 ? fixtures::random_int_points(n, side, seed)
                               : fixtures::random_points(n, side, seed));
    RspInstance inst = make({ps.points().begin(), ps.points().end()}, 0, static_cast<Index>(1 + seed % (n - 1)), 0, weighted,
                            seed % 5 == 2);
    if (weighted) {
      double far = dist_l1(ps[0], ps[inst.t]);
      if (inst.single_source) {
        for (const Point& p : ps.points()) far = std::max(far, dist_l1(ps[0], p));
      }
      inst.lambda = far * std::uniform_real_distribution<double>(1.0, 1.5)(rng);
    } else {
      inst.lambda = static_cast<double>(1 + rng() % 8);
    }
    const double expect = fixtures::brute_force_rstar(ps, inst.s, inst.t, inst.lambda, Metric::L1,
                                                      weighted, inst.single_source);
    std::size_t violations = 0;
    RspOptions opts;
    opts.expander_degree = 3;
    opts.seed = seed;
    opts.observer = [&](std::string_view, const RadiusInterval& iv) {
      violations += !iv.contains(expect);
    };
    if (expect == kInf) {
      EXPECT_THROW(rsp_l1(inst, opts), InfeasibleError);
      continue;
    }
    const RspResult res = rsp_l1(inst, opts);
    EXPECT_EQ(res.r_star, expect) << "seed " << seed;
    EXPECT_EQ(violations, 0u) << "seed " << seed;
  }
}

INSTANTIATE_TEST_SUITE_P(L1, RspL1Agreement, ::testing::Bool(),
                         [](const auto& info) { return info.param ? "Weighted" : "Unweighted"; });

TEST(L1StageSearch, ContractionOverSeeds) {
  const std::size_t n = 4096;
  std::vector<double> ratios;
  std::size_t over_cap = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const PointSet ps(fixtures::random_points(n, 4096, 500 + seed));
    L1SearchOptions opts;
    opts.seed = seed;
    std::mt19937_64 rng(seed);
    const std::size_t k = 1 + rng() % (n * (n - 1) / 2);
    const SelectResult res = l1_distance_select(ps, k, opts);
    over_cap += res.stats.fallback || res.stats.stages > 4 * 12;
    const auto& c = res.stats.counts;
    for (std::size_t i = 1; i < c.size(); ++i) {
      ratios.push_back(static_cast<double>(c[i]) / static_cast<double>(c[i - 1]));
    }
  }
  ASSERT_FALSE(ratios.empty());
  std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
  EXPECT_LE(ratios[ratios.size() / 2], 0.9);
  EXPECT_EQ(over_cap, 0u);
}
