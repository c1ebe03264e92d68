#include <gtest/gtest.h>

#include <map>

#include "test_util.hpp"
#include "udg/grid.hpp"
#include "udg/sssp.hpp"

using namespace udg;

namespace {

std::vector<CellKey> assignment(const Grid& g, std::size_t n) {
  std::vector<CellKey> out(n, CellKey{INT64_MIN, INT64_MIN});
  for (Index i = 0; i < n; ++i) {
    if (g.live(i)) out[i] = g.cell(g.cell_of(i)).key;
  }
  return out;
}

}  // namespace

TEST(BuildGrid, SinglePoint) {
  const Grid g = build_grid(PointSet({{0, 0}}), 0, std::sqrt(2.0));
  EXPECT_EQ(g.cell_count(), 1u);
  EXPECT_EQ(g.live_count(), 1u);
  EXPECT_DOUBLE_EQ(g.side(), 1.0);
}

TEST(BuildGrid, GapPrunes) {
  const Grid g = build_grid(PointSet({{0, 0}, {2, 0}}), 0, 1.0);
  EXPECT_TRUE(g.live(0));
  EXPECT_FALSE(g.live(1));
}

TEST(BuildGrid, LinesAndColumns) {
  const Grid g = build_grid(PointSet({{0, 0}, {0.6, 0.6}, {1.2, 0}}), 0, 1.0);
  const auto v = g.v_lines();
  ASSERT_GE(v.size(), 3u);
  EXPECT_NEAR(v[0], 0.0, 1e-12);
  EXPECT_NEAR(v[1], 0.70710678, 1e-8);
  EXPECT_NEAR(v[2], 1.41421356, 1e-8);
  const CellKey a = g.cell(g.cell_of(0)).key;
  const CellKey b = g.cell(g.cell_of(1)).key;
  const CellKey c = g.cell(g.cell_of(2)).key;
  EXPECT_EQ(a.col, b.col);
  EXPECT_EQ(c.col, a.col + 1);
  EXPECT_EQ(a, b);
}

TEST(BuildGrid, GridLineBelongsToRightCell) {
  const double r = 1.0;
  const double w = r / std::sqrt(2.0);
  EXPECT_EQ(grid_coordinate(0.0, r, std::sqrt(2.0)), 0);
  EXPECT_EQ(grid_coordinate(-1e-9, r, std::sqrt(2.0)), -1);
  EXPECT_EQ(grid_coordinate(-w, r, std::sqrt(2.0)), -1);
  EXPECT_EQ(grid_coordinate(2.5 * w, r, std::sqrt(2.0)), 2);
  EXPECT_EQ(grid_coordinate(-2.5 * w, r, std::sqrt(2.0)), -3);
  EXPECT_EQ(grid_coordinate(3.0, 1.0, 2.0), 6);
  EXPECT_EQ(grid_coordinate(-3.0, 1.0, 2.0), -6);
}

TEST(BuildGrid, CellInvariants) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PointSet ps(fixtures::random_points(300, 20.0, seed));
    for (double r : {0.3, 1.0, 2.7}) {
      for (GridScale scale : {GridScale::Euclidean, GridScale::Chebyshev}) {
        const PointSet& pts = ps;
        const Grid g = build_grid(pts, 0, r, scale);
        auto d = [&](Index a, Index b) {
          return scale == GridScale::Euclidean ? dist_l2(pts[a], pts[b])
                                               : dist_linf(pts[a], pts[b]);
        };
        std::size_t live = 0;
        for (CellId c = 0; c < g.cell_count(); ++c) {
          const auto& cell = g.cell(c);
          live += cell.by_x.size();
          EXPECT_EQ(cell.by_x.size(), cell.by_y.size());
          for (std::size_t k = 1; k < cell.by_x.size(); ++k) {
            EXPECT_LE(pts[cell.by_x[k - 1]].x, pts[cell.by_x[k]].x);
            EXPECT_LE(pts[cell.by_y[k - 1]].y, pts[cell.by_y[k]].y);
          }
          for (Index a : cell.by_x) {
            for (Index b : cell.by_x) EXPECT_LE(d(a, b), r);
          }
        }
        EXPECT_EQ(live, g.live_count());
        // every pair within r lies in the same cell or in neighbouring cells
        for (Index a = 0; a < pts.size(); ++a) {
          if (!g.live(a)) continue;
          for (Index b = 0; b < pts.size(); ++b) {
            if (!g.live(b) || d(a, b) > r || g.cell_of(a) == g.cell_of(b)) continue;
            const auto& nb = g.cell(g.cell_of(a)).neighbors;
            EXPECT_NE(std::find(nb.begin(), nb.end(), g.cell_of(b)), nb.end());
          }
        }
      }
    }
  }
}

TEST(BuildGrid, PrunedPointsAreUnreachable) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PointSet ps(fixtures::random_points(200, 60.0, seed));
    const double r = 2.0;
    const Grid g = build_grid(ps, 0, r);
    const DistArray ref = reference_sssp(ps, 0, r, Metric::L2, false, 4096);
    for (Index i = 0; i < ps.size(); ++i) {
      if (!g.live(i)) EXPECT_EQ(ref[i], kInf);
    }
  }
}

TEST(MinCellDistance, MatchesCornerBruteForce) {
  std::vector<Point> pts = {{0, 0}};
  for (int r = -3; r <= 3; ++r) {
    for (int c = -3; c <= 3; ++c) pts.push_back({c + 0.5, r + 0.5});
  }
  const PointSet ps(pts);
  const Grid g = build_grid(ps, 0, std::sqrt(2.0), GridScale::Euclidean, false);
  const double w = g.side();
  for (CellId a = 0; a < g.cell_count(); ++a) {
    for (CellId b = 0; b < g.cell_count(); ++b) {
      const CellKey ka = g.cell(a).key, kb = g.cell(b).key;
      // nearest points of two closed axis-aligned squares
      auto axis_gap = [&](std::int64_t i, std::int64_t j) {
        const double lo1 = i * w, hi1 = (i + 1) * w, lo2 = j * w, hi2 = (j + 1) * w;
        return std::max({0.0, lo2 - hi1, lo1 - hi2});
      };
      const double expect = std::hypot(axis_gap(ka.col, kb.col), axis_gap(ka.row, kb.row));
      EXPECT_NEAR(min_cell_distance(g, a, b), expect, 1e-12);
      if (std::abs(ka.col - kb.col) == 2 && std::abs(ka.row - kb.row) == 1) {
        EXPECT_NEAR(min_cell_distance(g, a, b), w, 1e-12);
      }
      if (std::abs(ka.col - kb.col) + std::abs(ka.row - kb.row) == 1) {
        EXPECT_EQ(min_cell_distance(g, a, b), 0.0);
      }
    }
  }
}

TEST(SortedMatrix, TwoPointExample) {
  const PointSet ps({{0, 0}, {1, 0}});
  const SortedMatrix m = sweep_matrix(ps, 0, Sweep::Right);
  ASSERT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.columns, 4u);
  std::vector<double> row;
  for (std::size_t j = 0; j < m.columns; ++j) row.push_back(m.entry(1, j));
  EXPECT_NEAR(row[0], 1.41421356, 1e-8);
  EXPECT_NEAR(row[3], 0.35355339, 1e-8);
  for (MatrixSearch method : {MatrixSearch::Selection, MatrixSearch::Staircase}) {
    DecisionOracle oracle([](double r) { return r >= 1.0; });
    IntervalSearch search(oracle);
    sorted_matrix_shrink(m, search, method);
    EXPECT_NEAR(search.interval().lo, std::sqrt(2.0) / 2, 1e-12);
    EXPECT_NEAR(search.interval().hi, std::sqrt(2.0), 1e-12);
  }
}

TEST(SortedMatrix, AllInfeasibleAndSingleRow) {
  const PointSet ps({{0, 0}, {1, 0}});
  DecisionOracle never([](double) { return false; });
  IntervalSearch s1(never, {0, 10});
  sorted_matrix_shrink(sweep_matrix(ps, 0, Sweep::Right), s1);
  EXPECT_NEAR(s1.interval().lo, std::sqrt(2.0), 1e-12);
  EXPECT_EQ(s1.interval().hi, 10);

  DecisionOracle any([](double) { return true; });
  IntervalSearch s2(any, {1, 4});
  sorted_matrix_shrink(sweep_matrix(PointSet({{0, 0}}), 0, Sweep::Right), s2);
  EXPECT_EQ(s2.interval(), (RadiusInterval{1, 4}));
  EXPECT_EQ(any.call_count(), 0u);
}

TEST(SortedMatrix, SelectionMatchesEnumeration) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    const PointSet ps(fixtures::random_points(150, 30.0, 100 + trial));
    const double rstar = u(rng);
    for (Sweep sw : {Sweep::Right, Sweep::Left, Sweep::Up, Sweep::Down}) {
      const SortedMatrix m = sweep_matrix(ps, 0, sw);
      DecisionOracle oracle([rstar](double r) { return r >= rstar; });
      IntervalSearch search(oracle);
      sorted_matrix_shrink(m, search);
      DecisionOracle walk_oracle([rstar](double r) { return r >= rstar; });
      IntervalSearch walk(walk_oracle);
      sorted_matrix_shrink(m, walk, MatrixSearch::Staircase);
      RadiusInterval expect;
      for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.columns; ++j) {
          const double e = m.entry(i, j);
          if (e <= 0) continue;
          if (e >= rstar) expect.hi = std::min(expect.hi, e);
          else expect.lo = std::max(expect.lo, e);
        }
      }
      EXPECT_EQ(search.interval(), expect);
      EXPECT_EQ(walk.interval(), expect);
      EXPECT_LE(oracle.call_count(), 60u);
    }
  }
}

TEST(ParametricGrid, TwoPointExample) {
  const PointSet ps({{0, 0}, {1, 0}});
  DecisionOracle oracle([&](double r) { return decide(ps, 0, 1, 1, r, Metric::L2, false); });
  IntervalSearch search(oracle);
  const Grid g = parametric_grid(ps, 0, search);
  EXPECT_NEAR(search.interval().lo, std::sqrt(2.0) / 2, 1e-12);
  // the x-gap 1 is also a structural breakpoint (pruning), so hi is 1
  EXPECT_EQ(search.interval().hi, 1.0);
  EXPECT_TRUE(search.interval().contains(1.0));
  // below the gap the second point is pruned, at any radius inside the interval
  EXPECT_TRUE(g.live(0));
  EXPECT_FALSE(g.live(1));
  const Grid at_hi = build_grid(ps, 0, search.interval().hi);
  EXPECT_NE(at_hi.cell(at_hi.cell_of(0)).key, at_hi.cell(at_hi.cell_of(1)).key);
}

TEST(ParametricGrid, SinglePoint) {
  const PointSet ps({{3, 3}});
  DecisionOracle oracle([](double) { return true; });
  IntervalSearch search(oracle, {0.5, 2});
  const Grid g = parametric_grid(ps, 0, search);
  EXPECT_EQ(search.interval(), (RadiusInterval{0.5, 2}));
  EXPECT_EQ(g.cell_count(), 1u);
}

TEST(ParametricGrid, StructureMatchesGridAtRstar) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const PointSet ps(fixtures::random_points(64, 10.0, 40 + seed));
    const double lambda = 3;
    const double rstar = fixtures::brute_force_rstar(ps, 0, 1, lambda, Metric::L2, false);
    ASSERT_LT(rstar, kInf);
    DecisionOracle oracle([&](double r) { return decide(ps, 0, 1, lambda, r, Metric::L2, false); });
    IntervalSearch search(oracle);
    const Grid g = parametric_grid(ps, 0, search);
    const RadiusInterval iv = search.interval();
    ASSERT_TRUE(iv.contains(rstar));
    const auto expect = assignment(g, ps.size());
    for (int k = 1; k <= 5; ++k) {
      const double r = iv.hi == kInf ? iv.lo + k : iv.lo + (iv.hi - iv.lo) * k / 6.0;
      EXPECT_EQ(assignment(build_grid(ps, 0, r), ps.size()), expect);
    }
    if (rstar < iv.hi) EXPECT_EQ(assignment(build_grid(ps, 0, rstar), ps.size()), expect);
  }
}
