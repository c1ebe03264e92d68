#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "test_util.hpp"
#include "udg/harness.hpp"

using namespace udg;

namespace {

std::vector<Point> as_vector(const PointSet& ps) { return {ps.points().begin(), ps.points().end()}; }

bool same_points(const PointSet& a, const PointSet& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].x != b[i].x || a[i].y != b[i].y) return false;
  }
  return true;
}

}  // namespace

TEST(GenPoints, Collinear) {
  const PointSet ps = gen_points(5, Distribution::Collinear, 123);
  ASSERT_EQ(ps.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(ps[i].x, static_cast<double>(i));
    EXPECT_EQ(ps[i].y, 0.0);
  }
}

TEST(GenPoints, DeterministicPerSeed) {
  for (auto d : {Distribution::UniformSquare, Distribution::Clustered, Distribution::GridJitter}) {
    EXPECT_TRUE(same_points(gen_points(300, d, 9), gen_points(300, d, 9)));
    EXPECT_FALSE(same_points(gen_points(300, d, 9), gen_points(300, d, 10)));
  }
}

TEST(GenPoints, InsideScaledBox) {
  for (auto d : {Distribution::UniformSquare, Distribution::Clustered, Distribution::GridJitter}) {
    const PointSet ps = gen_points(1000, d, 4);
    for (const Point& p : ps.points()) {
      EXPECT_GE(p.x, 0.0);
      EXPECT_LE(p.x, 1000.0);
      EXPECT_GE(p.y, 0.0);
      EXPECT_LE(p.y, 1000.0);
    }
  }
}

TEST(GenPoints, IntegerMode) {
  const PointSet ps = gen_points(200, Distribution::Clustered, 2, true);
  EXPECT_TRUE(ps.integer_mode());
  EXPECT_FALSE(gen_points(200, Distribution::UniformSquare, 2).integer_mode());
  EXPECT_THROW(gen_points(0, Distribution::UniformSquare, 1), InvalidInputError);
  EXPECT_THROW(parse_distribution("spiral"), InvalidInputError);
}

TEST(ParsePoints, CsvAndJson) {
  const PointSet a = parse_points("x,y\n0,0\n1.5, -2\n\n3,4\n");
  EXPECT_TRUE(same_points(a, PointSet({{0, 0}, {1.5, -2}, {3, 4}})));
  EXPECT_FALSE(a.integer_mode());
  const PointSet b = parse_points("0,0\n1,2\n");
  EXPECT_EQ(b.size(), 2u);
  EXPECT_TRUE(b.integer_mode());
  const PointSet c = parse_points(" [[0, 0], [1.5, -2], [3, 4]]");
  EXPECT_TRUE(same_points(a, c));
  EXPECT_EQ(parse_points("").size(), 0u);
}

TEST(ParsePoints, Rejects) {
  EXPECT_THROW(parse_points("0,0\nnan,1\n"), InvalidInputError);
  EXPECT_THROW(parse_points("0,inf\n"), InvalidInputError);
  EXPECT_THROW(parse_points("0,0\n1\n"), InvalidInputError);
  EXPECT_THROW(parse_points("0,0\nx,y\n"), InvalidInputError);
  EXPECT_THROW(parse_points("[[0,0],[1]]"), InvalidInputError);
  EXPECT_THROW(parse_points("[[0,0],"), InvalidInputError);
  EXPECT_THROW(parse_points("[[0,0],[1e999,0]]"), InvalidInputError);
  EXPECT_THROW(read_points("/nonexistent/points.csv"), InvalidInputError);
}

TEST(ParsePoints, RoundTrip) {
  const PointSet ps(fixtures::random_points(100, 1e3, 8));
  EXPECT_TRUE(same_points(parse_points(points_to_csv(ps)), ps));
  EXPECT_TRUE(same_points(parse_points(points_to_json(ps)), ps));
  const std::string path = ::testing::TempDir() + "udg_points.csv";
  std::ofstream(path) << points_to_csv(ps);
  EXPECT_TRUE(same_points(read_points(path), ps));
  std::remove(path.c_str());
}

TEST(RunRsp, ChainExample) {
  RunConfig cfg;
  cfg.algo = Algo::Algo1;
  cfg.lambda = 3;
  cfg.source = 0;
  cfg.target = 5;
  cfg.check = true;
  const RunReport r = run_rsp(PointSet(fixtures::chain(6)), cfg);
  ASSERT_TRUE(r.r_star);
  EXPECT_EQ(*r.r_star, 2.0);
  EXPECT_TRUE(r.oracle_checked);
  EXPECT_LE(r.steps, 3u);
  const auto j = to_json(r);
  EXPECT_EQ(j["r_star"], 2.0);
  EXPECT_EQ(j["algo"], "algo1");
  EXPECT_TRUE(j.contains("wall_ms"));
  EXPECT_FALSE(to_json_untimed(r).contains("wall_ms"));
}

TEST(RunRsp, L1TwoPoints) {
  RunConfig cfg;
  cfg.algo = Algo::L1;
  cfg.metric = Metric::L1;
  cfg.weighted = true;
  cfg.lambda = 7;
  cfg.check = true;
  const RunReport r = run_rsp(PointSet({{0, 0}, {3, 4}}), cfg);
  EXPECT_EQ(*r.r_star, 7.0);
  EXPECT_TRUE(r.oracle_checked);
}

TEST(RunRsp, InfeasibleAndBadInput) {
  RunConfig cfg;
  cfg.algo = Algo::Weighted;
  cfg.weighted = true;
  cfg.lambda = 0.1;
  cfg.check = true;
  EXPECT_THROW(run_rsp(gen_points(40, Distribution::UniformSquare, 1), cfg), InfeasibleError);
  cfg.target = 40;
  EXPECT_THROW(run_rsp(gen_points(40, Distribution::UniformSquare, 1), cfg), InvalidInputError);
  cfg.target = 1;
  cfg.algo = Algo::Select;
  EXPECT_THROW(run_rsp(gen_points(40, Distribution::UniformSquare, 1), cfg), InvalidInputError);
}

TEST(RunRsp, CheckSkippedAboveCap) {
  RunConfig cfg;
  cfg.algo = Algo::L1;
  cfg.metric = Metric::L1;
  cfg.lambda = 4;
  cfg.check = true;
  cfg.oracle_cap = 10;
  const RunReport r = run_rsp(gen_points(50, Distribution::UniformSquare, 3), cfg);
  EXPECT_FALSE(r.oracle_checked);
}

TEST(RunRsp, DeterministicReports) {
  RunConfig cfg;
  cfg.algo = Algo::Algo2;
  cfg.lambda = 4;
  const PointSet ps = gen_points(300, Distribution::Clustered, 5);
  EXPECT_EQ(to_json_untimed(run_rsp(ps, cfg)).dump(), to_json_untimed(run_rsp(ps, cfg)).dump());
}

TEST(RunSelect, MatchesSortedList) {
  RunConfig cfg;
  cfg.algo = Algo::Select;
  cfg.metric = Metric::L1;
  cfg.check = true;
  const PointSet ps = gen_points(40, Distribution::GridJitter, 6, true);
  const auto all = pairwise_distances(ps, Metric::L1);
  for (std::size_t k : {std::size_t{1}, all.size() / 2, all.size()}) {
    cfg.k = k;
    const RunReport r = run_rsp(ps, cfg);
    EXPECT_EQ(*r.r_star, all[k - 1]);
    EXPECT_EQ(*r.k, k);
  }
}

TEST(RunSssp, MatchesReference) {
  for (Metric m : {Metric::L1, Metric::L2}) {
    for (bool w : {false, true}) {
      RunConfig cfg;
      cfg.metric = m;
      cfg.weighted = w;
      cfg.check = true;
      const PointSet ps = gen_points(200, Distribution::UniformSquare, 7);
      const RunReport r = run_sssp(ps, cfg, 25.0);
      EXPECT_TRUE(r.oracle_checked);
      ASSERT_TRUE(r.dist);
      EXPECT_EQ(r.dist->size(), 200u);
      EXPECT_EQ((*r.dist)[0], 0.0);
    }
  }
}

TEST(RunDecide, ChainExample) {
  RunConfig cfg;
  cfg.target = 5;
  cfg.lambda = 5;
  cfg.check = true;
  const PointSet chain(fixtures::chain(6));
  EXPECT_TRUE(*run_decide(chain, cfg, 1.0).feasible);
  cfg.lambda = 4.9;
  EXPECT_FALSE(*run_decide(chain, cfg, 1.0).feasible);
  EXPECT_THROW(run_decide(chain, cfg, -1.0), InvalidInputError);
}

TEST(Csv, HeaderMatchesRow) {
  RunReport r;
  r.command = "rsp";
  r.algo = "l1";
  r.r_star = 2.5;
  auto fields = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  EXPECT_EQ(fields(csv_header()), fields(to_csv(r)));
}

TEST(LogLogSlope, Examples) {
  EXPECT_NEAR(loglog_slope({10, 100, 1000}, {1, 100, 10000}), 2.0, 1e-12);
  EXPECT_NEAR(loglog_slope({8, 16, 32}, {3, 6, 12}), 1.0, 1e-12);
  EXPECT_EQ(loglog_slope({8}, {3}), 0.0);
}

TEST(RunBench, ZeroRepsIsEmpty) {
  BenchConfig bc;
  bc.sizes = {64, 128};
  bc.reps = 0;
  bc.algos = {Algo::Baseline};
  std::size_t emitted = 0;
  EXPECT_TRUE(run_bench(bc, [&](const RunReport&) { ++emitted; }).empty());
  EXPECT_EQ(emitted, 0u);
}

TEST(RunBench, SameInstancesAcrossRuns) {
  BenchConfig bc;
  bc.sizes = {64, 128};
  bc.reps = 2;
  bc.algos = {Algo::Baseline, Algo::L1};
  bc.run.metric = Metric::L1;
  bc.run.lambda = 3;
  std::vector<std::string> first, second;
  run_bench(bc, [&](const RunReport& r) { first.push_back(to_json_untimed(r).dump()); });
  const auto rows = run_bench(bc, [&](const RunReport& r) { second.push_back(to_json_untimed(r).dump()); });
  EXPECT_EQ(first, second);
  EXPECT_EQ(first.size(), 8u);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].algo, "baseline");
  // both algorithms see the same instances
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(nlohmann::json::parse(first[i])["r_star"], nlohmann::json::parse(first[i + 4])["r_star"]);
  }
}
