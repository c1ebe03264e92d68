#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "udg/harness.hpp"

using namespace udg;

namespace {

enum Exit { kOk = 0, kInfeasible = 2, kMismatch = 3, kBadInput = 4 };

struct Args {
  std::string input;
  std::size_t gen = 0;
  std::string dist = "uniform-square";
  std::uint64_t seed = 1;
  bool integer = false;
  std::string metric = "l2";
  bool weighted = false;
  double lambda = 1.0;
  Index source = 0;
  Index target = 1;
  std::string algo;
  std::vector<std::string> algos;
  std::size_t k = 1;
  bool single_source = false;
  bool check = false;
  std::optional<double> threshold;
  std::size_t expander_degree = 64;
  std::string out = "json";
  double radius = 1.0;
  std::vector<std::size_t> sizes;
  std::size_t reps = 1;
};

void add_points(CLI::App* cmd, Args& a) {
  auto* in = cmd->add_option("--input", a.input, "point file (CSV or JSON)");
  auto* gen = cmd->add_option("--gen", a.gen, "generate N points");
  in->excludes(gen);
  cmd->add_option("--dist", a.dist, "uniform-square, clustered, grid-jitter or collinear");
  cmd->add_flag("--integer", a.integer, "round generated coordinates");
}

void add_common(CLI::App* cmd, Args& a) {
  cmd->add_option("--seed", a.seed, "generator and solver seed");
  cmd->add_option("--metric", a.metric)->check(CLI::IsMember({"l1", "l2"}));
  cmd->add_flag("--weighted", a.weighted);
  cmd->add_option("--source", a.source);
  cmd->add_flag("--check", a.check, "compare against the explicit-graph oracle");
  cmd->add_option("--out", a.out)->check(CLI::IsMember({"json", "csv"}));
}

void add_instance(CLI::App* cmd, Args& a) {
  cmd->add_option("--lambda", a.lambda);
  cmd->add_option("--target", a.target);
  cmd->add_flag("--single-source", a.single_source);
  cmd->add_option("--threshold", a.threshold, "large-cell threshold");
  cmd->add_option("--expander-degree", a.expander_degree);
  cmd->add_option("--k", a.k, "rank for select");
}

const std::vector<std::string> kAlgos = {"baseline", "algo1", "algo2", "weighted", "l1", "select"};

RunConfig make_config(const Args& a) {
  RunConfig c;
  c.metric = parse_metric(a.metric);
  c.weighted = a.weighted;
  c.algo = a.algo.empty() ? default_algo(c.metric, c.weighted) : parse_algo(a.algo);
  c.single_source = a.single_source;
  c.lambda = a.lambda;
  c.source = a.source;
  c.target = a.target;
  c.k = a.k;
  c.threshold = a.threshold;
  c.expander_degree = a.expander_degree;
  c.seed = a.seed;
  c.check = a.check;
  c.oracle_cap = oracle_cap_from_env();
  return c;
}

PointSet load_points(const Args& a) {
  if (!a.input.empty()) return read_points(a.input);
  if (a.gen > 0) return gen_points(a.gen, parse_distribution(a.dist), a.seed, a.integer);
  throw InvalidInputError("give --input PATH or --gen N");
}

void print(const RunReport& r, const Args& a, bool header) {
  if (a.out == "csv") {
    if (header) std::cout << csv_header() << '\n';
    std::cout << to_csv(r) << '\n';
  } else {
    std::cout << to_json(r).dump() << '\n';
  }
}

void fail(std::string_view kind, const std::exception& e) {
  std::cout << nlohmann::json{{"error", kind}}.dump() << '\n';
  std::cerr << e.what() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reverse shortest paths on unit-disk graphs"};
  app.require_subcommand(1);
  Args a;

  auto* rsp = app.add_subcommand("rsp", "minimum radius with d(s, t) <= lambda");
  add_points(rsp, a);
  add_common(rsp, a);
  add_instance(rsp, a);
  rsp->add_option("--algo", a.algo)->check(CLI::IsMember(kAlgos));

  auto* sel = app.add_subcommand("select", "k-th smallest L1 pairwise distance");
  add_points(sel, a);
  add_common(sel, a);
  sel->add_option("--k", a.k)->required();
  sel->add_option("--expander-degree", a.expander_degree);

  auto* sssp = app.add_subcommand("sssp", "distances from the source at a fixed radius");
  add_points(sssp, a);
  add_common(sssp, a);
  sssp->add_option("--radius", a.radius)->required();

  auto* dec = app.add_subcommand("decide", "test d(s, t) <= lambda at a fixed radius");
  add_points(dec, a);
  add_common(dec, a);
  add_instance(dec, a);
  dec->add_option("--radius", a.radius)->required();

  auto* bench = app.add_subcommand("bench", "timing ladder with a fitted log-log slope");
  add_common(bench, a);
  add_instance(bench, a);
  bench->add_option("--dist", a.dist);
  bench->add_flag("--integer", a.integer);
  bench->add_option("--sizes", a.sizes, "comma separated sizes")->delimiter(',')->required();
  bench->add_option("--reps", a.reps);
  bench->add_option("--algo", a.algos, "comma separated algorithms")
      ->delimiter(',')
      ->check(CLI::IsMember(kAlgos));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    if (*bench) {
      BenchConfig bc;
      bc.sizes = a.sizes;
      bc.reps = a.reps;
      bc.dist = parse_distribution(a.dist);
      bc.integer_mode = a.integer;
      bc.run = make_config(a);
      if (a.algos.empty()) a.algos = {"baseline", std::string(algo_name(bc.run.algo))};
      for (const auto& name : a.algos) bc.algos.push_back(parse_algo(name));
      bool header = true;
      const auto rows = run_bench(bc, [&](const RunReport& r) {
        print(r, a, header);
        header = false;
      });
      for (const auto& row : rows) {
        if (a.out == "csv") {
          std::cout << "slope," << row.algo << ',' << nlohmann::json(row.slope).dump() << '\n';
        } else {
          std::cout << nlohmann::json{{"algo", row.algo}, {"slope", row.slope}}.dump() << '\n';
        }
      }
      return kOk;
    }
    const PointSet pts = load_points(a);
    RunConfig cfg = make_config(a);
    RunReport r;
    if (*rsp) {
      r = run_rsp(pts, cfg);
    } else if (*sel) {
      cfg.algo = Algo::Select;
      cfg.metric = Metric::L1;
      r = run_rsp(pts, cfg);
    } else if (*sssp) {
      r = run_sssp(pts, cfg, a.radius);
    } else {
      r = run_decide(pts, cfg, a.radius);
    }
    print(r, a, true);
    return kOk;
  } catch (const InfeasibleError& e) {
    fail("infeasible", e);
    return kInfeasible;
  } catch (const OracleMismatchError& e) {
    fail("oracle_mismatch", e);
    return kMismatch;
  } catch (const ConsistencyError& e) {
    fail("consistency", e);
    return kMismatch;
  } catch (const Error& e) {
    fail("bad_input", e);
    return kBadInput;
  }
}
