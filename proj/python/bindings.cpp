#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "udg/harness.hpp"
#include "udg/rsp_l1.hpp"

namespace py = pybind11;
using namespace udg;

namespace {

PointSet to_points(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.size() == 0) return PointSet();
  if (a.ndim() != 2 || a.shape(1) != 2) throw InvalidInputError("points must have shape (n, 2)");
  auto r = a.unchecked<2>();
  std::vector<Point> pts(static_cast<std::size_t>(r.shape(0)));
  for (py::ssize_t i = 0; i < r.shape(0); ++i) {
    if (!std::isfinite(r(i, 0)) || !std::isfinite(r(i, 1))) {
      throw InvalidInputError("coordinates must be finite");
    }
    pts[static_cast<std::size_t>(i)] = {r(i, 0), r(i, 1)};
  }
  return PointSet(std::move(pts));
}

py::array_t<double> to_array(const PointSet& ps) {
  py::array_t<double> out({static_cast<py::ssize_t>(ps.size()), py::ssize_t{2}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    w(i, 0) = ps[i].x;
    w(i, 1) = ps[i].y;
  }
  return out;
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

RunConfig config(const std::string& metric, bool weighted) {
  RunConfig cfg;
  cfg.metric = parse_metric(metric);
  cfg.weighted = weighted;
  cfg.oracle_cap = oracle_cap_from_env();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reverse shortest paths on unit-disk graphs";

  auto base = py::register_exception<Error>(m, "UdgError");
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base);
  py::register_exception<InvalidInputError>(m, "InvalidInputError", PyExc_ValueError);
  py::register_exception<EmptyInputError>(m, "EmptyInputError", PyExc_ValueError);
  py::register_exception<OracleMismatchError>(m, "OracleMismatchError", base);

  m.def(
      "gen_points",
      [](std::size_t n, const std::string& dist, std::uint64_t seed, bool integer_mode) {
        return to_array(gen_points(n, parse_distribution(dist), seed, integer_mode));
      },
      py::arg("n"), py::arg("dist") = "uniform-square", py::arg("seed") = 1,
      py::arg("integer_mode") = false);

  m.def(
      "read_points", [](const std::string& path) { return to_array(read_points(path)); },
      py::arg("path"));

  m.def(
      "pairwise_distances",
      [](const py::array_t<double>& pts, const std::string& metric) {
        return to_array(pairwise_distances(to_points(pts), parse_metric(metric)));
      },
      py::arg("points"), py::arg("metric") = "l2", "Sorted pairwise distances.");

  m.def(
      "rsp",
      [](const py::array_t<double>& pts, Index source, Index target, double lam,
         const std::string& metric, bool weighted, std::optional<std::string> algo,
         bool single_source, std::optional<double> threshold, std::size_t expander_degree,
         std::uint64_t seed, bool check) {
        RunConfig cfg = config(metric, weighted);
        cfg.algo = algo ? parse_algo(*algo) : default_algo(cfg.metric, weighted);
        cfg.source = source;
        cfg.target = target;
        cfg.lambda = lam;
        cfg.single_source = single_source;
        cfg.threshold = threshold;
        cfg.expander_degree = expander_degree;
        cfg.seed = seed;
        cfg.check = check;
        const PointSet ps = to_points(pts);
        RunReport r;
        {
          py::gil_scoped_release release;
          r = run_rsp(ps, cfg);
        }
        return to_python(to_json(r));
      },
      py::arg("points"), py::arg("source"), py::arg("target"), py::arg("lam"),
      py::arg("metric") = "l2", py::arg("weighted") = false, py::arg("algo") = py::none(),
      py::arg("single_source") = false, py::arg("threshold") = py::none(),
      py::arg("expander_degree") = 64, py::arg("seed") = 1, py::arg("check") = false,
      "Minimum radius r with d_r(source, target) <= lam. Returns the run report as a dict.");

  m.def(
      "select",
      [](const py::array_t<double>& pts, std::size_t k, std::size_t expander_degree,
         std::uint64_t seed) {
        L1SearchOptions opts;
        opts.expander_degree = expander_degree;
        opts.seed = seed;
        const PointSet ps = to_points(pts);
        py::gil_scoped_release release;
        return l1_distance_select(ps, k, opts).value;
      },
      py::arg("points"), py::arg("k"), py::arg("expander_degree") = 64, py::arg("seed") = 1,
      "k-th smallest L1 pairwise distance, k starting at 1.");

  m.def(
      "sssp",
      [](const py::array_t<double>& pts, Index source, double radius, const std::string& metric,
         bool weighted, bool check) {
        RunConfig cfg = config(metric, weighted);
        cfg.source = source;
        cfg.check = check;
        const RunReport r = run_sssp(to_points(pts), cfg, radius);
        return to_array(*r.dist);
      },
      py::arg("points"), py::arg("source"), py::arg("radius"), py::arg("metric") = "l2",
      py::arg("weighted") = false, py::arg("check") = false,
      "Distances from source in the unit-disk graph; inf when unreachable.");

  m.def(
      "decide",
      [](const py::array_t<double>& pts, Index source, Index target, double lam, double radius,
         const std::string& metric, bool weighted, bool single_source) {
        RunConfig cfg = config(metric, weighted);
        cfg.source = source;
        cfg.target = target;
        cfg.lambda = lam;
        cfg.single_source = single_source;
        return *run_decide(to_points(pts), cfg, radius).feasible;
      },
      py::arg("points"), py::arg("source"), py::arg("target"), py::arg("lam"), py::arg("radius"),
      py::arg("metric") = "l2", py::arg("weighted") = false, py::arg("single_source") = false);
}
