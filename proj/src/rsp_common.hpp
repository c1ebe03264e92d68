#pragma once

// State shared by the RSP solvers: the decision problem, its oracle, the
// interval search and the run statistics.

#include <optional>

#include "udg/rsp_l2.hpp"
#include "udg/sssp.hpp"

namespace udg::detail {

// A radius at which every pair of points is adjacent.
inline double complete_radius(const PointSet& pts, Metric m) {
  if (pts.empty()) return 0.0;
  if (m == Metric::L2) {
    const Point lo{pts[pts.by_x().front()].x, pts[pts.by_y().front()].y};
    const Point hi{pts[pts.by_x().back()].x, pts[pts.by_y().back()].y};
    return dist_l2(lo, hi);
  }
  double umin = kInf, umax = -kInf, vmin = kInf, vmax = -kInf;
  for (const Point& p : pts.points()) {
    const Point q = rotate45(p);
    umin = std::min(umin, q.x);
    umax = std::max(umax, q.x);
    vmin = std::min(vmin, q.y);
    vmax = std::max(vmax, q.y);
  }
  return std::max(umax - umin, vmax - vmin);
}

class RspSession {
 public:
  RspSession(const RspInstance& inst, const RspOptions& opts)
      : inst_(inst),
        opts_(opts),
        problem(inst.points, inst.metric, inst.weighted, inst.s, inst.t, inst.lambda,
                inst.single_source),
        oracle([this](double r) { return problem(r); }),
        search(oracle, {}, [this](std::string_view stage, const RadiusInterval& iv) {
          ++stats.stages;
          if (opts_.observer) opts_.observer(stage, iv);
        }) {}

  RspSession(const RspSession&) = delete;
  RspSession& operator=(const RspSession&) = delete;

  // 0 when feasible at radius 0; throws InfeasibleError when infeasible on
  // the complete graph.
  std::optional<double> precheck() {
    if (oracle(0.0)) return 0.0;
    const double full = complete_radius(inst_.points, inst_.metric);
    if (!(full > 0.0) || !oracle(full)) throw InfeasibleError();
    return std::nullopt;
  }

  RspResult finish(double r) {
    if (!std::isfinite(r)) throw ConsistencyError("search ended without a feasible radius");
    if (opts_.verify && r > 0.0) r = verify_rstar(r, inst_.points, inst_.metric, oracle);
    stats.decision_calls = oracle.call_count();
    return RspResult{r, stats};
  }

 private:
  const RspInstance& inst_;
  const RspOptions& opts_;

 public:
  DecisionProblem problem;
  DecisionOracle oracle;
  IntervalSearch search;
  RspStats stats;
};

}  // namespace udg::detail
