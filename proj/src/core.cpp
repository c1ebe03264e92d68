#include "udg/core.hpp"

#include <numeric>

namespace udg {

std::string_view metric_name(Metric m) { return m == Metric::L2 ? "l2" : "l1"; }

PointSet::PointSet() : data_(std::make_shared<Data>()) {}

PointSet::PointSet(std::vector<Point> points) {
  auto data = std::make_shared<Data>();
  const std::size_t n = points.size();
  if (n > std::numeric_limits<Index>::max()) {
    throw InvalidInputError("too many points");
  }
  for (const Point& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidInputError("non-finite coordinate");
    }
    constexpr double kExactLimit = 1125899906842624.0;  // 2^50
    if (p.x != std::floor(p.x) || p.y != std::floor(p.y) ||
        std::abs(p.x) > kExactLimit || std::abs(p.y) > kExactLimit) {
      data->integer_mode = false;
    }
  }
  data->points = std::move(points);
  const auto& pts = data->points;

  data->by_x.resize(n);
  std::iota(data->by_x.begin(), data->by_x.end(), Index{0});
  data->by_y = data->by_x;
  std::sort(data->by_x.begin(), data->by_x.end(), [&](Index a, Index b) {
    if (pts[a].x != pts[b].x) return pts[a].x < pts[b].x;
    if (pts[a].y != pts[b].y) return pts[a].y < pts[b].y;
    return a < b;
  });
  std::sort(data->by_y.begin(), data->by_y.end(), [&](Index a, Index b) {
    if (pts[a].y != pts[b].y) return pts[a].y < pts[b].y;
    if (pts[a].x != pts[b].x) return pts[a].x < pts[b].x;
    return a < b;
  });
  data->rank_x.resize(n);
  data->rank_y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    data->rank_x[data->by_x[i]] = static_cast<Index>(i);
    data->rank_y[data->by_y[i]] = static_cast<Index>(i);
  }
  data_ = std::move(data);
}

RotatedPointSet rotate45(const PointSet& points) {
  std::vector<Point> uv;
  uv.reserve(points.size());
  for (const Point& p : points.points()) uv.push_back(rotate45(p));
  return RotatedPointSet{PointSet(std::move(uv))};
}

std::vector<double> pairwise_distances(const PointSet& points, Metric m) {
  const std::size_t n = points.size();
  if (n < 2) throw EmptyInputError("need at least two points");
  std::vector<double> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.push_back(dist(points[i], points[j], m));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double RadiusInterval::sample() const {
  if (hi == kInf) return lo > 0.0 ? 2.0 * lo : 1.0;
  return lo / 2.0 + hi / 2.0;
}

bool DecisionOracle::operator()(double r) {
  auto it = memo_.find(r);
  if (it != memo_.end()) return it->second;
  ++calls_;
  const bool result = f_(r);
  memo_.emplace(r, result);
  return result;
}

RadiusInterval interval_shrink(RadiusInterval interval,
                               std::vector<double> candidates,
                               DecisionOracle& oracle) {
  auto outside = [&](double v) { return !interval.interior(v); };
  candidates.erase(std::remove_if(candidates.begin(), candidates.end(), outside),
                   candidates.end());
  while (!candidates.empty()) {
    auto mid = candidates.begin() + static_cast<std::ptrdiff_t>(candidates.size() / 2);
    std::nth_element(candidates.begin(), mid, candidates.end());
    const double v = *mid;
    if (oracle(v)) {
      interval.hi = v;
      candidates.erase(mid, candidates.end());
    } else {
      interval.lo = v;
      candidates.erase(candidates.begin(), mid + 1);
    }
    candidates.erase(std::remove_if(candidates.begin(), candidates.end(), outside),
                     candidates.end());
  }
  return interval;
}

IntervalSearch::IntervalSearch(DecisionOracle& oracle, RadiusInterval start,
                               IntervalObserver observer)
    : oracle_(&oracle), interval_(start), observer_(std::move(observer)) {}

bool IntervalSearch::resolve(double r) {
  if (r <= interval_.lo) return false;
  if (r >= interval_.hi) return true;
  if ((*oracle_)(r)) {
    interval_.hi = r;
    return true;
  }
  interval_.lo = r;
  return false;
}

void IntervalSearch::shrink(std::vector<double> candidates, std::string_view stage) {
  interval_ = interval_shrink(interval_, std::move(candidates), *oracle_);
  notify(stage);
}

void IntervalSearch::notify(std::string_view stage) const {
  if (observer_) observer_(stage, interval_);
}

double verify_rstar(double r, const PointSet& points, Metric m,
                    DecisionOracle& oracle, double tol) {
  if (!std::isfinite(r)) throw ConsistencyError("radius is not finite");
  const std::size_t n = points.size();
  double best = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dist(points[i], points[j], m);
      if (std::abs(d - r) < std::abs(best - r)) best = d;
    }
  }
  if (n < 2 || std::abs(best - r) > tol * std::max(1.0, r)) {
    throw ConsistencyError("radius is not a pairwise distance");
  }
  double below = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dist(points[i], points[j], m);
      if (d < best) below = std::max(below, d);
    }
  }
  if (!oracle(best)) throw ConsistencyError("predicate is false at radius");
  if (best > 0.0 && oracle(below)) throw ConsistencyError("predicate is true below radius");
  return best;
}

}  // namespace udg
