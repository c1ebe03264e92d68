#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace udg {

using Index = std::uint32_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

enum class Metric { L1, L2 };

std::string_view metric_name(Metric m);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  InfeasibleError() : Error("infeasible") {}
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class OracleCapError : public Error {
 public:
  using Error::Error;
};

// Immutable point set with cached x- and y-orders. Copies share storage.
class PointSet {
 public:
  PointSet();
  explicit PointSet(std::vector<Point> points);

  std::size_t size() const { return data_->points.size(); }
  bool empty() const { return data_->points.empty(); }
  const Point& operator[](std::size_t i) const { return data_->points[i]; }
  std::span<const Point> points() const { return data_->points; }

  // indices sorted by (x, y, index) and (y, x, index)
  std::span<const Index> by_x() const { return data_->by_x; }
  std::span<const Index> by_y() const { return data_->by_y; }

  // rank of each point in by_x() / by_y()
  std::span<const Index> rank_x() const { return data_->rank_x; }
  std::span<const Index> rank_y() const { return data_->rank_y; }

  bool integer_mode() const { return data_->integer_mode; }

 private:
  struct Data {
    std::vector<Point> points;
    std::vector<Index> by_x, by_y, rank_x, rank_y;
    bool integer_mode = true;
  };
  std::shared_ptr<const Data> data_;
};

inline double dist_l2(const Point& p, const Point& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return std::sqrt(dx * dx + dy * dy);
}

// L-infinity distance; on rotated coordinates this is the L1 distance of the
// original points.
inline double dist_linf(const Point& p, const Point& q) {
  return std::max(std::abs(p.x - q.x), std::abs(p.y - q.y));
}

inline Point rotate45(const Point& p) { return {p.x + p.y, p.x - p.y}; }

// L1 distance evaluated as max(|du|, |dv|) on rotated coordinates. Equal to
// |dx| + |dy| in exact arithmetic and exact for integer input.
inline double dist_l1(const Point& p, const Point& q) {
  return dist_linf(rotate45(p), rotate45(q));
}

inline double dist(const Point& p, const Point& q, Metric m) {
  return m == Metric::L2 ? dist_l2(p, q) : dist_l1(p, q);
}

// The point set in (u, v) = (x + y, x - y) coordinates.
struct RotatedPointSet {
  PointSet uv;
};

RotatedPointSet rotate45(const PointSet& points);

// All n(n-1)/2 pairwise distances, sorted ascending.
std::vector<double> pairwise_distances(const PointSet& points, Metric m);

// Half-open radius interval (lo, hi].
struct RadiusInterval {
  double lo = 0.0;
  double hi = kInf;

  bool contains(double r) const { return lo < r && r <= hi; }
  bool interior(double r) const { return lo < r && r < hi; }
  // a representative radius strictly inside (lo, hi)
  double sample() const;
  friend bool operator==(const RadiusInterval&, const RadiusInterval&) = default;
};

// Monotone feasibility predicate with a call counter and a memo.
class DecisionOracle {
 public:
  using Predicate = std::function<bool(double)>;

  DecisionOracle() = default;
  explicit DecisionOracle(Predicate f) : f_(std::move(f)) {}

  bool operator()(double r);
  std::size_t call_count() const { return calls_; }

 private:
  Predicate f_;
  std::unordered_map<double, bool> memo_;
  std::size_t calls_ = 0;
};

using IntervalObserver =
    std::function<void(std::string_view stage, const RadiusInterval&)>;

// Shrink (lo, hi] around the smallest feasible value among candidates by
// selection-based binary search. Candidates outside (lo, hi) are ignored.
RadiusInterval interval_shrink(RadiusInterval interval,
                               std::vector<double> candidates,
                               DecisionOracle& oracle);

// The current interval together with the oracle that drives it.
class IntervalSearch {
 public:
  explicit IntervalSearch(DecisionOracle& oracle, RadiusInterval start = {},
                          IntervalObserver observer = {});

  const RadiusInterval& interval() const { return interval_; }
  double sample() const { return interval_.sample(); }
  DecisionOracle& oracle() { return *oracle_; }

  // Decide r, answering from the interval when r lies outside (lo, hi).
  bool resolve(double r);
  void shrink(std::vector<double> candidates, std::string_view stage = {});
  void notify(std::string_view stage) const;

 private:
  DecisionOracle* oracle_;
  RadiusInterval interval_;
  IntervalObserver observer_;
};

// Check that r is a pairwise distance of P (within tol) and that the
// predicate flips at r. Returns the matching pairwise distance.
double verify_rstar(double r, const PointSet& points, Metric m,
                    DecisionOracle& oracle, double tol = 1e-9);

}  // namespace udg
