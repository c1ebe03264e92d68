#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "udg/core.hpp"

namespace udg {

// A range of coordinate offsets q - c, compared after floating point
// subtraction so that membership agrees with dist_linf exactly.
struct OffsetRange {
  double lo = -kInf;
  double hi = kInf;
  bool lo_open = false;
  bool hi_open = false;

  bool contains(double d) const {
    return (lo_open ? d > lo : d >= lo) && (hi_open ? d < hi : d <= hi);
  }
  bool empty() const { return lo > hi || (lo == hi && (lo_open || hi_open)); }
};

// q is inside iff (q.x - c.x, q.y - c.y) lies in du x dv.
struct OffsetRect {
  OffsetRange du;
  OffsetRange dv;
};

// Points at L-infinity distance in (lo, hi] from the centre, as at most four
// disjoint rectangles. Empty rectangles are omitted.
std::vector<OffsetRect> annulus_rects(const RadiusInterval& interval);

using CanonicalId = std::uint32_t;

// Two-level range tree over (u, v) points. The primary tree is implicit over
// the u-order; every primary node keeps its points sorted by v and every
// aligned run of that list is a canonical subset with a dense id.
class RangeTree2D {
 public:
  explicit RangeTree2D(const PointSet& uv);

  std::size_t size() const { return n_; }
  std::size_t canonical_count() const { return begin_.size(); }
  std::span<const Index> members(CanonicalId id) const {
    return {ids_.data() + begin_[id], length_[id]};
  }

  // Disjoint canonical subsets whose union is the set of points in the rect.
  void report(const Point& c, const OffsetRect& rect, std::vector<CanonicalId>& out) const;
  std::size_t count(const Point& c, const OffsetRect& rect) const;

  template <class F>
  void for_each(const Point& c, const OffsetRect& rect, F&& f) const {
    visit(c, rect, [&](std::size_t level, std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) f(ids_[level * n_ + k]);
    });
  }

 private:
  template <class F>
  void visit(const Point& c, const OffsetRect& rect, F&& f) const;
  CanonicalId canonical_id(std::size_t level, std::size_t t, std::size_t start) const {
    return static_cast<CanonicalId>(base_[level * (levels_ + 1) + t] + (start >> t));
  }

  std::size_t n_ = 0;
  std::size_t levels_ = 0;       // block size 2^levels_ >= n
  std::vector<double> u_sorted_;
  std::vector<Index> ids_;       // per level: positions blockwise sorted by v
  std::vector<double> v_;        // v of ids_
  std::vector<std::size_t> base_;
  std::vector<std::size_t> begin_;
  std::vector<std::uint32_t> length_;
};

template <class F>
void RangeTree2D::visit(const Point& c, const OffsetRect& rect, F&& f) const {
  if (n_ == 0 || rect.du.empty() || rect.dv.empty()) return;
  const auto u_begin = u_sorted_.begin();
  const OffsetRange& du = rect.du;
  const OffsetRange& dv = rect.dv;
  // offsets are monotone in the coordinate, so the rect is a run of the order
  auto below_u = [&](double u) {
    const double d = u - c.x;
    return du.lo_open ? d <= du.lo : d < du.lo;
  };
  auto upto_u = [&](double u) {
    const double d = u - c.x;
    return du.hi_open ? d < du.hi : d <= du.hi;
  };
  std::size_t a = static_cast<std::size_t>(std::partition_point(u_begin, u_sorted_.end(), below_u) - u_begin);
  const std::size_t b = static_cast<std::size_t>(std::partition_point(u_begin, u_sorted_.end(), upto_u) - u_begin);
  auto below_v = [&](double v) {
    const double d = v - c.y;
    return dv.lo_open ? d <= dv.lo : d < dv.lo;
  };
  auto upto_v = [&](double v) {
    const double d = v - c.y;
    return dv.hi_open ? d < dv.hi : d <= dv.hi;
  };
  while (a < b) {
    std::size_t level = a == 0 ? levels_ : static_cast<std::size_t>(std::countr_zero(a));
    if (level > levels_) level = levels_;
    while (a + (std::size_t{1} << level) > b) --level;
    const std::size_t end = a + (std::size_t{1} << level);
    const auto row = v_.begin() + static_cast<std::ptrdiff_t>(level * n_);
    const auto lo = std::partition_point(row + static_cast<std::ptrdiff_t>(a), row + static_cast<std::ptrdiff_t>(end), below_v);
    const auto hi = std::partition_point(lo, row + static_cast<std::ptrdiff_t>(end), upto_v);
    if (lo < hi) f(level, static_cast<std::size_t>(lo - row), static_cast<std::size_t>(hi - row));
    a = end;
  }
}

}  // namespace udg
