#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "udg/core.hpp"

namespace udg {

// Which side of the separating line the blue points are on. Instances are
// mapped into a frame where the line is horizontal and the blues lie above.
enum class Side { Above, Below, Right, Left };

Point to_frame(const Point& p, Side side);
double line_to_frame(double coord, Side side);

enum class BreakKind {
  Crossing,   // two arcs cross above the line
  GapStart,   // the next arc starts where it meets the line
  HiddenEnd,  // the previous arc ends on the line inside the next arc
};

struct EnvelopeArc {
  Index red;  // position in the red input
  double start;
  double end;
};

struct Breakpoint {
  BreakKind kind;
  double x;
};

// Upper envelope of radius-r arcs centred at reds (below the line), clipped
// to the half-plane above the line. breaks[k] separates arcs[k], arcs[k+1].
struct ArcEnvelope {
  double r = 0.0;
  double line = 0.0;
  std::vector<Point> reds;
  std::vector<EnvelopeArc> arcs;
  std::vector<Breakpoint> breaks;
};

// reds in frame coordinates, sorted by x, all with y <= line
ArcEnvelope build_envelope(std::span<const Point> reds, double r, double line);

// x-coordinate of a breakpoint of env evaluated at radius r
double breakpoint_x(const ArcEnvelope& env, std::size_t k, double r);

// radius at which breakpoint k of env passes x = X (none if it never does)
std::vector<double> breakpoint_roots(const ArcEnvelope& env, std::size_t k, double X);

// Arc index spanning each blue (blues in frame coordinates, sorted by x).
std::vector<std::size_t> assign_arcs(const ArcEnvelope& env, std::span<const Point> blues);

// Flags blues within distance r of some red.
std::vector<bool> below_envelope(const ArcEnvelope& env, std::span<const Point> blues);

// Brute force bichromatic within-r test.
std::vector<bool> within_r_brute_force(std::span<const Point> reds,
                                       std::span<const Point> blues, double r);

// Circumradii of the Delaunay triangles of reds (Voronoi vertex radii).
std::vector<double> envelope_critical_values(std::span<const Point> reds);

// Radii where an arc starts touching the line or where the bisector of a
// Delaunay edge meets the line.
std::vector<double> envelope_line_critical_values(std::span<const Point> reds, double line);

struct BlueRedPair {
  Point blue;
  Point red;
};

std::vector<double> arc_membership_critical_values(std::span<const BlueRedPair> pairs);

// Items compared by key(i, r); group() is a major key independent of r and
// roots(i, j, out) appends the radii where key(i, .) and key(j, .) meet.
struct ParametricSortInput {
  std::size_t count = 0;
  std::function<double(std::size_t, double)> key;
  std::function<void(std::size_t, std::size_t, std::vector<double>&)> roots;
  std::function<std::int64_t(std::size_t)> group;
};

struct ParametricSortStats {
  std::size_t stages = 0;
  std::size_t comparators = 0;
};

// Sort the items at the unknown r* by simulating an odd-even merge sorting
// network stage by stage. Ties are broken by item index.
std::vector<std::size_t> batched_parametric_sort(const ParametricSortInput& input,
                                                 IntervalSearch& search,
                                                 ParametricSortStats* stats = nullptr);

// Comparator pairs of Batcher's odd-even merge sort on n items, by stage.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> odd_even_merge_stages(std::size_t n);

struct SubproblemInstance {
  std::vector<Point> reds;   // frame coordinates, sorted by x
  std::vector<Point> blues;  // frame coordinates, sorted by x
  double line = 0.0;
};

// Flags of every instance at r*, shrinking the interval as needed.
std::vector<std::vector<bool>> solve_subproblem_parametric(
    std::span<const SubproblemInstance> instances, IntervalSearch& search);

}  // namespace udg
