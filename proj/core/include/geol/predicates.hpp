#pragma once

#include <optional>
#include <utility>

#include "geol/geometry.hpp"

namespace geol {

/// The single tolerance used where constructed (non-input) points are
/// compared: de-duplicating split parameters derived from computed segment
/// intersections. All orientation and point-on-segment tests on input
/// coordinates are exact.
inline constexpr double kConstructedPointEpsilon = 1e-9;

namespace pred {

/// Exact sign of the 2x2 orientation determinant of (a, b, c):
/// +1 if c lies to the left of the directed line a->b, -1 to the right,
/// 0 when the three points are exactly collinear. Adaptive-precision: a
/// floating-point filter backed by exact expansion arithmetic.
int orient(const Coordinate& a, const Coordinate& b, const Coordinate& c);

/// p lies on the closed segment [a, b]. Exact. a == b is permitted and
/// degenerates to equality with the point.
bool on_segment(const Coordinate& p, const Coordinate& a, const Coordinate& b);

/// p lies on segment (a, b) excluding its endpoints. Exact.
bool strictly_inside_segment(const Coordinate& p, const Coordinate& a, const Coordinate& b);

/// Segments [p1,q1] and [p2,q2] are collinear and their overlap, if any, has
/// positive length. Exact.
bool collinear_overlap(const Coordinate& p1, const Coordinate& q1, const Coordinate& p2,
                       const Coordinate& q2);

/// The open interiors of the two segments cross at a single point that is
/// internal to both (all four orientations strictly straddle). Exact.
bool proper_crossing(const Coordinate& p1, const Coordinate& q1, const Coordinate& p2,
                     const Coordinate& q2);

/// True if the closed segments share at least one point. Exact.
bool segments_intersect(const Coordinate& p1, const Coordinate& q1, const Coordinate& p2,
                        const Coordinate& q2);

/// Intersection point of two properly crossing segments. Constructed with
/// double arithmetic; callers comparing it against other points must use
/// kConstructedPointEpsilon.
Coordinate crossing_point(const Coordinate& p1, const Coordinate& q1, const Coordinate& p2,
                          const Coordinate& q2);

/// Parameter t in [0,1] of a point known to lie on [a, b]; positions along
/// the dominant axis, so it is exact for on-segment input points.
double param_on_segment(const Coordinate& p, const Coordinate& a, const Coordinate& b);

/// Parameter interval of the collinear overlap of [p2,q2] on [p1,q1],
/// or nullopt when the overlap is empty or a single point. Exact endpoints.
std::optional<std::pair<double, double>> overlap_interval(const Coordinate& p1,
                                                          const Coordinate& q1,
                                                          const Coordinate& p2,
                                                          const Coordinate& q2);

enum class Location { Inside, Boundary, Outside };

/// Location of p relative to a closed ring (crossing-number test). The ring
/// carries its explicit closing coordinate. Exact.
Location locate_in_ring(const Coordinate& p, const std::vector<Coordinate>& ring);

/// Location of p relative to a polygon with holes. Exact.
Location locate_in_polygon(const Coordinate& p, const PolygonShape& shape);

/// Location of p relative to a set of polygons with pairwise disjoint
/// interiors (a valid MultiPolygon). Exact.
Location locate_in_area(const Coordinate& p, const std::vector<PolygonShape>& shapes);

/// Ring orientation via the extreme-vertex turn: +1 counter-clockwise,
/// -1 clockwise, 0 degenerate. Exact.
int ring_orientation(const std::vector<Coordinate>& ring);

}  // namespace pred
}  // namespace geol
