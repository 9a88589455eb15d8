#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "geol/errors.hpp"

namespace geol {

struct Coordinate {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Coordinate&) const = default;
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

/// Axis-aligned minimum bounding box. Closed on all edges: boxes that share
/// only a border still intersect, so boundary-touching links survive the
/// filter stage.
struct BoundingBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool operator==(const BoundingBox&) const = default;

  bool intersects(const BoundingBox& o) const {
    return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
  }
  bool contains(const BoundingBox& o) const {
    return min_x <= o.min_x && o.max_x <= max_x && min_y <= o.min_y && o.max_y <= max_y;
  }
  bool contains(const Coordinate& c) const {
    return min_x <= c.x && c.x <= max_x && min_y <= c.y && c.y <= max_y;
  }
  void expand(const Coordinate& c) {
    if (c.x < min_x) min_x = c.x;
    if (c.y < min_y) min_y = c.y;
    if (c.x > max_x) max_x = c.x;
    if (c.y > max_y) max_y = c.y;
  }
  void expand(const BoundingBox& o) {
    if (o.min_x < min_x) min_x = o.min_x;
    if (o.min_y < min_y) min_y = o.min_y;
    if (o.max_x > max_x) max_x = o.max_x;
    if (o.max_y > max_y) max_y = o.max_y;
  }
  double area() const { return (max_x - min_x) * (max_y - min_y); }

  static BoundingBox of(const Coordinate& c) { return {c.x, c.y, c.x, c.y}; }
};

enum class GeometryKind {
  Empty,
  Point,
  MultiPoint,
  LineString,
  MultiLineString,
  Polygon,
  MultiPolygon,
};

/// One polygon: a closed exterior ring plus zero or more closed interior
/// rings (holes). Rings keep the explicit closing coordinate.
struct PolygonShape {
  std::vector<Coordinate> exterior;
  std::vector<std::vector<Coordinate>> holes;

  bool operator==(const PolygonShape&) const = default;
};

/// Immutable planar geometry. Structural invariants (ring closure, minimum
/// vertex counts, non-empty multi members) are enforced at construction;
/// OGC validity is a separate question answered by validate().
class Geometry {
 public:
  Geometry() = default;  // the empty geometry

  static Geometry empty() { return Geometry(); }
  static Geometry point(Coordinate c);
  static Geometry multi_point(std::vector<Coordinate> points);
  static Geometry line_string(std::vector<Coordinate> path);
  static Geometry multi_line_string(std::vector<std::vector<Coordinate>> paths);
  static Geometry polygon(PolygonShape shape);
  static Geometry multi_polygon(std::vector<PolygonShape> shapes);

  GeometryKind kind() const { return kind_; }
  bool is_empty() const { return kind_ == GeometryKind::Empty; }

  /// Point/MultiPoint members.
  const std::vector<Coordinate>& points() const { return points_; }
  /// LineString/MultiLineString paths (a LineString has exactly one).
  const std::vector<std::vector<Coordinate>>& paths() const { return paths_; }
  /// Polygon/MultiPolygon members (a Polygon has exactly one).
  const std::vector<PolygonShape>& polygons() const { return polygons_; }

  bool operator==(const Geometry&) const = default;

 private:
  GeometryKind kind_ = GeometryKind::Empty;
  std::vector<Coordinate> points_;
  std::vector<std::vector<Coordinate>> paths_;
  std::vector<PolygonShape> polygons_;
};

/// dim(S): -1 for the empty set, else the maximum dimension over members.
int dimension(const Geometry& g);
/// dim over a mixed bag of parts, as produced by internal intersections.
int dimension(std::span<const Geometry> parts);

/// Minimum bounding box over all vertices. Throws EmptyGeometryError on the
/// empty geometry.
BoundingBox mbb(const Geometry& g);

/// SFS boundary operator: points have empty boundary, a non-closed line has
/// its two endpoints, polygons have their rings; multi-line endpoints follow
/// the mod-2 rule.
Geometry boundary(const Geometry& g);

namespace geom {

/// True if the ring is explicitly closed (first == last).
inline bool ring_closed(const std::vector<Coordinate>& ring) {
  return ring.size() >= 2 && ring.front() == ring.back();
}

/// Collapses exact consecutive duplicates in place; returns how many were
/// removed. A closed ring stays closed.
std::size_t collapse_duplicates(std::vector<Coordinate>& coords);

}  // namespace geom

}  // namespace geol
