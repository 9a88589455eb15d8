#include "geol/geometry.hpp"

#include <algorithm>

namespace geol {

namespace {

void require_finite(const Coordinate& c) {
  if (!c.finite()) throw GeometryError("coordinate components must be finite");
}

void check_path(const std::vector<Coordinate>& path) {
  if (path.size() < 2) throw GeometryError("linestring needs at least 2 coordinates");
  for (const auto& c : path) require_finite(c);
}

void check_ring(const std::vector<Coordinate>& ring) {
  if (ring.size() < 4) throw GeometryError("polygon ring needs at least 4 coordinates");
  if (!geom::ring_closed(ring)) throw GeometryError("polygon ring is not closed");
  for (const auto& c : ring) require_finite(c);
}

void check_shape(const PolygonShape& shape) {
  check_ring(shape.exterior);
  for (const auto& hole : shape.holes) check_ring(hole);
}

}  // namespace

Geometry Geometry::point(Coordinate c) {
  require_finite(c);
  Geometry g;
  g.kind_ = GeometryKind::Point;
  g.points_ = {c};
  return g;
}

Geometry Geometry::multi_point(std::vector<Coordinate> points) {
  if (points.empty()) throw GeometryError("multi-geometry needs at least 1 member");
  for (const auto& c : points) require_finite(c);
  Geometry g;
  g.kind_ = GeometryKind::MultiPoint;
  g.points_ = std::move(points);
  return g;
}

Geometry Geometry::line_string(std::vector<Coordinate> path) {
  check_path(path);
  Geometry g;
  g.kind_ = GeometryKind::LineString;
  g.paths_.push_back(std::move(path));
  return g;
}

Geometry Geometry::multi_line_string(std::vector<std::vector<Coordinate>> paths) {
  if (paths.empty()) throw GeometryError("multi-geometry needs at least 1 member");
  for (const auto& p : paths) check_path(p);
  Geometry g;
  g.kind_ = GeometryKind::MultiLineString;
  g.paths_ = std::move(paths);
  return g;
}

Geometry Geometry::polygon(PolygonShape shape) {
  check_shape(shape);
  Geometry g;
  g.kind_ = GeometryKind::Polygon;
  g.polygons_.push_back(std::move(shape));
  return g;
}

Geometry Geometry::multi_polygon(std::vector<PolygonShape> shapes) {
  if (shapes.empty()) throw GeometryError("multi-geometry needs at least 1 member");
  for (const auto& s : shapes) check_shape(s);
  Geometry g;
  g.kind_ = GeometryKind::MultiPolygon;
  g.polygons_ = std::move(shapes);
  return g;
}

int dimension(const Geometry& g) {
  switch (g.kind()) {
    case GeometryKind::Empty:
      return -1;
    case GeometryKind::Point:
    case GeometryKind::MultiPoint:
      return 0;
    case GeometryKind::LineString:
    case GeometryKind::MultiLineString:
      return 1;
    case GeometryKind::Polygon:
    case GeometryKind::MultiPolygon:
      return 2;
  }
  return -1;
}

int dimension(std::span<const Geometry> parts) {
  int dim = -1;
  for (const auto& g : parts) dim = std::max(dim, dimension(g));
  return dim;
}

BoundingBox mbb(const Geometry& g) {
  if (g.is_empty()) throw EmptyGeometryError("mbb of empty geometry");
  bool first = true;
  BoundingBox box;
  auto take = [&](const Coordinate& c) {
    if (first) {
      box = BoundingBox::of(c);
      first = false;
    } else {
      box.expand(c);
    }
  };
  for (const auto& c : g.points()) take(c);
  for (const auto& path : g.paths())
    for (const auto& c : path) take(c);
  for (const auto& poly : g.polygons()) {
    for (const auto& c : poly.exterior) take(c);
    for (const auto& hole : poly.holes)
      for (const auto& c : hole) take(c);
  }
  return box;
}

Geometry boundary(const Geometry& g) {
  switch (g.kind()) {
    case GeometryKind::Empty:
    case GeometryKind::Point:
    case GeometryKind::MultiPoint:
      return Geometry::empty();
    case GeometryKind::LineString:
    case GeometryKind::MultiLineString: {
      // Mod-2 rule: a point is on the boundary iff it is an endpoint of an
      // odd number of member curves. Closed members contribute nothing.
      std::vector<Coordinate> odd;
      auto toggle = [&](const Coordinate& c) {
        auto it = std::find(odd.begin(), odd.end(), c);
        if (it == odd.end()) {
          odd.push_back(c);
        } else {
          odd.erase(it);
        }
      };
      for (const auto& path : g.paths()) {
        if (path.front() == path.back()) continue;
        toggle(path.front());
        toggle(path.back());
      }
      if (odd.empty()) return Geometry::empty();
      std::sort(odd.begin(), odd.end(), [](const Coordinate& a, const Coordinate& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
      });
      return Geometry::multi_point(std::move(odd));
    }
    case GeometryKind::Polygon:
    case GeometryKind::MultiPolygon: {
      std::vector<std::vector<Coordinate>> rings;
      for (const auto& poly : g.polygons()) {
        rings.push_back(poly.exterior);
        for (const auto& hole : poly.holes) rings.push_back(hole);
      }
      return Geometry::multi_line_string(std::move(rings));
    }
  }
  return Geometry::empty();
}

namespace geom {

std::size_t collapse_duplicates(std::vector<Coordinate>& coords) {
  if (coords.size() < 2) return 0;
  std::size_t before = coords.size();
  auto last = std::unique(coords.begin(), coords.end());
  coords.erase(last, coords.end());
  return before - coords.size();
}

}  // namespace geom

}  // namespace geol
