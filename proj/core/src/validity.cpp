#include "geol/validity.hpp"

#include <algorithm>

#include "geol/predicates.hpp"

namespace geol {

namespace {

using pred::Location;

struct Checker {
  ValidityReport report;

  void flag(Violation code, const Coordinate& where) {
    report.valid = false;
    report.violations.push_back({code, where});
  }

  // Returns the ring with consecutive duplicates removed, flagging them.
  std::vector<Coordinate> dedup(const std::vector<Coordinate>& coords) {
    std::vector<Coordinate> out;
    out.reserve(coords.size());
    for (const auto& c : coords) {
      if (!out.empty() && out.back() == c) {
        flag(Violation::DuplicateConsecutivePoints, c);
        continue;
      }
      out.push_back(c);
    }
    return out;
  }

  void check_path(const std::vector<Coordinate>& path) {
    std::vector<Coordinate> p = dedup(path);
    if (p.size() < 2) flag(Violation::TooFewPoints, path.empty() ? Coordinate{} : path.front());
  }

  // Structural + simplicity checks for one ring. Returns the deduped ring,
  // or empty when it is too degenerate for further geometric checks.
  std::vector<Coordinate> check_ring(const std::vector<Coordinate>& ring) {
    if (ring.empty()) {
      flag(Violation::TooFewPoints, Coordinate{});
      return {};
    }
    std::vector<Coordinate> r = dedup(ring);
    if (r.size() >= 2 && r.front() != r.back()) {
      flag(Violation::UnclosedRing, r.back());
      return {};
    }
    if (r.size() < 4) {
      flag(Violation::TooFewPoints, r.front());
      return {};
    }
    check_ring_simple(r);
    return r;
  }

  void check_ring_simple(const std::vector<Coordinate>& r) {
    std::size_t n = r.size() - 1;  // edges
    for (std::size_t i = 0; i < n; ++i) {
      const Coordinate& a1 = r[i];
      const Coordinate& b1 = r[i + 1];
      for (std::size_t j = i + 1; j < n; ++j) {
        const Coordinate& a2 = r[j];
        const Coordinate& b2 = r[j + 1];
        bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
        if (adjacent) {
          // Adjacent edges may meet only at their shared vertex; a collinear
          // overlap is a spike folding back on itself.
          if (pred::collinear_overlap(a1, b1, a2, b2))
            flag(Violation::RingNotSimple, b1 == a2 ? b1 : a1);
          continue;
        }
        if (pred::proper_crossing(a1, b1, a2, b2)) {
          flag(Violation::SelfIntersection, pred::crossing_point(a1, b1, a2, b2));
        } else if (pred::segments_intersect(a1, b1, a2, b2)) {
          Coordinate where = pred::on_segment(a2, a1, b1)   ? a2
                             : pred::on_segment(b2, a1, b1) ? b2
                             : pred::on_segment(a1, a2, b2) ? a1
                                                            : b1;
          flag(Violation::RingNotSimple, where);
        }
      }
    }
  }

  // Edge interaction between two distinct rings: crossings and shared
  // segments are invalid, point touches are tolerated.
  // Returns true when a violation was found.
  bool check_ring_pair_edges(const std::vector<Coordinate>& r1,
                             const std::vector<Coordinate>& r2) {
    bool bad = false;
    for (std::size_t i = 0; i + 1 < r1.size(); ++i) {
      for (std::size_t j = 0; j + 1 < r2.size(); ++j) {
        const Coordinate& a1 = r1[i];
        const Coordinate& b1 = r1[i + 1];
        const Coordinate& a2 = r2[j];
        const Coordinate& b2 = r2[j + 1];
        if (pred::proper_crossing(a1, b1, a2, b2)) {
          flag(Violation::SelfIntersection, pred::crossing_point(a1, b1, a2, b2));
          bad = true;
        } else if (pred::collinear_overlap(a1, b1, a2, b2)) {
          flag(Violation::SelfIntersection, a2);
          bad = true;
        }
      }
    }
    return bad;
  }

  // A vertex of `ring` that does not lie on `other`, if any.
  static const Coordinate* free_vertex(const std::vector<Coordinate>& ring,
                                       const std::vector<Coordinate>& other) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
      if (pred::locate_in_ring(ring[i], other) != Location::Boundary) return &ring[i];
    }
    return nullptr;
  }

  void check_polygon(const PolygonShape& shape) {
    std::vector<Coordinate> shell = check_ring(shape.exterior);
    std::vector<std::vector<Coordinate>> holes;
    for (const auto& h : shape.holes) holes.push_back(check_ring(h));

    if (shell.empty()) return;
    for (std::size_t i = 0; i < holes.size(); ++i) {
      if (holes[i].empty()) continue;
      if (check_ring_pair_edges(holes[i], shell)) continue;
      if (const Coordinate* v = free_vertex(holes[i], shell)) {
        if (pred::locate_in_ring(*v, shell) == Location::Outside)
          flag(Violation::HoleOutsideShell, *v);
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (holes[j].empty()) continue;
        if (check_ring_pair_edges(holes[i], holes[j])) continue;
        if (const Coordinate* v = free_vertex(holes[i], holes[j])) {
          if (pred::locate_in_ring(*v, holes[j]) == Location::Inside)
            flag(Violation::NestedShells, *v);
        }
        if (const Coordinate* v = free_vertex(holes[j], holes[i])) {
          if (pred::locate_in_ring(*v, holes[i]) == Location::Inside)
            flag(Violation::NestedShells, *v);
        }
      }
    }
  }

  void check_multi_polygon(const std::vector<PolygonShape>& shapes) {
    for (const auto& s : shapes) check_polygon(s);
    if (!report.valid) return;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      for (std::size_t j = i + 1; j < shapes.size(); ++j) {
        bool crossed = false;
        auto rings_i = all_rings(shapes[i]);
        auto rings_j = all_rings(shapes[j]);
        for (const auto* ri : rings_i)
          for (const auto* rj : rings_j) crossed |= check_ring_pair_edges(*ri, *rj);
        if (crossed) continue;
        check_shell_nesting(shapes[i], shapes[j]);
        check_shell_nesting(shapes[j], shapes[i]);
      }
    }
  }

  // Flags shapes whose shell sits in another member's interior. Sitting
  // inside a hole is fine.
  void check_shell_nesting(const PolygonShape& inner, const PolygonShape& outer) {
    if (const Coordinate* v = free_vertex(inner.exterior, outer.exterior)) {
      if (pred::locate_in_polygon(*v, outer) == Location::Inside)
        flag(Violation::NestedShells, *v);
    }
  }

  static std::vector<const std::vector<Coordinate>*> all_rings(const PolygonShape& s) {
    std::vector<const std::vector<Coordinate>*> rings{&s.exterior};
    for (const auto& h : s.holes) rings.push_back(&h);
    return rings;
  }
};

}  // namespace

std::string_view violation_name(Violation v) {
  switch (v) {
    case Violation::UnclosedRing:
      return "UnclosedRing";
    case Violation::SelfIntersection:
      return "SelfIntersection";
    case Violation::HoleOutsideShell:
      return "HoleOutsideShell";
    case Violation::NestedShells:
      return "NestedShells";
    case Violation::DuplicateConsecutivePoints:
      return "DuplicateConsecutivePoints";
    case Violation::TooFewPoints:
      return "TooFewPoints";
    case Violation::RingNotSimple:
      return "RingNotSimple";
  }
  return "?";
}

std::string ValidityReport::summary() const {
  if (valid) return "valid";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += violation_name(v.code);
    out += " at (" + std::to_string(v.location.x) + ", " + std::to_string(v.location.y) + ")";
  }
  return out;
}

ValidityReport validate(const Geometry& g) {
  Checker checker;
  switch (g.kind()) {
    case GeometryKind::Empty:
    case GeometryKind::Point:
    case GeometryKind::MultiPoint:
      break;
    case GeometryKind::LineString:
    case GeometryKind::MultiLineString:
      for (const auto& path : g.paths()) checker.check_path(path);
      break;
    case GeometryKind::Polygon:
      checker.check_polygon(g.polygons().front());
      break;
    case GeometryKind::MultiPolygon:
      checker.check_multi_polygon(g.polygons());
      break;
  }
  return std::move(checker.report);
}

}  // namespace geol
