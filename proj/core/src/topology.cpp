#include "geol/topology.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "geol/predicates.hpp"

namespace geol {

namespace {

using pred::Location;

constexpr double kEps = kConstructedPointEpsilon;

enum class Cls { Empty, Points, Lines, Areas };

Cls classify(const Geometry& g) {
  switch (g.kind()) {
    case GeometryKind::Empty:
      return Cls::Empty;
    case GeometryKind::Point:
    case GeometryKind::MultiPoint:
      return Cls::Points;
    case GeometryKind::LineString:
    case GeometryKind::MultiLineString:
      return Cls::Lines;
    case GeometryKind::Polygon:
    case GeometryKind::MultiPolygon:
      return Cls::Areas;
  }
  return Cls::Empty;
}

struct Seg {
  Coordinate a, b;
};

// Directed ring edges of all polygons, in normalized orientation (the
// polygon interior lies to the left of every edge).
template <typename Fn>
void for_each_area_edge(const Geometry& g, Fn&& fn) {
  for (const auto& poly : g.polygons()) {
    for (std::size_t i = 0; i + 1 < poly.exterior.size(); ++i)
      fn(poly.exterior[i], poly.exterior[i + 1]);
    for (const auto& hole : poly.holes)
      for (std::size_t i = 0; i + 1 < hole.size(); ++i) fn(hole[i], hole[i + 1]);
  }
}

template <typename Fn>
void for_each_line_edge(const Geometry& g, Fn&& fn) {
  for (const auto& path : g.paths())
    for (std::size_t i = 0; i + 1 < path.size(); ++i) fn(path[i], path[i + 1]);
}

template <typename Fn>
void for_each_vertex(const Geometry& g, Fn&& fn) {
  for (const auto& c : g.points()) fn(c);
  for (const auto& path : g.paths())
    for (const auto& c : path) fn(c);
  for (const auto& poly : g.polygons()) {
    for (std::size_t i = 0; i + 1 < poly.exterior.size(); ++i) fn(poly.exterior[i]);
    for (const auto& hole : poly.holes)
      for (std::size_t i = 0; i + 1 < hole.size(); ++i) fn(hole[i]);
  }
}

bool contains_coordinate(const std::vector<Coordinate>& coords, const Coordinate& c) {
  return std::find(coords.begin(), coords.end(), c) != coords.end();
}

// Location of an input point relative to a prepared geometry, exact.
Location locate_point(const Coordinate& p, const PreparedGeometry& g) {
  switch (classify(g.geometry())) {
    case Cls::Empty:
      return Location::Outside;
    case Cls::Points:
      return contains_coordinate(g.geometry().points(), p) ? Location::Inside
                                                           : Location::Outside;
    case Cls::Lines: {
      bool on = false;
      for_each_line_edge(g.geometry(), [&](const Coordinate& a, const Coordinate& b) {
        if (!on && pred::on_segment(p, a, b)) on = true;
      });
      if (!on) return Location::Outside;
      return contains_coordinate(g.line_boundary(), p) ? Location::Boundary : Location::Inside;
    }
    case Cls::Areas:
      return pred::locate_in_area(p, g.geometry().polygons());
  }
  return Location::Outside;
}

int interior_dim(Cls c) {
  switch (c) {
    case Cls::Points:
      return 0;
    case Cls::Lines:
      return 1;
    case Cls::Areas:
      return 2;
    default:
      return -1;
  }
}

int boundary_dim(const PreparedGeometry& g) {
  switch (classify(g.geometry())) {
    case Cls::Lines:
      return g.line_boundary().empty() ? -1 : 0;
    case Cls::Areas:
      return 1;
    default:
      return -1;
  }
}

Feature feature_of(Location loc) {
  switch (loc) {
    case Location::Inside:
      return Feature::Interior;
    case Location::Boundary:
      return Feature::Boundary;
    case Location::Outside:
      return Feature::Exterior;
  }
  return Feature::Exterior;
}

// ---------------------------------------------------------------------------
// Segment-versus-area classification.
//
// Splits one directed segment at every interaction with the area's rings and
// reports the resulting pieces: parameter ranges through the interior or the
// exterior, collinear runs along the boundary (with the side the area's
// interior falls on), and isolated boundary contacts.
// ---------------------------------------------------------------------------

struct SegAreaClass {
  struct BoundaryPiece {
    double t0, t1;
    bool side_known;
    bool interior_left;  // area interior lies left of the segment direction
  };
  struct Touch {
    double t;
    Coordinate point;
  };
  bool has_interior = false;
  bool has_exterior = false;
  std::vector<BoundaryPiece> boundary;
  std::vector<Touch> touches;
};

bool same_direction(const Coordinate& a1, const Coordinate& b1, const Coordinate& a2,
                    const Coordinate& b2) {
  return (b1.x - a1.x) * (b2.x - a2.x) + (b1.y - a1.y) * (b2.y - a2.y) > 0.0;
}

Coordinate point_at(const Coordinate& a, const Coordinate& b, double t) {
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

void merge_intervals(std::vector<std::pair<double, double>>& iv) {
  if (iv.empty()) return;
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> out;
  out.push_back(iv.front());
  for (std::size_t i = 1; i < iv.size(); ++i) {
    if (iv[i].first <= out.back().second + kEps) {
      out.back().second = std::max(out.back().second, iv[i].second);
    } else {
      out.push_back(iv[i]);
    }
  }
  iv = std::move(out);
}

SegAreaClass classify_segment_vs_area(const Coordinate& sa, const Coordinate& sb,
                                      const PreparedGeometry& area) {
  SegAreaClass result;
  std::vector<double> cuts{0.0, 1.0};
  std::vector<SegAreaClass::Touch> raw_touches;

  for_each_area_edge(area.geometry(), [&](const Coordinate& ea, const Coordinate& eb) {
    bool col = pred::orient(sa, sb, ea) == 0 && pred::orient(sa, sb, eb) == 0;
    if (col) {
      if (auto iv = pred::overlap_interval(sa, sb, ea, eb)) {
        result.boundary.push_back({iv->first, iv->second, true, same_direction(sa, sb, ea, eb)});
        cuts.push_back(iv->first);
        cuts.push_back(iv->second);
        return;
      }
      // Collinear but no positive-length overlap: at most a point contact.
      for (const Coordinate& v : {ea, eb}) {
        if (pred::on_segment(v, sa, sb)) {
          double t = pred::param_on_segment(v, sa, sb);
          cuts.push_back(t);
          raw_touches.push_back({t, v});
        }
      }
      return;
    }
    if (pred::proper_crossing(sa, sb, ea, eb)) {
      Coordinate x = pred::crossing_point(sa, sb, ea, eb);
      double t = pred::param_on_segment(x, sa, sb);
      cuts.push_back(t);
      raw_touches.push_back({t, x});
      return;
    }
    // Possible endpoint contacts.
    for (const Coordinate& v : {ea, eb}) {
      if (pred::on_segment(v, sa, sb)) {
        double t = pred::param_on_segment(v, sa, sb);
        cuts.push_back(t);
        raw_touches.push_back({t, v});
      }
    }
    if (pred::on_segment(sa, ea, eb)) {
      cuts.push_back(0.0);
      raw_touches.push_back({0.0, sa});
    }
    if (pred::on_segment(sb, ea, eb)) {
      cuts.push_back(1.0);
      raw_touches.push_back({1.0, sb});
    }
  });

  // Union of boundary runs, side-agnostic, for gap classification.
  std::vector<std::pair<double, double>> covered;
  for (const auto& bp : result.boundary) covered.push_back({bp.t0, bp.t1});
  merge_intervals(covered);

  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::fabs(a - b) <= kEps; }),
             cuts.end());

  auto in_covered = [&](double t) {
    for (const auto& c : covered)
      if (t >= c.first - kEps && t <= c.second + kEps) return true;
    return false;
  };

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double t0 = std::max(0.0, cuts[i]);
    double t1 = std::min(1.0, cuts[i + 1]);
    if (t1 - t0 <= kEps) continue;
    double mid = 0.5 * (t0 + t1);
    if (in_covered(mid)) continue;
    Location loc = pred::locate_in_area(point_at(sa, sb, mid), area.geometry().polygons());
    if (loc == Location::Boundary) {
      // A sample landing exactly on a ring despite the piece not being
      // collinear: resample off-center.
      for (double f : {0.25, 0.75}) {
        loc = pred::locate_in_area(point_at(sa, sb, t0 + f * (t1 - t0)),
                                   area.geometry().polygons());
        if (loc != Location::Boundary) break;
      }
      if (loc == Location::Boundary) {
        result.boundary.push_back({t0, t1, false, false});
        continue;
      }
    }
    if (loc == Location::Inside) result.has_interior = true;
    if (loc == Location::Outside) result.has_exterior = true;
  }

  // Keep only touches that are isolated (not swallowed by a boundary run).
  for (const auto& t : raw_touches) {
    if (!in_covered(t.t)) result.touches.push_back(t);
  }
  return result;
}

// True if every segment produced by `edges` is fully covered by collinear
// overlaps with segments produced by `coverers`.
template <typename EdgesFn, typename CoverersFn>
bool fully_covered(EdgesFn&& for_each_edge, CoverersFn&& for_each_coverer) {
  bool covered_all = true;
  for_each_edge([&](const Coordinate& a, const Coordinate& b) {
    if (!covered_all) return;
    std::vector<std::pair<double, double>> iv;
    for_each_coverer([&](const Coordinate& ca, const Coordinate& cb) {
      if (pred::orient(a, b, ca) == 0 && pred::orient(a, b, cb) == 0) {
        if (auto o = pred::overlap_interval(a, b, ca, cb)) iv.push_back(*o);
      }
    });
    merge_intervals(iv);
    double reach = 0.0;
    for (const auto& seg : iv) {
      if (seg.first > reach + kEps) break;
      reach = std::max(reach, seg.second);
    }
    if (reach < 1.0 - kEps) covered_all = false;
  });
  return covered_all;
}

// ---------------------------------------------------------------------------
// Per-class relate cases. Rows belong to `a`, columns to `b`.
// ---------------------------------------------------------------------------

void relate_points_points(const PreparedGeometry& a, const PreparedGeometry& b,
                          IntersectionMatrix& m) {
  for (const auto& p : a.geometry().points()) {
    if (contains_coordinate(b.geometry().points(), p)) {
      m.raise(Feature::Interior, Feature::Interior, 0);
    } else {
      m.raise(Feature::Interior, Feature::Exterior, 0);
    }
  }
  for (const auto& p : b.geometry().points()) {
    if (!contains_coordinate(a.geometry().points(), p))
      m.raise(Feature::Exterior, Feature::Interior, 0);
  }
}

void relate_points_lines(const PreparedGeometry& a, const PreparedGeometry& b,
                         IntersectionMatrix& m) {
  for (const auto& p : a.geometry().points())
    m.raise(Feature::Interior, feature_of(locate_point(p, b)), 0);
  // Removing finitely many points cannot exhaust a 1-dimensional interior.
  m.set(Feature::Exterior, Feature::Interior, 1);
  for (const auto& e : b.line_boundary()) {
    if (!contains_coordinate(a.geometry().points(), e))
      m.raise(Feature::Exterior, Feature::Boundary, 0);
  }
}

void relate_points_areas(const PreparedGeometry& a, const PreparedGeometry& b,
                         IntersectionMatrix& m) {
  for (const auto& p : a.geometry().points())
    m.raise(Feature::Interior, feature_of(locate_point(p, b)), 0);
  m.set(Feature::Exterior, Feature::Interior, 2);
  m.set(Feature::Exterior, Feature::Boundary, 1);
}

void relate_lines_lines(const PreparedGeometry& a, const PreparedGeometry& b,
                        IntersectionMatrix& m) {
  const Geometry& ga = a.geometry();
  const Geometry& gb = b.geometry();

  // 1-dimensional overlap of the two curves.
  bool overlap = false;
  for_each_line_edge(ga, [&](const Coordinate& a1, const Coordinate& b1) {
    if (overlap) return;
    for_each_line_edge(gb, [&](const Coordinate& a2, const Coordinate& b2) {
      if (!overlap && pred::collinear_overlap(a1, b1, a2, b2)) overlap = true;
    });
  });
  if (overlap) m.raise(Feature::Interior, Feature::Interior, 1);

  auto a_edges = [&](auto&& fn) { for_each_line_edge(ga, fn); };
  auto b_edges = [&](auto&& fn) { for_each_line_edge(gb, fn); };
  if (!fully_covered(a_edges, b_edges)) m.raise(Feature::Interior, Feature::Exterior, 1);
  if (!fully_covered(b_edges, a_edges)) m.raise(Feature::Exterior, Feature::Interior, 1);

  // Isolated contacts at input vertices.
  auto vertex_contact = [&](const Coordinate& v) {
    Location la = locate_point(v, a);
    Location lb = locate_point(v, b);
    if (la != Location::Outside && lb != Location::Outside)
      m.raise(feature_of(la), feature_of(lb), 0);
  };
  for_each_vertex(ga, vertex_contact);
  for_each_vertex(gb, vertex_contact);

  // Proper crossings away from every input vertex meet interior-to-interior.
  bool crossing_found = false;
  for_each_line_edge(ga, [&](const Coordinate& a1, const Coordinate& b1) {
    if (crossing_found) return;
    for_each_line_edge(gb, [&](const Coordinate& a2, const Coordinate& b2) {
      if (crossing_found || !pred::proper_crossing(a1, b1, a2, b2)) return;
      bool at_vertex = false;
      auto check_vertex = [&](const Coordinate& v) {
        if (!at_vertex && pred::strictly_inside_segment(v, a1, b1) &&
            pred::strictly_inside_segment(v, a2, b2))
          at_vertex = true;
      };
      for_each_vertex(ga, check_vertex);
      for_each_vertex(gb, check_vertex);
      if (!at_vertex) crossing_found = true;
    });
  });
  if (crossing_found) m.raise(Feature::Interior, Feature::Interior, 0);

  for (const auto& e : a.line_boundary())
    if (locate_point(e, b) == Location::Outside) m.raise(Feature::Boundary, Feature::Exterior, 0);
  for (const auto& e : b.line_boundary())
    if (locate_point(e, a) == Location::Outside) m.raise(Feature::Exterior, Feature::Boundary, 0);
}

void relate_lines_areas(const PreparedGeometry& a, const PreparedGeometry& b,
                        IntersectionMatrix& m) {
  const Geometry& ga = a.geometry();

  for_each_line_edge(ga, [&](const Coordinate& sa, const Coordinate& sb) {
    SegAreaClass cls = classify_segment_vs_area(sa, sb, b);
    if (cls.has_interior) m.raise(Feature::Interior, Feature::Interior, 1);
    if (cls.has_exterior) m.raise(Feature::Interior, Feature::Exterior, 1);
    if (!cls.boundary.empty()) m.raise(Feature::Interior, Feature::Boundary, 1);
    for (const auto& touch : cls.touches) {
      bool at_line_boundary = false;
      for (const auto& e : a.line_boundary()) {
        if (std::fabs(e.x - touch.point.x) <= kEps && std::fabs(e.y - touch.point.y) <= kEps) {
          at_line_boundary = true;
          break;
        }
      }
      m.raise(at_line_boundary ? Feature::Boundary : Feature::Interior, Feature::Boundary, 0);
    }
  });

  for (const auto& e : a.line_boundary())
    m.raise(Feature::Boundary, feature_of(locate_point(e, b)), 0);

  // A 1-dimensional curve cannot exhaust a 2-dimensional interior.
  m.set(Feature::Exterior, Feature::Interior, 2);

  auto ring_edges = [&](auto&& fn) { for_each_area_edge(b.geometry(), fn); };
  auto line_edges = [&](auto&& fn) { for_each_line_edge(ga, fn); };
  m.set(Feature::Exterior, Feature::Boundary, fully_covered(ring_edges, line_edges) ? -1 : 1);
}

void relate_areas_areas(const PreparedGeometry& a, const PreparedGeometry& b,
                        IntersectionMatrix& m) {
  bool a_in_ib = false, a_in_eb = false, b_in_ia = false, b_in_ea = false;
  bool shared = false, shared_same = false, shared_diff = false, touch = false;

  for_each_area_edge(a.geometry(), [&](const Coordinate& sa, const Coordinate& sb) {
    SegAreaClass cls = classify_segment_vs_area(sa, sb, b);
    a_in_ib |= cls.has_interior;
    a_in_eb |= cls.has_exterior;
    touch |= !cls.touches.empty();
    for (const auto& bp : cls.boundary) {
      shared = true;
      if (bp.side_known) (bp.interior_left ? shared_same : shared_diff) = true;
    }
  });
  for_each_area_edge(b.geometry(), [&](const Coordinate& sa, const Coordinate& sb) {
    SegAreaClass cls = classify_segment_vs_area(sa, sb, a);
    b_in_ia |= cls.has_interior;
    b_in_ea |= cls.has_exterior;
    touch |= !cls.touches.empty();
  });

  m.set(Feature::Interior, Feature::Interior, (a_in_ib || b_in_ia || shared_same) ? 2 : -1);
  m.set(Feature::Interior, Feature::Boundary, b_in_ia ? 1 : -1);
  m.set(Feature::Interior, Feature::Exterior, (a_in_eb || b_in_ia || shared_diff) ? 2 : -1);
  m.set(Feature::Boundary, Feature::Interior, a_in_ib ? 1 : -1);
  m.set(Feature::Boundary, Feature::Boundary, shared ? 1 : (touch ? 0 : -1));
  m.set(Feature::Boundary, Feature::Exterior, a_in_eb ? 1 : -1);
  m.set(Feature::Exterior, Feature::Interior, (b_in_ea || a_in_ib || shared_diff) ? 2 : -1);
  m.set(Feature::Exterior, Feature::Boundary, b_in_ea ? 1 : -1);
}

int cls_rank(Cls c) {
  switch (c) {
    case Cls::Points:
      return 0;
    case Cls::Lines:
      return 1;
    case Cls::Areas:
      return 2;
    default:
      return -1;
  }
}

IntersectionMatrix relate_impl(const PreparedGeometry& a, const PreparedGeometry& b) {
  IntersectionMatrix m;
  m.set(Feature::Exterior, Feature::Exterior, 2);

  Cls ca = classify(a.geometry());
  Cls cb = classify(b.geometry());

  if (ca == Cls::Empty && cb == Cls::Empty) return m;
  if (ca == Cls::Empty) {
    m.set(Feature::Exterior, Feature::Interior, interior_dim(cb));
    m.set(Feature::Exterior, Feature::Boundary, boundary_dim(b));
    return m;
  }
  if (cb == Cls::Empty) {
    m.set(Feature::Interior, Feature::Exterior, interior_dim(ca));
    m.set(Feature::Boundary, Feature::Exterior, boundary_dim(a));
    return m;
  }

  // Disjoint bounding boxes: all bounded-feature intersections are empty.
  if (!a.box().intersects(b.box())) {
    m.set(Feature::Interior, Feature::Exterior, interior_dim(ca));
    m.set(Feature::Boundary, Feature::Exterior, boundary_dim(a));
    m.set(Feature::Exterior, Feature::Interior, interior_dim(cb));
    m.set(Feature::Exterior, Feature::Boundary, boundary_dim(b));
    return m;
  }

  if (cls_rank(ca) > cls_rank(cb)) return relate_impl(b, a).transposed();

  if (ca == Cls::Points && cb == Cls::Points) {
    relate_points_points(a, b, m);
  } else if (ca == Cls::Points && cb == Cls::Lines) {
    relate_points_lines(a, b, m);
  } else if (ca == Cls::Points && cb == Cls::Areas) {
    relate_points_areas(a, b, m);
  } else if (ca == Cls::Lines && cb == Cls::Lines) {
    relate_lines_lines(a, b, m);
  } else if (ca == Cls::Lines && cb == Cls::Areas) {
    relate_lines_areas(a, b, m);
  } else {
    relate_areas_areas(a, b, m);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Pattern tables. Only the dimension-independent relations live here;
// crosses and overlaps pick their pattern from dim(a), dim(b).
// ---------------------------------------------------------------------------

const PatternMatrix kDisjoint{"FF*FF****"};
const PatternMatrix kEquals{"T*F**FFF*"};
const PatternMatrix kWithin{"T*F**F***"};
const PatternMatrix kContains{"T*****FF*"};
const PatternMatrix kTouches[] = {PatternMatrix{"FT*******"}, PatternMatrix{"F**T*****"},
                                  PatternMatrix{"F***T****"}};
const PatternMatrix kCovers[] = {PatternMatrix{"T*****FF*"}, PatternMatrix{"*T****FF*"},
                                 PatternMatrix{"***T**FF*"}, PatternMatrix{"****T*FF*"}};
const PatternMatrix kCoveredBy[] = {PatternMatrix{"T*F**F***"}, PatternMatrix{"*TF**F***"},
                                    PatternMatrix{"**FT*F***"}, PatternMatrix{"**F*TF***"}};
const PatternMatrix kCrossesLower{"T*T******"};   // dim(a) < dim(b)
const PatternMatrix kCrossesHigher{"T*****T**"};  // dim(a) > dim(b)
const PatternMatrix kCrossesLines{"0********"};
const PatternMatrix kOverlapsSameDim{"T*T***T**"};  // point/point, area/area
const PatternMatrix kOverlapsLines{"1*T***T**"};

template <std::size_t N>
bool matches_any(const IntersectionMatrix& m, const PatternMatrix (&patterns)[N]) {
  for (const auto& p : patterns)
    if (matches(m, p)) return true;
  return false;
}

}  // namespace

std::string IntersectionMatrix::to_string() const {
  std::string out(9, 'F');
  for (int i = 0; i < 9; ++i) {
    int v = cells_[static_cast<std::size_t>(i)];
    if (v >= 0) out[static_cast<std::size_t>(i)] = static_cast<char>('0' + v);
  }
  return out;
}

PatternMatrix::PatternMatrix(std::string_view chars) : chars_(chars) {
  if (chars_.size() != 9) throw Error("pattern matrix must have exactly 9 characters");
  for (char c : chars_) {
    if (c != 'T' && c != 'F' && c != '*' && c != '0' && c != '1' && c != '2')
      throw Error(std::string("illegal pattern character: ") + c);
  }
}

bool matches(const IntersectionMatrix& m, const PatternMatrix& p) {
  for (int i = 0; i < 9; ++i) {
    int dim = m.cell(i / 3, i % 3);
    switch (p.at(i)) {
      case '*':
        break;
      case 'T':
        if (dim < 0) return false;
        break;
      case 'F':
        if (dim != -1) return false;
        break;
      default:
        if (dim != p.at(i) - '0') return false;
    }
  }
  return true;
}

std::optional<TopoRelation> parse_relation(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c == ' ' || c == '_' || c == '-') continue;
    key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (key == "equals") return TopoRelation::Equals;
  if (key == "disjoint") return TopoRelation::Disjoint;
  if (key == "intersects") return TopoRelation::Intersects;
  if (key == "touches") return TopoRelation::Touches;
  if (key == "crosses") return TopoRelation::Crosses;
  if (key == "overlaps") return TopoRelation::Overlaps;
  if (key == "within") return TopoRelation::Within;
  if (key == "contains") return TopoRelation::Contains;
  if (key == "covers") return TopoRelation::Covers;
  if (key == "coveredby") return TopoRelation::CoveredBy;
  return std::nullopt;
}

std::string_view relation_name(TopoRelation rel) {
  switch (rel) {
    case TopoRelation::Equals:
      return "equals";
    case TopoRelation::Disjoint:
      return "disjoint";
    case TopoRelation::Intersects:
      return "intersects";
    case TopoRelation::Touches:
      return "touches";
    case TopoRelation::Crosses:
      return "crosses";
    case TopoRelation::Overlaps:
      return "overlaps";
    case TopoRelation::Within:
      return "within";
    case TopoRelation::Contains:
      return "contains";
    case TopoRelation::Covers:
      return "covers";
    case TopoRelation::CoveredBy:
      return "coveredby";
  }
  return "?";
}

PreparedGeometry::PreparedGeometry(Geometry g) : geom_(std::move(g)) {
  validity_ = validate(geom_);
  dim_ = dimension(geom_);
  if (!geom_.is_empty()) box_ = mbb(geom_);

  if (classify(geom_) == Cls::Lines) {
    Geometry b = boundary(geom_);
    if (!b.is_empty()) line_boundary_ = b.points();
  }

  // Normalize ring orientation so the interior is always left of a directed
  // edge: exterior rings counter-clockwise, holes clockwise.
  if (classify(geom_) == Cls::Areas) {
    std::vector<PolygonShape> shapes = geom_.polygons();
    for (auto& shape : shapes) {
      if (pred::ring_orientation(shape.exterior) < 0)
        std::reverse(shape.exterior.begin(), shape.exterior.end());
      for (auto& hole : shape.holes) {
        if (pred::ring_orientation(hole) > 0) std::reverse(hole.begin(), hole.end());
      }
    }
    geom_ = geom_.kind() == GeometryKind::Polygon ? Geometry::polygon(std::move(shapes.front()))
                                                  : Geometry::multi_polygon(std::move(shapes));
  }
}

IntersectionMatrix relate(const PreparedGeometry& a, const PreparedGeometry& b) {
  if (!a.valid())
    throw InvalidGeometryError("relate: first geometry invalid: " + a.validity().summary());
  if (!b.valid())
    throw InvalidGeometryError("relate: second geometry invalid: " + b.validity().summary());
  return relate_impl(a, b);
}

IntersectionMatrix relate(const Geometry& a, const Geometry& b) {
  return relate(PreparedGeometry(a), PreparedGeometry(b));
}

bool evaluate(TopoRelation rel, const PreparedGeometry& a, const PreparedGeometry& b) {
  switch (rel) {
    case TopoRelation::Disjoint:
      return matches(relate(a, b), kDisjoint);
    case TopoRelation::Intersects:
      return !matches(relate(a, b), kDisjoint);
    case TopoRelation::Equals:
      return matches(relate(a, b), kEquals);
    case TopoRelation::Within:
      return matches(relate(a, b), kWithin);
    case TopoRelation::Contains:
      return matches(relate(a, b), kContains);
    case TopoRelation::Touches:
      return matches_any(relate(a, b), kTouches);
    case TopoRelation::Covers:
      return matches_any(relate(a, b), kCovers);
    case TopoRelation::CoveredBy:
      return matches_any(relate(a, b), kCoveredBy);
    case TopoRelation::Crosses: {
      int da = a.dim(), db = b.dim();
      if (da < db) return matches(relate(a, b), kCrossesLower);
      if (da > db) return matches(relate(a, b), kCrossesHigher);
      if (da == 1) return matches(relate(a, b), kCrossesLines);
      throw UndefinedRelationError("crosses is undefined for equal dimensions " +
                                   std::to_string(da) + "/" + std::to_string(db));
    }
    case TopoRelation::Overlaps: {
      int da = a.dim(), db = b.dim();
      if (da != db) return false;
      if (da == 1) return matches(relate(a, b), kOverlapsLines);
      return matches(relate(a, b), kOverlapsSameDim);
    }
  }
  return false;
}

bool evaluate(TopoRelation rel, const Geometry& a, const Geometry& b) {
  return evaluate(rel, PreparedGeometry(a), PreparedGeometry(b));
}

}  // namespace geol
