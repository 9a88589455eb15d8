#include "support/fixtures.hpp"

#include <algorithm>
#include <numeric>

#include "geol/validity.hpp"

namespace geoltest {

using geol::Coordinate;
using geol::Geometry;
using geol::PolygonShape;

int GeometryGenerator::rand_coord(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

Geometry GeometryGenerator::next_point() {
  return Geometry::point({double(rand_coord(0, max_)), double(rand_coord(0, max_))});
}

Geometry GeometryGenerator::next_multipoint() {
  int n = rand_coord(1, 4);
  std::vector<Coordinate> pts;
  for (int i = 0; i < n; ++i)
    pts.push_back({double(rand_coord(0, max_)), double(rand_coord(0, max_))});
  geol::geom::collapse_duplicates(pts);
  return Geometry::multi_point(std::move(pts));
}

Geometry GeometryGenerator::next_linestring() {
  for (;;) {
    int n = rand_coord(2, 4);
    std::vector<Coordinate> pts;
    for (int i = 0; i < n; ++i)
      pts.push_back({double(rand_coord(0, max_)), double(rand_coord(0, max_))});
    geol::geom::collapse_duplicates(pts);
    if (pts.size() >= 2) return Geometry::line_string(std::move(pts));
  }
}

Geometry GeometryGenerator::next_multilinestring() {
  int n = rand_coord(2, 3);
  std::vector<std::vector<Coordinate>> paths;
  for (int i = 0; i < n; ++i) paths.push_back(next_linestring().paths().front());
  return Geometry::multi_line_string(std::move(paths));
}

// Andrew's monotone chain over distinct integer points.
std::vector<Coordinate> GeometryGenerator::convex_hull_points(int lo_x, int hi_x, int lo_y,
                                                              int hi_y, int count) {
  std::vector<std::pair<int, int>> pts;
  for (int i = 0; i < count; ++i) pts.emplace_back(rand_coord(lo_x, hi_x), rand_coord(lo_y, hi_y));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return {};
  auto cross = [](std::pair<int, int> o, std::pair<int, int> a, std::pair<int, int> b) {
    return std::int64_t(a.first - o.first) * (b.second - o.second) -
           std::int64_t(a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<int, int>> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) return {};
  std::vector<Coordinate> out;
  for (const auto& [x, y] : hull) out.push_back({double(x), double(y)});
  out.push_back(out.front());  // close
  return out;
}

Geometry GeometryGenerator::next_polygon() {
  for (;;) {
    // Random sub-window: varied scales, not only window-filling shapes.
    int w = rand_coord(3, std::min(10, max_));
    int h = rand_coord(3, std::min(10, max_));
    int x0 = rand_coord(0, max_ - w);
    int y0 = rand_coord(0, max_ - h);
    auto ring = convex_hull_points(x0, x0 + w, y0, y0 + h, rand_coord(4, 8));
    if (ring.size() < 4) continue;
    PolygonShape shape;
    shape.exterior = std::move(ring);
    // Occasional hole: a small triangle strictly inside, found by probing.
    if (rand_coord(0, 3) == 0) {
      geol::BoundingBox box = geol::mbb(Geometry::polygon(shape));
      int cx = int((box.min_x + box.max_x) / 2);
      int cy = int((box.min_y + box.max_y) / 2);
      std::vector<Coordinate> hole = {{double(cx), double(cy)},
                                      {double(cx + 1), double(cy)},
                                      {double(cx), double(cy + 1)},
                                      {double(cx), double(cy)}};
      PolygonShape with_hole = shape;
      with_hole.holes.push_back(hole);
      Geometry candidate = Geometry::polygon(with_hole);
      if (geol::validate(candidate).valid) return candidate;
    }
    Geometry g = Geometry::polygon(shape);
    if (geol::validate(g).valid) return g;
  }
}

Geometry GeometryGenerator::next_multipolygon() {
  if (max_ < 8) return next_polygon();  // window too small for two disjoint hulls
  // Two hulls in disjoint windows keep the member interiors disjoint.
  for (;;) {
    int split = max_ / 2;
    auto left = convex_hull_points(0, split - 1, 0, max_, rand_coord(4, 6));
    auto right = convex_hull_points(split + 1, max_, 0, max_, rand_coord(4, 6));
    if (left.size() < 4 || right.size() < 4) continue;
    Geometry g = Geometry::multi_polygon({{left, {}}, {right, {}}});
    if (geol::validate(g).valid) return g;
  }
}

Geometry GeometryGenerator::next() {
  switch (rand_coord(0, 9)) {
    case 0:
    case 1:
      return next_point();
    case 2:
      return next_multipoint();
    case 3:
    case 4:
      return next_linestring();
    case 5:
      return next_multilinestring();
    case 6:
    case 7:
      return next_polygon();
    case 8:
      return next_multipolygon();
    default: {
      // Axis-aligned boxes produce the touch/overlap cases hulls rarely hit.
      int x = rand_coord(0, max_ - 2), y = rand_coord(0, max_ - 2);
      int w = rand_coord(1, std::min(4, max_ - x)), h = rand_coord(1, std::min(4, max_ - y));
      PolygonShape box{{{double(x), double(y)},
                        {double(x + w), double(y)},
                        {double(x + w), double(y + h)},
                        {double(x), double(y + h)},
                        {double(x), double(y)}},
                       {}};
      return Geometry::polygon(box);
    }
  }
}

std::string square_wkt(double x, double y, double size) {
  auto num = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  std::string x0 = num(x), y0 = num(y), x1 = num(x + size), y1 = num(y + size);
  return "POLYGON ((" + x0 + " " + y0 + ", " + x1 + " " + y0 + ", " + x1 + " " + y1 + ", " + x0 +
         " " + y1 + ", " + x0 + " " + y0 + "))";
}

std::string bowtie_wkt(double x, double y, double size) {
  auto num = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  std::string x0 = num(x), y0 = num(y), x1 = num(x + size), y1 = num(y + size);
  return "POLYGON ((" + x0 + " " + y0 + ", " + x1 + " " + y1 + ", " + x1 + " " + y0 + ", " + x0 +
         " " + y1 + ", " + x0 + " " + y0 + "))";
}

GridFixture make_grid_fixture(std::size_t n, std::size_t bowties, std::uint64_t seed) {
  GridFixture fixture;
  std::size_t side = 1;
  while (side * side < n) ++side;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  fixture.bowtie_positions.assign(order.begin(),
                                  order.begin() + static_cast<std::ptrdiff_t>(bowties));
  std::sort(fixture.bowtie_positions.begin(), fixture.bowtie_positions.end());

  fixture.rows.reserve(n);
  std::size_t next_bowtie = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = 2.0 * double(i % side);
    double y = 2.0 * double(i / side);
    bool is_bowtie = next_bowtie < fixture.bowtie_positions.size() &&
                     fixture.bowtie_positions[next_bowtie] == i;
    if (is_bowtie) ++next_bowtie;
    MockSparqlEndpoint::Row row;
    row.id = "http://example.org/geo/" + std::to_string(i);
    row.wkt = is_bowtie ? bowtie_wkt(x, y, 1.0) : square_wkt(x, y, 1.0);
    fixture.rows.push_back(std::move(row));
  }
  return fixture;
}

}  // namespace geoltest
