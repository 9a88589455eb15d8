#include "geol/wkt.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace geol {

namespace {

class WktParser {
 public:
  WktParser(std::string_view text, std::vector<std::string>* warnings)
      : text_(text), warnings_(warnings) {}

  Geometry parse() {
    skip_ws();
    strip_crs_prefix();
    std::string type = read_word();
    read_dim_suffix();
    Geometry g = parse_body(type);
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after geometry");
    if (truncated_ordinates_) warn("Z/M ordinates truncated to 2D");
    if (collapsed_ > 0)
      warn("collapsed " + std::to_string(collapsed_) + " duplicate consecutive coordinate(s)");
    return g;
  }

 private:
  Geometry parse_body(const std::string& type) {
    if (type == "POINT") {
      if (consume_empty()) return Geometry::empty();
      expect('(');
      Coordinate c = read_coordinate();
      expect(')');
      return Geometry::point(c);
    }
    if (type == "MULTIPOINT") {
      if (consume_empty()) return Geometry::empty();
      return Geometry::multi_point(read_point_list());
    }
    if (type == "LINESTRING") {
      if (consume_empty()) return Geometry::empty();
      return Geometry::line_string(read_path());
    }
    if (type == "MULTILINESTRING") {
      if (consume_empty()) return Geometry::empty();
      std::vector<std::vector<Coordinate>> paths;
      expect('(');
      do {
        paths.push_back(read_path());
      } while (consume(','));
      expect(')');
      return Geometry::multi_line_string(std::move(paths));
    }
    if (type == "POLYGON") {
      if (consume_empty()) return Geometry::empty();
      return Geometry::polygon(read_polygon_shape());
    }
    if (type == "MULTIPOLYGON") {
      if (consume_empty()) return Geometry::empty();
      std::vector<PolygonShape> shapes;
      expect('(');
      do {
        shapes.push_back(read_polygon_shape());
      } while (consume(','));
      expect(')');
      return Geometry::multi_polygon(std::move(shapes));
    }
    if (type == "GEOMETRYCOLLECTION" || type == "CIRCULARSTRING" || type == "COMPOUNDCURVE" ||
        type == "CURVEPOLYGON" || type == "MULTICURVE" || type == "MULTISURFACE" ||
        type == "TRIANGLE" || type == "TIN" || type == "POLYHEDRALSURFACE") {
      throw UnsupportedTypeError("unsupported WKT type: " + type);
    }
    fail(type.empty() ? "expected geometry type" : "unknown WKT type: " + type);
  }

  PolygonShape read_polygon_shape() {
    PolygonShape shape;
    expect('(');
    shape.exterior = read_ring();
    while (consume(',')) shape.holes.push_back(read_ring());
    expect(')');
    return shape;
  }

  std::vector<Coordinate> read_ring() {
    std::size_t at = pos_;
    std::vector<Coordinate> ring = read_path_raw();
    collapsed_ += geom::collapse_duplicates(ring);
    if (ring.size() >= 2 && !geom::ring_closed(ring))
      fail_at(at, "UnclosedRing: polygon ring is not closed");
    if (ring.size() < 4) fail_at(at, "TooFewPoints: polygon ring needs at least 4 coordinates");
    return ring;
  }

  std::vector<Coordinate> read_path() {
    std::size_t at = pos_;
    std::vector<Coordinate> path = read_path_raw();
    collapsed_ += geom::collapse_duplicates(path);
    if (path.size() < 2) fail_at(at, "TooFewPoints: linestring needs at least 2 coordinates");
    return path;
  }

  std::vector<Coordinate> read_path_raw() {
    std::vector<Coordinate> coords;
    expect('(');
    do {
      coords.push_back(read_coordinate());
    } while (consume(','));
    expect(')');
    return coords;
  }

  // MULTIPOINT accepts both "( 1 2, 3 4 )" and "( (1 2), (3 4) )".
  std::vector<Coordinate> read_point_list() {
    std::vector<Coordinate> points;
    expect('(');
    do {
      if (consume('(')) {
        points.push_back(read_coordinate());
        expect(')');
      } else {
        points.push_back(read_coordinate());
      }
    } while (consume(','));
    expect(')');
    collapsed_ += geom::collapse_duplicates(points);
    return points;
  }

  Coordinate read_coordinate() {
    double x = read_number();
    double y = read_number();
    // Z and/or M ordinates: accept up to two extra numbers and drop them.
    int extras = 0;
    while (peek_number() && extras < 2) {
      read_number();
      ++extras;
      truncated_ordinates_ = true;
    }
    return {x, y};
  }

  double read_number() {
    skip_ws();
    std::size_t at = pos_;
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc() || ptr == text_.data() + pos_) fail_at(at, "expected a number");
    if (!std::isfinite(value)) fail_at(at, "coordinate must be finite");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  bool peek_number() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
  }

  // Consumes an optional Z / M / ZM dimensionality suffix.
  void read_dim_suffix() {
    std::size_t save = pos_;
    std::string word = read_word();
    if (word != "Z" && word != "M" && word != "ZM") pos_ = save;
  }

  bool consume_empty() {
    std::size_t save = pos_;
    std::string word = read_word();
    if (word == "EMPTY") return true;
    pos_ = save;
    return false;
  }

  void strip_crs_prefix() {
    if (pos_ < text_.size() && text_[pos_] == '<') {
      std::size_t close = text_.find('>', pos_);
      if (close == std::string_view::npos) fail("unterminated CRS URI prefix");
      pos_ = close + 1;
      skip_ws();
    }
  }

  std::string read_word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string word(text_.substr(start, pos_ - start));
    for (auto& c : word) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return word;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) { fail_at(pos_, message); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& message) {
    throw ParseError(at, message);
  }

  void warn(const std::string& message) {
    if (warnings_) warnings_->push_back(message);
  }

  std::string_view text_;
  std::vector<std::string>* warnings_;
  std::size_t pos_ = 0;
  std::size_t collapsed_ = 0;
  bool truncated_ordinates_ = false;
};

void append_number(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

void append_coordinate(std::string& out, const Coordinate& c) {
  append_number(out, c.x);
  out += ' ';
  append_number(out, c.y);
}

void append_seq(std::string& out, const std::vector<Coordinate>& coords) {
  out += '(';
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i > 0) out += ", ";
    append_coordinate(out, coords[i]);
  }
  out += ')';
}

void append_shape(std::string& out, const PolygonShape& shape) {
  out += '(';
  append_seq(out, shape.exterior);
  for (const auto& hole : shape.holes) {
    out += ", ";
    append_seq(out, hole);
  }
  out += ')';
}

}  // namespace

Geometry parse_wkt(std::string_view text, std::vector<std::string>* warnings) {
  return WktParser(text, warnings).parse();
}

std::string serialize_wkt(const Geometry& g) {
  std::string out;
  switch (g.kind()) {
    case GeometryKind::Empty:
      return "POINT EMPTY";
    case GeometryKind::Point:
      out = "POINT (";
      append_coordinate(out, g.points().front());
      out += ')';
      return out;
    case GeometryKind::MultiPoint:
      out = "MULTIPOINT (";
      for (std::size_t i = 0; i < g.points().size(); ++i) {
        if (i > 0) out += ", ";
        out += '(';
        append_coordinate(out, g.points()[i]);
        out += ')';
      }
      out += ')';
      return out;
    case GeometryKind::LineString:
      out = "LINESTRING ";
      append_seq(out, g.paths().front());
      return out;
    case GeometryKind::MultiLineString:
      out = "MULTILINESTRING (";
      for (std::size_t i = 0; i < g.paths().size(); ++i) {
        if (i > 0) out += ", ";
        append_seq(out, g.paths()[i]);
      }
      out += ')';
      return out;
    case GeometryKind::Polygon:
      out = "POLYGON ";
      append_shape(out, g.polygons().front());
      return out;
    case GeometryKind::MultiPolygon:
      out = "MULTIPOLYGON (";
      for (std::size_t i = 0; i < g.polygons().size(); ++i) {
        if (i > 0) out += ", ";
        append_shape(out, g.polygons()[i]);
      }
      out += ')';
      return out;
  }
  return out;
}

}  // namespace geol
