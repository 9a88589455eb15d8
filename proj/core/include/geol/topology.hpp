#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "geol/geometry.hpp"
#include "geol/validity.hpp"

namespace geol {

enum class Feature { Interior = 0, Boundary = 1, Exterior = 2 };

/// The DE-9IM matrix: dimensions of the pairwise intersections of the
/// interiors, boundaries and exteriors of two geometries. Cells hold
/// -1 (empty), 0, 1 or 2; rows index features of the first geometry.
class IntersectionMatrix {
 public:
  IntersectionMatrix() { cells_.fill(-1); }

  int cell(Feature row, Feature col) const { return cells_[index(row, col)]; }
  int cell(int row, int col) const { return cells_[row * 3 + col]; }
  void set(Feature row, Feature col, int dim) { cells_[index(row, col)] = static_cast<int8_t>(dim); }
  /// Raises the cell to max(current, dim).
  void raise(Feature row, Feature col, int dim) {
    auto& c = cells_[index(row, col)];
    if (dim > c) c = static_cast<int8_t>(dim);
  }

  IntersectionMatrix transposed() const {
    IntersectionMatrix t;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t.cells_[c * 3 + r] = cells_[r * 3 + c];
    return t;
  }

  /// Row-major 9-character form, 'F' for -1: e.g. "212101212".
  std::string to_string() const;

  bool operator==(const IntersectionMatrix&) const = default;

 private:
  static int index(Feature row, Feature col) {
    return static_cast<int>(row) * 3 + static_cast<int>(col);
  }
  std::array<int8_t, 9> cells_;
};

/// A 9-character row-major template over {T, F, *, 0, 1, 2} matched against
/// an IntersectionMatrix.
class PatternMatrix {
 public:
  explicit PatternMatrix(std::string_view chars);

  char at(int i) const { return chars_[static_cast<std::size_t>(i)]; }
  const std::string& chars() const { return chars_; }

 private:
  std::string chars_;
};

/// True iff every cell satisfies its pattern character: '*' always, 'T' for
/// dim >= 0, 'F' for dim == -1, a digit for that exact dimension.
bool matches(const IntersectionMatrix& m, const PatternMatrix& p);

enum class TopoRelation {
  Equals,
  Disjoint,
  Intersects,
  Touches,
  Crosses,
  Overlaps,
  Within,
  Contains,
  Covers,
  CoveredBy,
};

inline constexpr std::array<TopoRelation, 10> kAllRelations = {
    TopoRelation::Equals,  TopoRelation::Disjoint, TopoRelation::Intersects,
    TopoRelation::Touches, TopoRelation::Crosses,  TopoRelation::Overlaps,
    TopoRelation::Within,  TopoRelation::Contains, TopoRelation::Covers,
    TopoRelation::CoveredBy,
};

/// Case-insensitive; accepts "covered by", "covered_by" and "coveredby".
std::optional<TopoRelation> parse_relation(std::string_view name);
std::string_view relation_name(TopoRelation rel);

/// A geometry pre-processed for repeated relate() calls: validity checked
/// once, rings oriented (exterior counter-clockwise, holes clockwise), line
/// boundary points and the bounding box extracted.
class PreparedGeometry {
 public:
  explicit PreparedGeometry(Geometry g);

  const Geometry& geometry() const { return geom_; }
  const ValidityReport& validity() const { return validity_; }
  bool valid() const { return validity_.valid; }
  int dim() const { return dim_; }
  bool is_empty() const { return geom_.is_empty(); }
  /// Only meaningful for non-empty geometries.
  const BoundingBox& box() const { return box_; }
  /// Odd-degree endpoints of line members (the SFS mod-2 boundary).
  const std::vector<Coordinate>& line_boundary() const { return line_boundary_; }

 private:
  Geometry geom_;
  ValidityReport validity_;
  int dim_ = -1;
  BoundingBox box_;
  std::vector<Coordinate> line_boundary_;
};

/// Computes the DE-9IM matrix of (a, b). Requires both inputs valid;
/// throws InvalidGeometryError otherwise.
IntersectionMatrix relate(const PreparedGeometry& a, const PreparedGeometry& b);
IntersectionMatrix relate(const Geometry& a, const Geometry& b);

/// Evaluates a named predicate against relate(a, b). Crosses is undefined
/// for equal-dimension inputs other than line/line (UndefinedRelationError);
/// Overlaps over mixed dimensions is defined as false.
bool evaluate(TopoRelation rel, const PreparedGeometry& a, const PreparedGeometry& b);
bool evaluate(TopoRelation rel, const Geometry& a, const Geometry& b);

}  // namespace geol
