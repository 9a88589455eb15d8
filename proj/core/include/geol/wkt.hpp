#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "geol/geometry.hpp"

namespace geol {

/// Parses a WKT literal into a structural geometry.
///
/// Supported types: POINT, MULTIPOINT, LINESTRING, MULTILINESTRING, POLYGON,
/// MULTIPOLYGON and their EMPTY variants. GEOMETRYCOLLECTION and curve types
/// raise UnsupportedTypeError. A GeoSPARQL-style `<crs-uri>` prefix is
/// stripped. Z/M ordinates are truncated to 2D and duplicate consecutive
/// coordinates are collapsed; both are reported through `warnings` when a
/// sink is supplied. Ring closure and minimum point counts are enforced
/// structurally (ParseError); everything else about OGC validity is left to
/// validate().
Geometry parse_wkt(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Serializes a geometry back to WKT with round-trip-exact coordinates:
/// parse_wkt(serialize_wkt(g)) == g for every supported geometry.
std::string serialize_wkt(const Geometry& g);

}  // namespace geol
