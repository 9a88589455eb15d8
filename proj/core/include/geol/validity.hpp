#pragma once

#include <string>
#include <vector>

#include "geol/geometry.hpp"

namespace geol {

enum class Violation {
  UnclosedRing,
  SelfIntersection,
  HoleOutsideShell,
  NestedShells,
  DuplicateConsecutivePoints,
  TooFewPoints,
  RingNotSimple,
};

std::string_view violation_name(Violation v);

struct ValidityViolation {
  Violation code;
  Coordinate location;
};

struct ValidityReport {
  bool valid = true;
  std::vector<ValidityViolation> violations;

  std::string summary() const;
};

/// OGC Simple Features validity: simple rings, holes inside the shell,
/// shells not nested, no ring self-intersection. Rings of one polygon may
/// touch at finitely many points but must not cross or share segments.
/// Invalidity is a result, not an error. Points and lines are always valid
/// (a self-intersecting linestring is non-simple but valid).
ValidityReport validate(const Geometry& g);

}  // namespace geol
