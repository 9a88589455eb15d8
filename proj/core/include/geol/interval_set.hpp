#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "geol/errors.hpp"

namespace geol {

/// Closed integer interval [lo, hi] of triple indices.
struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  bool operator==(const Interval&) const = default;
  std::int64_t count() const { return hi - lo + 1; }
};

/// Ordered set of disjoint, non-adjacent closed intervals. Adjacent or
/// overlapping additions coalesce, so the representation is canonical.
class IntervalSet {
 public:
  void add(Interval iv);
  void add(std::int64_t lo, std::int64_t hi) { add(Interval{lo, hi}); }

  bool contains(std::int64_t index) const;
  bool contains(Interval iv) const;

  /// The set-difference [request] \ coverage as a minimal sorted interval
  /// list.
  std::vector<Interval> missing(Interval request) const;
  /// The covered sub-intervals of [request], sorted.
  std::vector<Interval> covered(Interval request) const;

  bool empty() const { return intervals_.empty(); }
  const std::vector<Interval>& intervals() const { return intervals_; }
  std::optional<std::int64_t> min_index() const;
  std::optional<std::int64_t> max_index() const;
  std::int64_t total_count() const;

  /// Sorted, disjoint, non-adjacent, lo <= hi. Test support.
  bool well_formed() const;

 private:
  std::vector<Interval> intervals_;
};

}  // namespace geol
