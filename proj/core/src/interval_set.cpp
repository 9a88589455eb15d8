#include "geol/interval_set.hpp"

#include <algorithm>

namespace geol {

void IntervalSet::add(Interval iv) {
  if (iv.lo > iv.hi) throw Error("interval lo > hi");
  if (iv.lo < 0) throw Error("interval lo < 0");

  // First interval that could merge with iv: hi >= iv.lo - 1.
  auto first = std::lower_bound(intervals_.begin(), intervals_.end(), iv.lo - 1,
                                [](const Interval& a, std::int64_t key) { return a.hi < key; });
  auto last = first;
  while (last != intervals_.end() && last->lo <= iv.hi + 1) {
    iv.lo = std::min(iv.lo, last->lo);
    iv.hi = std::max(iv.hi, last->hi);
    ++last;
  }
  auto at = intervals_.erase(first, last);
  intervals_.insert(at, iv);
}

bool IntervalSet::contains(std::int64_t index) const {
  auto it = std::lower_bound(intervals_.begin(), intervals_.end(), index,
                             [](const Interval& a, std::int64_t key) { return a.hi < key; });
  return it != intervals_.end() && it->lo <= index;
}

bool IntervalSet::contains(Interval iv) const {
  auto it = std::lower_bound(intervals_.begin(), intervals_.end(), iv.lo,
                             [](const Interval& a, std::int64_t key) { return a.hi < key; });
  return it != intervals_.end() && it->lo <= iv.lo && iv.hi <= it->hi;
}

std::vector<Interval> IntervalSet::missing(Interval request) const {
  std::vector<Interval> gaps;
  std::int64_t cursor = request.lo;
  for (const auto& iv : intervals_) {
    if (iv.hi < request.lo) continue;
    if (iv.lo > request.hi) break;
    if (iv.lo > cursor) gaps.push_back({cursor, iv.lo - 1});
    cursor = std::max(cursor, iv.hi + 1);
    if (cursor > request.hi) break;
  }
  if (cursor <= request.hi) gaps.push_back({cursor, request.hi});
  return gaps;
}

std::vector<Interval> IntervalSet::covered(Interval request) const {
  std::vector<Interval> out;
  for (const auto& iv : intervals_) {
    if (iv.hi < request.lo || iv.lo > request.hi) continue;
    out.push_back({std::max(iv.lo, request.lo), std::min(iv.hi, request.hi)});
  }
  return out;
}

std::optional<std::int64_t> IntervalSet::min_index() const {
  if (intervals_.empty()) return std::nullopt;
  return intervals_.front().lo;
}

std::optional<std::int64_t> IntervalSet::max_index() const {
  if (intervals_.empty()) return std::nullopt;
  return intervals_.back().hi;
}

std::int64_t IntervalSet::total_count() const {
  std::int64_t total = 0;
  for (const auto& iv : intervals_) total += iv.count();
  return total;
}

bool IntervalSet::well_formed() const {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (intervals_[i].lo > intervals_[i].hi || intervals_[i].lo < 0) return false;
    if (i > 0 && intervals_[i].lo <= intervals_[i - 1].hi + 1) return false;
  }
  return true;
}

}  // namespace geol
