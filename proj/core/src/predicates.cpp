#include "geol/predicates.hpp"

#include <algorithm>
#include <cmath>

// The adaptive orientation test follows Shewchuk's classic staged scheme:
// evaluate in doubles, accept when the magnitude clears a forward error
// bound, otherwise fall back to exact floating-point expansion arithmetic.
// This translation keeps the zero-elimination sums and the A/B/C/D stages;
// it must be compiled without FMA contraction.

namespace geol {
namespace pred {

namespace {

struct ErrorBounds {
  double splitter;
  double result_err;
  double ccw_err_a;
  double ccw_err_b;
  double ccw_err_c;
};

ErrorBounds compute_bounds() {
  double every_other = 1.0;
  double epsilon = 1.0;
  double splitter = 1.0;
  double check = 1.0;
  double lastcheck;
  do {
    lastcheck = check;
    epsilon *= 0.5;
    if (every_other != 0.0) splitter *= 2.0;
    every_other = every_other == 0.0 ? 1.0 : 0.0;
    check = 1.0 + epsilon;
  } while (check != 1.0 && check != lastcheck);
  splitter += 1.0;
  return {
      splitter,
      (3.0 + 8.0 * epsilon) * epsilon,
      (3.0 + 16.0 * epsilon) * epsilon,
      (2.0 + 12.0 * epsilon) * epsilon,
      (9.0 + 64.0 * epsilon) * epsilon * epsilon,
  };
}

const ErrorBounds kBounds = compute_bounds();

inline void fast_two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  double bvirt = x - a;
  y = b - bvirt;
}

inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  double bvirt = x - a;
  double avirt = x - bvirt;
  double bround = b - bvirt;
  double around = a - avirt;
  y = around + bround;
}

inline void two_diff_tail(double a, double b, double x, double& y) {
  double bvirt = a - x;
  double avirt = x + bvirt;
  double bround = bvirt - b;
  double around = a - avirt;
  y = around + bround;
}

inline void split(double a, double& hi, double& lo) {
  double c = kBounds.splitter * a;
  double abig = c - a;
  hi = c - abig;
  lo = a - hi;
}

inline void two_product(double a, double b, double& x, double& y) {
  x = a * b;
  double ahi, alo, bhi, blo;
  split(a, ahi, alo);
  split(b, bhi, blo);
  double err1 = x - (ahi * bhi);
  double err2 = err1 - (alo * bhi);
  double err3 = err2 - (ahi * blo);
  y = (alo * blo) - err3;
}

inline void two_one_diff(double a1, double a0, double b, double& x2, double& x1, double& x0) {
  double i;
  two_sum(a0, -b, i, x0);
  two_sum(a1, i, x2, x1);
}

inline void two_two_diff(double a1, double a0, double b1, double b0, double& x3, double& x2,
                         double& x1, double& x0) {
  double j, v;
  two_one_diff(a1, a0, b0, j, v, x0);
  two_one_diff(j, v, b1, x3, x2, x1);
}

int fast_expansion_sum_zeroelim(int elen, const double* e, int flen, const double* f, double* h) {
  double q, qnew, hh;
  int eindex = 0, findex = 0, hindex = 0;
  double enow = e[0];
  double fnow = f[0];
  if ((fnow > enow) == (fnow > -enow)) {
    q = enow;
    ++eindex;
    if (eindex < elen) enow = e[eindex];
  } else {
    q = fnow;
    ++findex;
    if (findex < flen) fnow = f[findex];
  }
  if (eindex < elen && findex < flen) {
    if ((fnow > enow) == (fnow > -enow)) {
      fast_two_sum(enow, q, qnew, hh);
      ++eindex;
      if (eindex < elen) enow = e[eindex];
    } else {
      fast_two_sum(fnow, q, qnew, hh);
      ++findex;
      if (findex < flen) fnow = f[findex];
    }
    q = qnew;
    if (hh != 0.0) h[hindex++] = hh;
    while (eindex < elen && findex < flen) {
      if ((fnow > enow) == (fnow > -enow)) {
        two_sum(q, enow, qnew, hh);
        ++eindex;
        if (eindex < elen) enow = e[eindex];
      } else {
        two_sum(q, fnow, qnew, hh);
        ++findex;
        if (findex < flen) fnow = f[findex];
      }
      q = qnew;
      if (hh != 0.0) h[hindex++] = hh;
    }
  }
  while (eindex < elen) {
    two_sum(q, enow, qnew, hh);
    ++eindex;
    if (eindex < elen) enow = e[eindex];
    q = qnew;
    if (hh != 0.0) h[hindex++] = hh;
  }
  while (findex < flen) {
    two_sum(q, fnow, qnew, hh);
    ++findex;
    if (findex < flen) fnow = f[findex];
    q = qnew;
    if (hh != 0.0) h[hindex++] = hh;
  }
  if (q != 0.0 || hindex == 0) h[hindex++] = q;
  return hindex;
}

inline double estimate(int elen, const double* e) {
  double q = e[0];
  for (int i = 1; i < elen; ++i) q += e[i];
  return q;
}

double orient2d_adapt(const Coordinate& pa, const Coordinate& pb, const Coordinate& pc,
                      double detsum) {
  double acx = pa.x - pc.x;
  double bcx = pb.x - pc.x;
  double acy = pa.y - pc.y;
  double bcy = pb.y - pc.y;

  double detleft, detlefttail, detright, detrighttail;
  two_product(acx, bcy, detleft, detlefttail);
  two_product(acy, bcx, detright, detrighttail);

  double b[4];
  two_two_diff(detleft, detlefttail, detright, detrighttail, b[3], b[2], b[1], b[0]);

  double det = estimate(4, b);
  double errbound = kBounds.ccw_err_b * detsum;
  if (det >= errbound || -det >= errbound) return det;

  double acxtail, bcxtail, acytail, bcytail;
  two_diff_tail(pa.x, pc.x, acx, acxtail);
  two_diff_tail(pb.x, pc.x, bcx, bcxtail);
  two_diff_tail(pa.y, pc.y, acy, acytail);
  two_diff_tail(pb.y, pc.y, bcy, bcytail);

  if (acxtail == 0.0 && acytail == 0.0 && bcxtail == 0.0 && bcytail == 0.0) return det;

  errbound = kBounds.ccw_err_c * detsum + kBounds.result_err * std::fabs(det);
  det += (acx * bcytail + bcy * acxtail) - (acy * bcxtail + bcx * acytail);
  if (det >= errbound || -det >= errbound) return det;

  double s1, s0, t1, t0;
  double u[4];
  double c1[8], c2[12], d[16];

  two_product(acxtail, bcy, s1, s0);
  two_product(acytail, bcx, t1, t0);
  two_two_diff(s1, s0, t1, t0, u[3], u[2], u[1], u[0]);
  int c1length = fast_expansion_sum_zeroelim(4, b, 4, u, c1);

  two_product(acx, bcytail, s1, s0);
  two_product(acy, bcxtail, t1, t0);
  two_two_diff(s1, s0, t1, t0, u[3], u[2], u[1], u[0]);
  int c2length = fast_expansion_sum_zeroelim(c1length, c1, 4, u, c2);

  two_product(acxtail, bcytail, s1, s0);
  two_product(acytail, bcxtail, t1, t0);
  two_two_diff(s1, s0, t1, t0, u[3], u[2], u[1], u[0]);
  int dlength = fast_expansion_sum_zeroelim(c2length, c2, 4, u, d);

  return d[dlength - 1];
}

double orient2d(const Coordinate& pa, const Coordinate& pb, const Coordinate& pc) {
  double detleft = (pa.x - pc.x) * (pb.y - pc.y);
  double detright = (pa.y - pc.y) * (pb.x - pc.x);
  double det = detleft - detright;
  double detsum;

  if (detleft > 0.0) {
    if (detright <= 0.0) return det;
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det;
    detsum = -detleft - detright;
  } else {
    return det;
  }

  double errbound = kBounds.ccw_err_a * detsum;
  if (det >= errbound || -det >= errbound) return det;

  return orient2d_adapt(pa, pb, pc, detsum);
}

inline int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace

int orient(const Coordinate& a, const Coordinate& b, const Coordinate& c) {
  return sign_of(orient2d(a, b, c));
}

bool on_segment(const Coordinate& p, const Coordinate& a, const Coordinate& b) {
  if (p.x < std::min(a.x, b.x) || p.x > std::max(a.x, b.x) || p.y < std::min(a.y, b.y) ||
      p.y > std::max(a.y, b.y))
    return false;
  return orient(a, b, p) == 0;
}

bool strictly_inside_segment(const Coordinate& p, const Coordinate& a, const Coordinate& b) {
  return on_segment(p, a, b) && p != a && p != b;
}

bool collinear_overlap(const Coordinate& p1, const Coordinate& q1, const Coordinate& p2,
                       const Coordinate& q2) {
  if (orient(p1, q1, p2) != 0 || orient(p1, q1, q2) != 0) return false;
  return overlap_interval(p1, q1, p2, q2).has_value();
}

bool proper_crossing(const Coordinate& p1, const Coordinate& q1, const Coordinate& p2,
                     const Coordinate& q2) {
  int o1 = orient(p1, q1, p2);
  int o2 = orient(p1, q1, q2);
  if (o1 * o2 >= 0) return false;
  int o3 = orient(p2, q2, p1);
  int o4 = orient(p2, q2, q1);
  return o3 * o4 < 0;
}

bool segments_intersect(const Coordinate& p1, const Coordinate& q1, const Coordinate& p2,
                        const Coordinate& q2) {
  // Every non-proper intersection involves an endpoint of one segment lying
  // on the other, so the two checks below are exhaustive.
  if (proper_crossing(p1, q1, p2, q2)) return true;
  return on_segment(p2, p1, q1) || on_segment(q2, p1, q1) || on_segment(p1, p2, q2) ||
         on_segment(q1, p2, q2);
}

Coordinate crossing_point(const Coordinate& p1, const Coordinate& q1, const Coordinate& p2,
                          const Coordinate& q2) {
  double d1x = q1.x - p1.x;
  double d1y = q1.y - p1.y;
  double d2x = q2.x - p2.x;
  double d2y = q2.y - p2.y;
  double denom = d1x * d2y - d1y * d2x;
  double t = ((p2.x - p1.x) * d2y - (p2.y - p1.y) * d2x) / denom;
  return {p1.x + t * d1x, p1.y + t * d1y};
}

double param_on_segment(const Coordinate& p, const Coordinate& a, const Coordinate& b) {
  double dx = b.x - a.x;
  double dy = b.y - a.y;
  if (std::fabs(dx) >= std::fabs(dy)) {
    if (dx == 0.0) return 0.0;
    return (p.x - a.x) / dx;
  }
  return (p.y - a.y) / dy;
}

std::optional<std::pair<double, double>> overlap_interval(const Coordinate& p1,
                                                          const Coordinate& q1,
                                                          const Coordinate& p2,
                                                          const Coordinate& q2) {
  // Positive-length decision uses raw coordinate comparisons along the
  // dominant axis of [p1,q1], which is exact; the parameters themselves are
  // only used to place split points.
  bool use_x = std::fabs(q1.x - p1.x) >= std::fabs(q1.y - p1.y);
  auto coord = [use_x](const Coordinate& c) { return use_x ? c.x : c.y; };
  double lo1 = std::min(coord(p1), coord(q1)), hi1 = std::max(coord(p1), coord(q1));
  double lo2 = std::min(coord(p2), coord(q2)), hi2 = std::max(coord(p2), coord(q2));
  double lo = std::max(lo1, lo2);
  double hi = std::min(hi1, hi2);
  if (lo >= hi) return std::nullopt;
  double d = coord(q1) - coord(p1);
  double t0 = (lo - coord(p1)) / d;
  double t1 = (hi - coord(p1)) / d;
  if (t0 > t1) std::swap(t0, t1);
  return std::make_pair(std::max(0.0, t0), std::min(1.0, t1));
}

Location locate_in_ring(const Coordinate& p, const std::vector<Coordinate>& ring) {
  bool inside = false;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const Coordinate& a = ring[i];
    const Coordinate& b = ring[i + 1];
    if (on_segment(p, a, b)) return Location::Boundary;
    // Crossing-number over the half-open vertical span of each edge; the
    // orientation sign decides which side the ray passes.
    if (a.y <= p.y ? b.y > p.y : b.y <= p.y) {
      int o = orient(a, b, p);
      if (b.y > a.y ? o > 0 : o < 0) inside = !inside;
    }
  }
  return inside ? Location::Inside : Location::Outside;
}

Location locate_in_polygon(const Coordinate& p, const PolygonShape& shape) {
  Location ext = locate_in_ring(p, shape.exterior);
  if (ext != Location::Inside) return ext;
  for (const auto& hole : shape.holes) {
    Location h = locate_in_ring(p, hole);
    if (h == Location::Boundary) return Location::Boundary;
    if (h == Location::Inside) return Location::Outside;
  }
  return Location::Inside;
}

Location locate_in_area(const Coordinate& p, const std::vector<PolygonShape>& shapes) {
  bool boundary = false;
  for (const auto& shape : shapes) {
    Location loc = locate_in_polygon(p, shape);
    if (loc == Location::Inside) return Location::Inside;
    if (loc == Location::Boundary) boundary = true;
  }
  return boundary ? Location::Boundary : Location::Outside;
}

int ring_orientation(const std::vector<Coordinate>& ring) {
  if (ring.size() < 4) return 0;
  // Work on the open ring (drop the closing duplicate).
  std::size_t n = ring.size() - 1;
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (ring[i].y < ring[best].y || (ring[i].y == ring[best].y && ring[i].x > ring[best].x))
      best = i;
  }
  const Coordinate& prev = ring[(best + n - 1) % n];
  const Coordinate& curr = ring[best];
  const Coordinate& next = ring[(best + 1) % n];
  int o = orient(prev, curr, next);
  if (o != 0) return o;
  // Degenerate corner (collinear or spike): fall back to the shoelace sign.
  double twice_area = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Coordinate& a = ring[i];
    const Coordinate& b = ring[i + 1];
    twice_area += a.x * b.y - b.x * a.y;
  }
  return sign_of(twice_area);
}

}  // namespace pred
}  // namespace geol
