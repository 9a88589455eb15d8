#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "geol/geometry.hpp"
#include "geol/topology.hpp"
#include "support/mock_sparql.hpp"

namespace geoltest {

/// Random OGC-valid geometries with integer coordinates in [0, max]^2:
/// points, multipoints, linestrings (self-crossings allowed — still valid),
/// multilinestrings, convex polygons with occasional holes, and disjoint
/// multipolygons.
class GeometryGenerator {
 public:
  explicit GeometryGenerator(std::uint64_t seed, int max_coord = 16)
      : rng_(seed), max_(max_coord) {}

  geol::Geometry next();
  geol::Geometry next_point();
  geol::Geometry next_multipoint();
  geol::Geometry next_linestring();
  geol::Geometry next_multilinestring();
  geol::Geometry next_polygon();
  geol::Geometry next_multipolygon();

  std::mt19937_64& rng() { return rng_; }

 private:
  int rand_coord(int lo, int hi);
  std::vector<geol::Coordinate> convex_hull_points(int lo_x, int hi_x, int lo_y, int hi_y,
                                                   int count);

  std::mt19937_64 rng_;
  int max_;
};

std::string square_wkt(double x, double y, double size);
std::string bowtie_wkt(double x, double y, double size);

/// N grid cells at spacing 2 (unit squares, pairwise disjoint, no touching),
/// with `bowties` of them replaced by invalid self-intersecting rings at
/// deterministically shuffled positions.
struct GridFixture {
  std::vector<MockSparqlEndpoint::Row> rows;
  std::vector<std::size_t> bowtie_positions;  // sorted
};
GridFixture make_grid_fixture(std::size_t n, std::size_t bowties, std::uint64_t seed);

}  // namespace geoltest
