#include <doctest.h>

#include "urbanscope/error.hpp"
#include "urbanscope/geometry.hpp"
#include "urbanscope/random.hpp"

using namespace urbanscope;

TEST_CASE("build_grid dimensions follow ceil of extent over cell size") {
  auto g = build_grid({0, 0, 1000, 600}, 200);
  CHECK(g.n_cols == 5);
  CHECK(g.n_rows == 3);

  g = build_grid({0, 0, 1000, 610}, 200);
  CHECK(g.n_cols == 5);
  CHECK(g.n_rows == 4);

  g = build_grid({0, 0, 200, 200}, 200);
  CHECK(g.n_cols == 1);
  CHECK(g.n_rows == 1);
}

TEST_CASE("build_grid rejects degenerate input") {
  CHECK_THROWS_AS(build_grid({0, 0, 0, 100}, 200), InvalidInput);
  CHECK_THROWS_AS(build_grid({0, 0, 100, -1}, 200), InvalidInput);
  CHECK_THROWS_AS(build_grid({0, 0, 100, 100}, 0), InvalidInput);
}

TEST_CASE("point_to_cell uses half-open cells") {
  const auto g = build_grid({0, 0, 1000, 600}, 200);
  REQUIRE(point_to_cell({10, 10}, g));
  CHECK(g.cell(*point_to_cell({10, 10}, g)) == Cell{0, 0});
  CHECK(g.cell(*point_to_cell({200, 0}, g)) == Cell{0, 1});
  CHECK_FALSE(point_to_cell({-5, 0}, g));
  CHECK_FALSE(point_to_cell({1000.5, 10}, g));
  // The far edge of the grid belongs to the last cell.
  CHECK(g.cell(*point_to_cell({1000, 600}, g)) == Cell{2, 4});
}

TEST_CASE("point_to_cell is total on the bounding box") {
  Rng rng(7);
  const BBox box{-3210.5, 127.25, 8123.0, 6400.0};
  const auto g = build_grid(box, 200);
  for (int i = 0; i < 10000; ++i) {
    const Point p{rng.uniform(box.min_x, box.max_x), rng.uniform(box.min_y, box.max_y)};
    REQUIRE(point_to_cell(p, g));
  }
  CHECK(point_to_cell({box.max_x, box.max_y}, g));
  CHECK(point_to_cell({box.min_x, box.min_y}, g));
}

TEST_CASE("point_in_polygon on squares and holes") {
  const Polygon unit({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(point_in_polygon({0.5, 0.5}, unit));
  CHECK_FALSE(point_in_polygon({2, 0.5}, unit));
  CHECK(point_in_polygon({1, 0.5}, unit));  // edge counts as inside
  CHECK(point_in_polygon({0, 0}, unit));    // vertex too

  // Ray from (5,5) towards +x crosses the hole's east edge at x=6 and the
  // outer east edge at x=10: two crossings, even, so outside.
  const Polygon holed({{0, 0}, {10, 0}, {10, 10}, {0, 10}}, {{{4, 4}, {6, 4}, {6, 6}, {4, 6}}});
  CHECK_FALSE(point_in_polygon({5, 5}, holed));
  CHECK(point_in_polygon({2, 5}, holed));
  CHECK(point_in_polygon({8, 5}, holed));
  CHECK(holed.area() == doctest::Approx(96.0));
}

TEST_CASE("point_in_polygon agrees with analytic rectangle containment") {
  Rng rng(11);
  const double x0 = -3.5, y0 = 2.0, x1 = 7.25, y1 = 4.5;
  const Polygon rect({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
  for (int i = 0; i < 1000; ++i) {
    const Point p{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const bool expected = p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    REQUIRE(point_in_polygon(p, rect) == expected);
  }
}

TEST_CASE("point_in_polygon handles concave shapes") {
  // U shape opening north; the notch spans x in (2,4), y in (2,6).
  const Polygon u({{0, 0}, {6, 0}, {6, 6}, {4, 6}, {4, 2}, {2, 2}, {2, 6}, {0, 6}});
  CHECK(point_in_polygon({1, 5}, u));
  CHECK(point_in_polygon({5, 5}, u));
  CHECK_FALSE(point_in_polygon({3, 5}, u));
  CHECK(point_in_polygon({3, 1}, u));
}

TEST_CASE("polygon validation") {
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}}), InvalidInput);
  CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {2, 2}}), InvalidInput);
  const Polygon closed({{0, 0}, {1, 0}, {1, 1}, {0, 0}});
  CHECK(closed.outer().size() == 4);
  CHECK(closed.outer().front().x == closed.outer().back().x);
}

namespace {
Zone square_zone(const std::string& id, double x0, double y0, double size) {
  Zone z;
  z.id = id;
  z.polygon = Polygon({{x0, y0}, {x0 + size, y0}, {x0 + size, y0 + size}, {x0, y0 + size}});
  return z;
}
}  // namespace

TEST_CASE("assign_zones: first zone in order wins and overlaps are counted") {
  const ZoneMap zones({square_zone("a", 0, 0, 10), square_zone("b", 5, 5, 10), square_zone("c", 30, 30, 1)});
  PointSet pts;
  pts.points = {{1, 1}, {7, 7}, {12, 12}, {100, 100}};
  const auto a = assign_zones(pts, zones);
  REQUIRE(a.zone.size() == 4);
  CHECK(*a.zone[0] == 0);
  CHECK(*a.zone[1] == 0);  // in both a and b
  CHECK(*a.zone[2] == 1);
  CHECK_FALSE(a.zone[3]);
  CHECK(a.unmatched == 1);
  CHECK(a.overlapping == 1);

  const auto again = assign_zones(pts, zones);
  CHECK(again.zone == a.zone);
}

TEST_CASE("zone map validation") {
  auto z = square_zone("a", 0, 0, 1);
  z.attributes.stratum = 7;
  CHECK_THROWS_AS(ZoneMap({z}), InvalidInput);
  CHECK_THROWS_AS(ZoneMap({square_zone("a", 0, 0, 1), square_zone("a", 2, 2, 1)}), InvalidInput);
}
