#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace urbanscope {

// Planar location in metres. `weight` is a multiplicity (firms at the spot).
struct Point {
  double x = 0.0;
  double y = 0.0;
  double weight = 1.0;
};

// Firm or detection locations. `industry` is either empty or parallel to
// `points` and holds the industry code of each record.
struct PointSet {
  std::vector<Point> points;
  std::vector<std::string> industry;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_industry() const { return !industry.empty(); }
  double total_weight() const;
};

struct BBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;
};

// Smallest box containing all points. Throws InvalidInput on an empty set.
BBox bounding_box(const PointSet& points);

using CellIndex = std::size_t;

struct Cell {
  std::size_t row = 0;
  std::size_t col = 0;
  bool operator==(const Cell&) const = default;
};

// Regular lattice of square cells. Row 0 is the southernmost row; cell
// indices run row-major: index = row * n_cols + col.
struct GridSpec {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cell_size = 200.0;
  std::size_t n_cols = 1;
  std::size_t n_rows = 1;

  std::size_t n_cells() const { return n_cols * n_rows; }
  CellIndex index(std::size_t row, std::size_t col) const { return row * n_cols + col; }
  CellIndex index(Cell c) const { return index(c.row, c.col); }
  Cell cell(CellIndex i) const { return {i / n_cols, i % n_cols}; }
  Point center(CellIndex i) const;
  double max_x() const { return origin_x + cell_size * static_cast<double>(n_cols); }
  double max_y() const { return origin_y + cell_size * static_cast<double>(n_rows); }

  bool operator==(const GridSpec&) const = default;
};

void validate(const GridSpec& g);

// n_cols = ceil(width / cell_size), n_rows likewise; origin at (min_x, min_y).
GridSpec build_grid(const BBox& bbox, double cell_size = 200.0);

// Half-open cells [x0, x0 + s) x [y0, y0 + s). Points lying exactly on the
// grid's far east or north edge belong to the last column or row, so a grid
// from build_grid covers its closed bounding box.
std::optional<CellIndex> point_to_cell(const Point& p, const GridSpec& g);

using Ring = std::vector<Point>;

// Outer ring plus holes. Rings are stored closed (first == last).
class Polygon {
public:
  Polygon() = default;
  Polygon(Ring outer, std::vector<Ring> holes = {});

  const Ring& outer() const { return outer_; }
  const std::vector<Ring>& holes() const { return holes_; }
  const BBox& bbox() const { return bbox_; }
  // Outer area minus hole areas.
  double area() const;

private:
  Ring outer_;
  std::vector<Ring> holes_;
  BBox bbox_;
};

// Even-odd rule over the outer ring and all holes. Points on any ring
// boundary count as inside.
bool point_in_polygon(const Point& p, const Polygon& poly);

enum class LandUse { CommercialMixed, Other };

struct ZoneAttributes {
  std::optional<int> stratum;  // 1..6
  LandUse land_use = LandUse::Other;
  std::optional<double> population;
  std::string comuna_id;
};

struct Zone {
  std::string id;
  Polygon polygon;
  ZoneAttributes attributes;
};

class ZoneMap {
public:
  ZoneMap() = default;
  explicit ZoneMap(std::vector<Zone> zones);

  const std::vector<Zone>& zones() const { return zones_; }
  std::size_t size() const { return zones_.size(); }
  bool empty() const { return zones_.empty(); }
  const Zone& operator[](std::size_t i) const { return zones_[i]; }
  std::optional<std::size_t> find(const std::string& id) const;

private:
  std::vector<Zone> zones_;
};

struct ZoneAssignment {
  std::vector<std::optional<std::size_t>> zone;  // index into ZoneMap, per point
  std::size_t unmatched = 0;
  std::size_t overlapping = 0;  // points contained in more than one zone
};

// First containing zone in map order wins.
ZoneAssignment assign_zones(const std::vector<Point>& points, const ZoneMap& zones);
ZoneAssignment assign_zones(const PointSet& points, const ZoneMap& zones);

double distance(const Point& a, const Point& b);

// Distance to the nearest of `centers`; requires at least one center.
double distance_to_nearest(const Point& p, const std::vector<Point>& centers);

}  // namespace urbanscope
