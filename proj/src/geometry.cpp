#include "urbanscope/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "urbanscope/error.hpp"

namespace urbanscope {

double PointSet::total_weight() const {
  double s = 0.0;
  for (const auto& p : points) s += p.weight;
  return s;
}

BBox bounding_box(const PointSet& points) {
  if (points.empty()) throw InvalidInput("bounding_box: empty point set");
  BBox b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : points.points) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

Point GridSpec::center(CellIndex i) const {
  const Cell c = cell(i);
  return {origin_x + (static_cast<double>(c.col) + 0.5) * cell_size,
          origin_y + (static_cast<double>(c.row) + 0.5) * cell_size, 1.0};
}

void validate(const GridSpec& g) {
  if (!(g.cell_size > 0.0) || !std::isfinite(g.cell_size))
    throw InvalidInput("grid: cell_size must be positive");
  if (g.n_cols == 0 || g.n_rows == 0) throw InvalidInput("grid: needs at least one cell");
  if (!std::isfinite(g.origin_x) || !std::isfinite(g.origin_y))
    throw InvalidInput("grid: origin must be finite");
}

GridSpec build_grid(const BBox& bbox, double cell_size) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size))
    throw InvalidInput("build_grid: cell_size must be positive");
  if (!(bbox.max_x > bbox.min_x) || !(bbox.max_y > bbox.min_y))
    throw InvalidInput("build_grid: degenerate bounding box");
  if (!std::isfinite(bbox.min_x) || !std::isfinite(bbox.max_x) || !std::isfinite(bbox.min_y) ||
      !std::isfinite(bbox.max_y))
    throw InvalidInput("build_grid: bounding box must be finite");
  GridSpec g;
  g.origin_x = bbox.min_x;
  g.origin_y = bbox.min_y;
  g.cell_size = cell_size;
  g.n_cols = static_cast<std::size_t>(std::ceil((bbox.max_x - bbox.min_x) / cell_size));
  g.n_rows = static_cast<std::size_t>(std::ceil((bbox.max_y - bbox.min_y) / cell_size));
  return g;
}

std::optional<CellIndex> point_to_cell(const Point& p, const GridSpec& g) {
  if (!(p.x >= g.origin_x) || !(p.y >= g.origin_y)) return std::nullopt;
  if (p.x > g.max_x() || p.y > g.max_y()) return std::nullopt;
  auto col = static_cast<std::size_t>(std::floor((p.x - g.origin_x) / g.cell_size));
  auto row = static_cast<std::size_t>(std::floor((p.y - g.origin_y) / g.cell_size));
  col = std::min(col, g.n_cols - 1);
  row = std::min(row, g.n_rows - 1);
  return g.index(row, col);
}

namespace {

double signed_area(const Ring& r) {
  double a = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) a += r[i].x * r[i + 1].y - r[i + 1].x * r[i].y;
  return 0.5 * a;
}

Ring normalize_ring(Ring r, const char* what) {
  for (const auto& p : r)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw InvalidInput(std::string("polygon: non-finite coordinate in ") + what);
  if (r.size() >= 2 && r.front().x == r.back().x && r.front().y == r.back().y) r.pop_back();
  if (r.size() < 3) throw InvalidInput(std::string("polygon: ") + what + " needs at least 3 vertices");
  r.push_back(r.front());
  if (signed_area(r) == 0.0) throw InvalidInput(std::string("polygon: ") + what + " has zero area");
  return r;
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
  const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  const double scale = std::max({std::abs(b.x - a.x), std::abs(b.y - a.y), 1.0});
  if (std::abs(cross) > 1e-12 * scale * scale) return false;
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
         p.y <= std::max(a.y, b.y);
}

bool on_boundary(const Point& p, const Ring& r) {
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    if (on_segment(p, r[i], r[i + 1])) return true;
  return false;
}

// Number of ring edges crossed by a ray from p towards +x.
int crossings(const Point& p, const Ring& r) {
  int n = 0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const Point& a = r[i];
    const Point& b = r[i + 1];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) ++n;
    }
  }
  return n;
}

}  // namespace

Polygon::Polygon(Ring outer, std::vector<Ring> holes) : outer_(normalize_ring(std::move(outer), "outer ring")) {
  holes_.reserve(holes.size());
  for (auto& h : holes) holes_.push_back(normalize_ring(std::move(h), "hole"));
  bbox_ = {outer_[0].x, outer_[0].y, outer_[0].x, outer_[0].y};
  for (const auto& p : outer_) {
    bbox_.min_x = std::min(bbox_.min_x, p.x);
    bbox_.min_y = std::min(bbox_.min_y, p.y);
    bbox_.max_x = std::max(bbox_.max_x, p.x);
    bbox_.max_y = std::max(bbox_.max_y, p.y);
  }
  if (area() == 0.0) throw InvalidInput("polygon: zero area");
}

double Polygon::area() const {
  double a = std::abs(signed_area(outer_));
  for (const auto& h : holes_) a -= std::abs(signed_area(h));
  return a;
}

bool point_in_polygon(const Point& p, const Polygon& poly) {
  const BBox& b = poly.bbox();
  if (p.x < b.min_x || p.x > b.max_x || p.y < b.min_y || p.y > b.max_y) return false;
  if (on_boundary(p, poly.outer())) return true;
  for (const auto& h : poly.holes())
    if (on_boundary(p, h)) return true;
  int n = crossings(p, poly.outer());
  for (const auto& h : poly.holes()) n += crossings(p, h);
  return (n % 2) == 1;
}

ZoneMap::ZoneMap(std::vector<Zone> zones) : zones_(std::move(zones)) {
  for (std::size_t i = 0; i < zones_.size(); ++i) {
    const auto& z = zones_[i];
    if (z.attributes.stratum && (*z.attributes.stratum < 1 || *z.attributes.stratum > 6))
      throw InvalidInput("zone '" + z.id + "': stratum must be in 1..6");
    if (z.attributes.population && !(*z.attributes.population >= 0.0))
      throw InvalidInput("zone '" + z.id + "': population must be non-negative");
    for (std::size_t j = 0; j < i; ++j)
      if (zones_[j].id == z.id) throw InvalidInput("duplicate zone id '" + z.id + "'");
  }
}

std::optional<std::size_t> ZoneMap::find(const std::string& id) const {
  for (std::size_t i = 0; i < zones_.size(); ++i)
    if (zones_[i].id == id) return i;
  return std::nullopt;
}

ZoneAssignment assign_zones(const std::vector<Point>& points, const ZoneMap& zones) {
  ZoneAssignment out;
  out.zone.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t hits = 0;
    for (std::size_t z = 0; z < zones.size(); ++z) {
      if (!point_in_polygon(points[i], zones[z].polygon)) continue;
      if (hits++ == 0) out.zone[i] = z;
      else break;
    }
    if (hits == 0) ++out.unmatched;
    if (hits > 1) ++out.overlapping;
  }
  return out;
}

ZoneAssignment assign_zones(const PointSet& points, const ZoneMap& zones) {
  return assign_zones(points.points, zones);
}

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double distance_to_nearest(const Point& p, const std::vector<Point>& centers) {
  if (centers.empty()) throw InvalidInput("distance_to_nearest: no centers");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : centers) best = std::min(best, distance(p, c));
  return best;
}

}  // namespace urbanscope
