#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "urbanscope/geometry.hpp"

namespace urbanscope {

struct StreetNode {
  std::int64_t id = 0;
  double x = 0.0;
  double y = 0.0;
};

struct StreetEdge {
  std::size_t from = 0;  // node indices
  std::size_t to = 0;
  std::vector<Point> polyline;  // from-node ... to-node
  double length = 0.0;          // arc length of the polyline
};

class StreetNetwork {
public:
  StreetNetwork() = default;
  StreetNetwork(std::vector<StreetNode> nodes, std::vector<StreetEdge> edges);

  const std::vector<StreetNode>& nodes() const { return nodes_; }
  const std::vector<StreetEdge>& edges() const { return edges_; }

  // Adds an edge between node indices; an empty polyline means a straight
  // segment. Length is computed from the geometry.
  void add_edge(std::size_t from, std::size_t to, std::vector<Point> polyline = {});

private:
  std::vector<StreetNode> nodes_;
  std::vector<StreetEdge> edges_;
};

double polyline_length(const std::vector<Point>& line);
Point point_along(const std::vector<Point>& line, double arc);

struct SamplePoint {
  Point location;
  bool crossing = false;
  std::optional<std::size_t> edge;     // interior points: owning edge
  std::optional<std::int64_t> node;    // crossings: node id
  double arc = 0.0;                    // position along the edge
};

// Interior points per edge = max{k >= 0 : L / (k + 1) >= spacing}, spread
// evenly at L / (k + 1). Every node appears once as a crossing.
std::size_t interior_point_count(double length, double spacing);
std::vector<SamplePoint> plan_sample_points(const StreetNetwork& net, double spacing = 20.0);

struct DetectorEval {
  std::vector<std::int64_t> truth;      // c_i
  std::vector<std::int64_t> predicted;  // ĉ_i
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

struct CountMetrics {
  std::optional<double> c_f;    // mean ĉ/c over images with c > 0
  std::optional<double> err_0;  // mean ĉ over images with c = 0
  std::size_t n_r = 0;
  std::size_t n_nr = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

CountMetrics count_metrics(const DetectorEval& e);

enum class RegionCenters { BoundingBox, DataPoints };

struct OmissionOptions {
  double keep_prob = 0.9;
  std::size_t n_regions = 1000;
  double radius_min = 500.0;
  double radius_max = 1500.0;
  std::uint64_t seed = 1;
  RegionCenters centers = RegionCenters::BoundingBox;
  unsigned workers = 1;
};

struct OmissionResult {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over regions
  std::vector<double> samples;
};

// Thins every unit of point weight independently with keep_prob, then draws
// random disks and records detected / true counts inside each. Disks holding
// no true firm are redrawn.
OmissionResult omission_robustness(const PointSet& points, const OmissionOptions& opts);

}  // namespace urbanscope
