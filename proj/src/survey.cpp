#include "urbanscope/survey.hpp"

#include <algorithm>
#include <cmath>

#include "urbanscope/error.hpp"
#include "urbanscope/parallel.hpp"
#include "urbanscope/random.hpp"

namespace urbanscope {

double polyline_length(const std::vector<Point>& line) {
  double len = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) len += distance(line[i - 1], line[i]);
  return len;
}

Point point_along(const std::vector<Point>& line, double arc) {
  if (line.empty()) throw InvalidInput("point_along: empty polyline");
  double walked = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    const double seg = distance(line[i - 1], line[i]);
    if (seg > 0.0 && walked + seg >= arc) {
      const double t = std::clamp((arc - walked) / seg, 0.0, 1.0);
      return {line[i - 1].x + t * (line[i].x - line[i - 1].x), line[i - 1].y + t * (line[i].y - line[i - 1].y), 1.0};
    }
    walked += seg;
  }
  return {line.back().x, line.back().y, 1.0};
}

StreetNetwork::StreetNetwork(std::vector<StreetNode> nodes, std::vector<StreetEdge> edges)
    : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (nodes_[i].id == nodes_[j].id) throw InvalidInput("street network: duplicate node id " + std::to_string(nodes_[i].id));
  for (auto& e : edges) {
    const double stated = e.length;
    add_edge(e.from, e.to, std::move(e.polyline));
    if (stated > 0.0 && std::abs(stated - edges_.back().length) > 1e-6)
      throw InvalidInput("street network: edge length disagrees with its geometry");
  }
}

void StreetNetwork::add_edge(std::size_t from, std::size_t to, std::vector<Point> polyline) {
  if (from >= nodes_.size() || to >= nodes_.size()) throw InvalidInput("street network: edge references unknown node");
  const Point a{nodes_[from].x, nodes_[from].y, 1.0};
  const Point b{nodes_[to].x, nodes_[to].y, 1.0};
  if (polyline.empty()) polyline = {a, b};
  if (polyline.size() < 2) throw InvalidInput("street network: polyline needs two vertices");
  if (distance(polyline.front(), a) > 1e-6 || distance(polyline.back(), b) > 1e-6)
    throw InvalidInput("street network: polyline must start and end at its nodes");
  StreetEdge e{from, to, std::move(polyline), 0.0};
  e.length = polyline_length(e.polyline);
  if (!(e.length > 0.0)) throw InvalidInput("street network: zero-length edge");
  edges_.push_back(std::move(e));
}

std::size_t interior_point_count(double length, double spacing) {
  if (!(spacing > 0.0)) throw InvalidInput("sample points: spacing must be positive");
  if (length < spacing) return 0;
  auto k = static_cast<std::size_t>(std::floor(length / spacing));
  k = k > 0 ? k - 1 : 0;
  while (k > 0 && length / static_cast<double>(k + 1) < spacing) --k;
  while (length / static_cast<double>(k + 2) >= spacing) ++k;
  return k;
}

std::vector<SamplePoint> plan_sample_points(const StreetNetwork& net, double spacing) {
  if (!(spacing > 0.0)) throw InvalidInput("sample points: spacing must be positive");
  std::vector<SamplePoint> out;
  for (const auto& n : net.nodes()) {
    SamplePoint s;
    s.location = {n.x, n.y, 1.0};
    s.crossing = true;
    s.node = n.id;
    out.push_back(s);
  }
  for (std::size_t e = 0; e < net.edges().size(); ++e) {
    const auto& edge = net.edges()[e];
    const std::size_t k = interior_point_count(edge.length, spacing);
    const double step = edge.length / static_cast<double>(k + 1);
    for (std::size_t j = 1; j <= k; ++j) {
      SamplePoint s;
      s.arc = step * static_cast<double>(j);
      s.location = point_along(edge.polyline, s.arc);
      s.edge = e;
      out.push_back(s);
    }
  }
  return out;
}

CountMetrics count_metrics(const DetectorEval& e) {
  if (e.truth.size() != e.predicted.size()) throw InvalidInput("count_metrics: truth and predictions differ in length");
  CountMetrics m;
  double ratio_sum = 0.0;
  double false_sum = 0.0;
  for (std::size_t i = 0; i < e.truth.size(); ++i) {
    if (e.truth[i] < 0 || e.predicted[i] < 0) throw InvalidInput("count_metrics: counts must be non-negative");
    if (e.truth[i] > 0) {
      ++m.n_r;
      ratio_sum += static_cast<double>(e.predicted[i]) / static_cast<double>(e.truth[i]);
    } else {
      ++m.n_nr;
      false_sum += static_cast<double>(e.predicted[i]);
    }
  }
  if (m.n_r > 0) m.c_f = ratio_sum / static_cast<double>(m.n_r);
  if (m.n_nr > 0) m.err_0 = false_sum / static_cast<double>(m.n_nr);
  m.precision = e.precision;
  m.recall = e.recall;
  m.f1 = e.f1;
  return m;
}

OmissionResult omission_robustness(const PointSet& points, const OmissionOptions& opts) {
  if (!(opts.keep_prob > 0.0) || opts.keep_prob > 1.0) throw InvalidInput("robustness: keep_prob must be in (0, 1]");
  if (opts.n_regions == 0) throw InvalidInput("robustness: at least one region required");
  if (!(opts.radius_min >= 0.0) || !(opts.radius_max > opts.radius_min))
    throw InvalidInput("robustness: radius range must satisfy 0 <= min < max");
  if (points.empty()) throw InvalidInput("robustness: empty point set");

  std::vector<double> truth(points.size());
  std::vector<double> detected(points.size());
  {
    Rng rng(derive_seed(opts.seed, 0x7468696e /* "thin" */));
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double w = points.points[i].weight;
      if (!(w >= 0.0)) throw InvalidInput("robustness: point weights must be non-negative");
      const auto units = static_cast<std::int64_t>(std::llround(w));
      truth[i] = static_cast<double>(units);
      std::int64_t kept = 0;
      for (std::int64_t u = 0; u < units; ++u)
        if (rng.bernoulli(opts.keep_prob)) ++kept;
      detected[i] = static_cast<double>(kept);
    }
  }
  const BBox box = bounding_box(points);

  OmissionResult out;
  out.samples.resize(opts.n_regions);
  parallel_for(opts.n_regions, opts.workers, [&](std::size_t r) {
    Rng rng(derive_seed(opts.seed, 0x72656769 /* "regi" */, r));
    for (int attempt = 0; attempt < 100000; ++attempt) {
      Point c;
      if (opts.centers == RegionCenters::BoundingBox) {
        c = {rng.uniform(box.min_x, box.max_x), rng.uniform(box.min_y, box.max_y), 1.0};
      } else {
        c = points.points[rng.below(points.size())];
      }
      const double radius = rng.uniform(opts.radius_min, opts.radius_max);
      const double r2 = radius * radius;
      double t = 0.0, d = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double dx = points.points[i].x - c.x;
        const double dy = points.points[i].y - c.y;
        if (dx * dx + dy * dy <= r2) {
          t += truth[i];
          d += detected[i];
        }
      }
      if (t > 0.0) {
        out.samples[r] = d / t;
        return;
      }
    }
    throw InvalidInput("robustness: could not draw a region containing firms");
  });

  double s = 0.0;
  for (double v : out.samples) s += v;
  out.mean = s / static_cast<double>(out.samples.size());
  double ss = 0.0;
  for (double v : out.samples) ss += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(out.samples.size()));
  return out;
}

}  // namespace urbanscope
