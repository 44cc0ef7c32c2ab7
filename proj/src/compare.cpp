#include "urbanscope/compare.hpp"

#include <cmath>

#include "urbanscope/error.hpp"

namespace urbanscope {

GridField delta_density(const GridField& a, const GridField& b) {
  if (!(a.grid == b.grid)) throw InvalidInput("delta_density: fields are on different grids");
  if (a.kind != FieldKind::Density || b.kind != FieldKind::Density)
    throw InvalidInput("delta_density: both fields must be densities");
  GridField out(a.grid, FieldKind::Delta);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] - b.values[i];
  return out;
}

std::optional<std::size_t> RadialProfile::argmax() const {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < mean.size(); ++k)
    if (mean[k] && (!best || *mean[k] > *mean[*best])) best = k;
  return best;
}

RadialProfile make_bins(double bin_width, double max_dist) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) throw InvalidInput("radial profile: bin width must be positive");
  if (!(max_dist > 0.0) || !std::isfinite(max_dist)) throw InvalidInput("radial profile: max distance must be positive");
  const auto n = static_cast<std::size_t>(std::ceil(max_dist / bin_width - 1e-9));
  RadialProfile p;
  p.edges.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) p.edges[k] = bin_width * static_cast<double>(k);
  p.mean.assign(n, std::nullopt);
  p.support.assign(n, 0.0);
  return p;
}

std::optional<std::size_t> bin_of(const RadialProfile& p, double dist) {
  if (p.edges.size() < 2 || dist < 0.0 || !(dist < p.edges.back())) return std::nullopt;
  const double width = p.edges[1] - p.edges[0];
  auto k = static_cast<std::size_t>(std::floor(dist / width));
  if (k >= p.n_bins()) k = p.n_bins() - 1;
  return k;
}

RadialProfile radial_profile(const GridField& f, const std::vector<Point>& centers, double bin_width,
                             double max_dist) {
  if (centers.empty()) throw InvalidInput("radial_profile: at least one center required");
  RadialProfile p = make_bins(bin_width, max_dist);
  std::vector<double> sums(p.n_bins(), 0.0);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const auto k = bin_of(p, distance_to_nearest(f.grid.center(i), centers));
    if (!k) continue;
    sums[*k] += f.values[i];
    p.support[*k] += 1.0;
  }
  for (std::size_t k = 0; k < p.n_bins(); ++k)
    if (p.support[k] > 0.0) p.mean[k] = sums[k] / p.support[k];
  return p;
}

std::vector<ZoneMean> zone_mean(const GridField& f, const ZoneMap& zones) {
  std::vector<Point> centers(f.values.size());
  for (std::size_t i = 0; i < centers.size(); ++i) centers[i] = f.grid.center(i);
  const auto assignment = assign_zones(centers, zones);
  std::vector<double> sums(zones.size(), 0.0);
  std::vector<ZoneMean> out(zones.size());
  for (std::size_t z = 0; z < zones.size(); ++z) out[z].zone_id = zones[z].id;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (!assignment.zone[i]) continue;
    sums[*assignment.zone[i]] += f.values[i];
    ++out[*assignment.zone[i]].n_cells;
  }
  for (std::size_t z = 0; z < zones.size(); ++z)
    if (out[z].n_cells > 0) out[z].mean = sums[z] / static_cast<double>(out[z].n_cells);
  return out;
}

}  // namespace urbanscope
