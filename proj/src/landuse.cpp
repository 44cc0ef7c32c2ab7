#include "urbanscope/landuse.hpp"

#include "urbanscope/error.hpp"

namespace urbanscope {

namespace {

std::vector<bool> on_commercial_land(const PointSet& firms, const ZoneMap& landuse_zones) {
  const auto a = assign_zones(firms, landuse_zones);
  std::vector<bool> out(firms.size(), false);
  for (std::size_t i = 0; i < firms.size(); ++i)
    out[i] = a.zone[i] && landuse_zones[*a.zone[i]].attributes.land_use == LandUse::CommercialMixed;
  return out;
}

std::optional<int> stratum_of(const Point& p, const ZoneMap& zones) {
  for (const auto& z : zones.zones())
    if (z.attributes.stratum && point_in_polygon(p, z.polygon)) return z.attributes.stratum;
  return std::nullopt;
}

void finish(AdherenceRow& r) {
  if (r.firms > 0.0) r.rate = 1.0 - r.on_commercial / r.firms;
}

}  // namespace

StratumAdherence nonadherence_by_stratum(const PointSet& firms, const ZoneMap& strata_zones,
                                         const ZoneMap& landuse_zones) {
  const auto commercial = on_commercial_land(firms, landuse_zones);
  StratumAdherence out;
  for (std::size_t i = 0; i < firms.size(); ++i) {
    const auto& p = firms.points[i];
    const auto s = stratum_of(p, strata_zones);
    AdherenceRow& row = s ? out.strata[*s - 1] : out.unzoned;
    row.firms += p.weight;
    if (commercial[i]) row.on_commercial += p.weight;
    if (s) {
      out.total.firms += p.weight;
      if (commercial[i]) out.total.on_commercial += p.weight;
    }
  }
  for (auto& r : out.strata) finish(r);
  finish(out.unzoned);
  finish(out.total);
  return out;
}

StratumAdherence nonadherence_by_stratum(const PointSet& firms, const ZoneMap& zones) {
  return nonadherence_by_stratum(firms, zones, zones);
}

RadialProfile nonadherence_vs_distance(const PointSet& firms, const ZoneMap& landuse_zones,
                                       const std::vector<Point>& centers, double bin_width, double max_dist) {
  if (centers.empty()) throw InvalidInput("nonadherence_vs_distance: at least one center required");
  RadialProfile p = make_bins(bin_width, max_dist);
  const auto commercial = on_commercial_land(firms, landuse_zones);
  std::vector<double> off(p.n_bins(), 0.0);
  for (std::size_t i = 0; i < firms.size(); ++i) {
    const auto& pt = firms.points[i];
    const auto k = bin_of(p, distance_to_nearest(pt, centers));
    if (!k) continue;
    p.support[*k] += pt.weight;
    if (!commercial[i]) off[*k] += pt.weight;
  }
  for (std::size_t k = 0; k < p.n_bins(); ++k)
    if (p.support[k] > 0.0) p.mean[k] = off[k] / p.support[k];
  return p;
}

}  // namespace urbanscope
