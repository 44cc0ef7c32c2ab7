#pragma once

#include <optional>
#include <string>
#include <vector>

#include "urbanscope/density.hpp"
#include "urbanscope/geometry.hpp"

namespace urbanscope {

// Cellwise a - b of two densities on the same grid.
GridField delta_density(const GridField& a, const GridField& b);

// Mean value per distance bin. Bin k covers [k * width, (k + 1) * width);
// bins with no support have no mean.
struct RadialProfile {
  std::vector<double> edges;  // n_bins + 1 ascending edges
  std::vector<std::optional<double>> mean;
  std::vector<double> support;  // cells, or summed firm weight

  std::size_t n_bins() const { return mean.size(); }
  // Index of the bin with the largest mean, if any bin is defined.
  std::optional<std::size_t> argmax() const;
};

RadialProfile make_bins(double bin_width, double max_dist);
std::optional<std::size_t> bin_of(const RadialProfile& p, double dist);

// Cells are binned by the distance from their center to the nearest of
// `centers`; cells beyond max_dist are ignored.
RadialProfile radial_profile(const GridField& f, const std::vector<Point>& centers, double bin_width = 250.0,
                             double max_dist = 10000.0);

struct ZoneMean {
  std::string zone_id;
  std::optional<double> mean;  // empty when no cell center falls in the zone
  std::size_t n_cells = 0;
};

// Mean of f over the cells whose centers fall inside each zone (first
// containing zone wins).
std::vector<ZoneMean> zone_mean(const GridField& f, const ZoneMap& zones);

}  // namespace urbanscope
