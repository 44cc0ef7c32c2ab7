#pragma once

#include <optional>
#include <vector>

#include "urbanscope/compare.hpp"
#include "urbanscope/geometry.hpp"

namespace urbanscope {

struct AdherenceRow {
  double firms = 0.0;         // |C_s|, summed point weight
  double on_commercial = 0.0; // |C_s ∩ C_A|
  std::optional<double> rate; // 1 - on_commercial / firms; empty when firms == 0
};

struct StratumAdherence {
  AdherenceRow strata[6];  // strata[s - 1]
  AdherenceRow unzoned;    // firms outside every stratum-bearing zone
  AdherenceRow total;      // all firms in stratum zones

  const AdherenceRow& stratum(int s) const { return strata[s - 1]; }
};

// Non-adherence A(s) = 1 - |C_s ∩ C_A| / |C_s|, where C_s are firms in
// stratum-s zones and C_A firms on commercial or mixed-use land. Strata come
// from the first containing zone of `strata_zones` that carries a stratum;
// land use from the first containing zone of `landuse_zones`.
StratumAdherence nonadherence_by_stratum(const PointSet& firms, const ZoneMap& strata_zones,
                                         const ZoneMap& landuse_zones);
StratumAdherence nonadherence_by_stratum(const PointSet& firms, const ZoneMap& zones);

// Fraction of firms (by weight) off commercial or mixed-use land, binned by
// distance to the nearest center.
RadialProfile nonadherence_vs_distance(const PointSet& firms, const ZoneMap& landuse_zones,
                                       const std::vector<Point>& centers, double bin_width = 250.0,
                                       double max_dist = 10000.0);

}  // namespace urbanscope
