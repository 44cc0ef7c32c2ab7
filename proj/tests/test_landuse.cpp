#include <doctest.h>

#include <cmath>

#include "urbanscope/error.hpp"
#include "urbanscope/landuse.hpp"
#include "urbanscope/random.hpp"

using namespace urbanscope;

namespace {

Zone rect(const std::string& id, double x0, double y0, double x1, double y1, std::optional<int> stratum,
          LandUse use) {
  Zone z;
  z.id = id;
  z.polygon = Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
  z.attributes.stratum = stratum;
  z.attributes.land_use = use;
  return z;
}

PointSet points_in(Rng& rng, std::size_t n, double x0, double y0, double x1, double y1) {
  PointSet p;
  for (std::size_t i = 0; i < n; ++i) p.points.push_back({rng.uniform(x0, x1), rng.uniform(y0, y1)});
  return p;
}

}  // namespace

TEST_CASE("non-adherence limiting cases") {
  Rng rng(1);
  const ZoneMap commercial({rect("a", 0, 0, 1000, 1000, 3, LandUse::CommercialMixed)});
  const ZoneMap other({rect("a", 0, 0, 1000, 1000, 3, LandUse::Other)});
  const auto firms = points_in(rng, 200, 1, 1, 999, 999);
  CHECK(*nonadherence_by_stratum(firms, commercial).stratum(3).rate == 0.0);
  CHECK(*nonadherence_by_stratum(firms, other).stratum(3).rate == 1.0);
  CHECK_FALSE(nonadherence_by_stratum(firms, other).stratum(2).rate);

  // Half of the stratum polygon is commercial, firms spread evenly.
  const ZoneMap strata({rect("s", 0, 0, 1000, 1000, 2, LandUse::Other)});
  const ZoneMap uses({rect("w", 0, 0, 500, 1000, std::nullopt, LandUse::CommercialMixed),
                      rect("e", 500, 0, 1000, 1000, std::nullopt, LandUse::Other)});
  PointSet grid;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) grid.points.push_back({25.0 + 50 * i, 25.0 + 50 * j});
  CHECK(*nonadherence_by_stratum(grid, strata, uses).stratum(2).rate == doctest::Approx(0.5));
}

TEST_CASE("non-adherence totals aggregate strata") {
  Rng rng(5);
  std::vector<Zone> zones;
  for (int s = 1; s <= 6; ++s)
    zones.push_back(rect("z" + std::to_string(s), 1000.0 * (s - 1), 0, 1000.0 * s, 1000, s,
                         s % 2 ? LandUse::CommercialMixed : LandUse::Other));
  zones.push_back(rect("mixed", 0, 1000, 6000, 2000, 4, LandUse::CommercialMixed));
  const ZoneMap map(zones);
  auto firms = points_in(rng, 3000, 0, 0, 6000, 2500);
  for (auto& p : firms.points) p.weight = 1.0 + static_cast<double>(rng.below(3));
  const auto r = nonadherence_by_stratum(firms, map);
  double firms_sum = 0.0, on_sum = 0.0;
  for (const auto& row : r.strata) {
    firms_sum += row.firms;
    on_sum += row.on_commercial;
  }
  CHECK(firms_sum == doctest::Approx(r.total.firms));
  CHECK(on_sum == doctest::Approx(r.total.on_commercial));
  CHECK(r.unzoned.firms > 0);
  CHECK(r.total.firms + r.unzoned.firms == doctest::Approx(firms.total_weight()));
  CHECK(*r.total.rate == doctest::Approx(1.0 - r.total.on_commercial / r.total.firms));
}

TEST_CASE("non-adherence vs distance picks up a commercial core") {
  // Commercial within a 2 km square around the center, other land outside.
  const ZoneMap uses({rect("core", 4000, 4000, 6000, 6000, std::nullopt, LandUse::CommercialMixed),
                      rect("rest", 0, 0, 10000, 10000, std::nullopt, LandUse::Other)});
  Rng rng(9);
  const auto firms = points_in(rng, 5000, 0, 0, 10000, 10000);
  const auto p = nonadherence_vs_distance(firms, uses, {{5000, 5000}}, 500.0, 7000.0);
  REQUIRE(p.mean[0]);
  CHECK(*p.mean[0] == 0.0);
  REQUIRE(p.mean[5]);
  CHECK(*p.mean[5] == 1.0);
  for (const auto& m : p.mean)
    if (m) CHECK((*m >= 0.0 && *m <= 1.0));
}
