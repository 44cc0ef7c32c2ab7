#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "urbanscope/econ.hpp"
#include "urbanscope/geometry.hpp"
#include "urbanscope/io.hpp"
#include "urbanscope/survey.hpp"

namespace urbanscope {

// Everything one analysis run consumes.
struct Dataset {
  GridSpec grid;
  PointSet visible;
  PointSet registered;
  PointSet registered_commercial;
  std::optional<FirmTable> firms;
  std::optional<ZoneMap> zones;
  std::optional<StreetNetwork> network;
};

// Writes grid.json, visible.csv, registered.csv, registered_commercial.csv,
// and when present firms.csv, zones.json, network.json.
void save_dataset(const std::string& dir, const Dataset& d);

enum class Population { Visible, Registered, Both };

struct Blob {
  Point center;
  double spread = 400.0;  // isotropic Gaussian sigma, metres
  std::size_t count = 0;  // firms per population it feeds
  Population population = Population::Both;
};

struct SyntheticCityConfig {
  BBox extent{0.0, 0.0, 12000.0, 8000.0};
  double cell_size = 200.0;
  std::vector<Blob> blobs;
  std::size_t background_visible = 0;
  std::size_t background_registered = 0;
  // Zones form a zone_cols x zone_rows rectangular partition of the extent,
  // numbered row-major from the south-west corner.
  std::size_t zone_cols = 1;
  std::size_t zone_rows = 1;
  std::vector<int> strata;                  // per zone, cycled; default 1 + (k mod 6)
  std::vector<std::size_t> commercial_zones;  // default: zones holding a blob center
  std::vector<double> population;           // per zone, cycled
  std::vector<std::string> industries;      // registered firms draw from these
  std::map<std::size_t, std::vector<double>> industry_weights;  // per zone; default uniform
  std::uint64_t seed = 1;
};

SyntheticCityConfig synthetic_config_from_json(const Json& j);
Json to_json(const SyntheticCityConfig& cfg);

// Blob points come from isotropic Gaussians and background points from a
// uniform draw over the extent; draws falling outside the extent are
// repeated. Registered firms get an industry per their zone's mixture, and
// the firm table aggregates them by zone. Deterministic in the seed.
Dataset generate_synthetic_city(const SyntheticCityConfig& cfg);

}  // namespace urbanscope
