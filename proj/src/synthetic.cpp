#include "urbanscope/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "urbanscope/error.hpp"
#include "urbanscope/random.hpp"

namespace urbanscope {

namespace {

std::string zone_id(std::size_t k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "Z%02zu", k + 1);
  return buf;
}

Population population_from_string(const std::string& s) {
  if (s == "visible") return Population::Visible;
  if (s == "registered") return Population::Registered;
  if (s == "both") return Population::Both;
  throw InvalidInput("unknown blob population '" + s + "'");
}

std::string to_string(Population p) {
  switch (p) {
    case Population::Visible: return "visible";
    case Population::Registered: return "registered";
    case Population::Both: return "both";
  }
  return "both";
}

const std::vector<std::string>& default_industries() {
  static const std::vector<std::string> codes{"4711", "4771", "5611", "9602", "1011", "4100", "6201", "8610"};
  return codes;
}

bool inside(const Point& p, const BBox& b) {
  return p.x >= b.min_x && p.x <= b.max_x && p.y >= b.min_y && p.y <= b.max_y;
}

}  // namespace

void save_dataset(const std::string& dir, const Dataset& d) {
  std::filesystem::create_directories(dir);
  write_json(dir + "/grid.json", to_json(d.grid));
  save_points(dir + "/visible.csv", d.visible);
  save_points(dir + "/registered.csv", d.registered);
  save_points(dir + "/registered_commercial.csv", d.registered_commercial);
  if (d.firms) save_firm_table(dir + "/firms.csv", *d.firms);
  if (d.zones) write_json(dir + "/zones.json", to_json(*d.zones));
  if (d.network) write_json(dir + "/network.json", to_json(*d.network));
}

SyntheticCityConfig synthetic_config_from_json(const Json& j) {
  try {
    SyntheticCityConfig c;
    if (j.contains("extent")) {
      const auto& e = j.at("extent");
      c.extent = {e.at("min_x").get<double>(), e.at("min_y").get<double>(), e.at("max_x").get<double>(),
                  e.at("max_y").get<double>()};
    }
    c.cell_size = j.value("cell_size", c.cell_size);
    for (const auto& b : j.value("blobs", Json::array())) {
      Blob blob;
      blob.center = {b.at("center").at(0).get<double>(), b.at("center").at(1).get<double>(), 1.0};
      blob.spread = b.value("spread", blob.spread);
      blob.count = b.at("count").get<std::size_t>();
      blob.population = population_from_string(b.value("population", std::string("both")));
      c.blobs.push_back(blob);
    }
    if (j.contains("background")) {
      const auto& bg = j.at("background");
      c.background_visible = bg.value("visible", std::size_t{0});
      c.background_registered = bg.value("registered", std::size_t{0});
    }
    if (j.contains("zones")) {
      const auto& z = j.at("zones");
      c.zone_cols = z.value("cols", std::size_t{1});
      c.zone_rows = z.value("rows", std::size_t{1});
      c.strata = z.value("strata", std::vector<int>{});
      c.population = z.value("population", std::vector<double>{});
      if (z.contains("commercial")) c.commercial_zones = z.at("commercial").get<std::vector<std::size_t>>();
    }
    c.industries = j.value("industries", std::vector<std::string>{});
    if (j.contains("industry_weights"))
      for (const auto& [k, v] : j.at("industry_weights").items())
        c.industry_weights[std::stoul(k)] = v.get<std::vector<double>>();
    c.seed = j.value("seed", c.seed);
    return c;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("synthetic city config: ") + e.what());
  } catch (const std::logic_error& e) {
    throw InvalidInput(std::string("synthetic city config: ") + e.what());
  }
}

Json to_json(const SyntheticCityConfig& c) {
  Json blobs = Json::array();
  for (const auto& b : c.blobs)
    blobs.push_back(Json{{"center", Json::array({b.center.x, b.center.y})},
                         {"spread", b.spread},
                         {"count", b.count},
                         {"population", to_string(b.population)}});
  Json weights = Json::object();
  for (const auto& [k, v] : c.industry_weights) weights[std::to_string(k)] = v;
  return Json{{"extent", {{"min_x", c.extent.min_x}, {"min_y", c.extent.min_y}, {"max_x", c.extent.max_x}, {"max_y", c.extent.max_y}}},
              {"cell_size", c.cell_size},
              {"blobs", blobs},
              {"background", {{"visible", c.background_visible}, {"registered", c.background_registered}}},
              {"zones", {{"cols", c.zone_cols}, {"rows", c.zone_rows}, {"strata", c.strata}, {"population", c.population}, {"commercial", c.commercial_zones}}},
              {"industries", c.industries},
              {"industry_weights", weights},
              {"seed", c.seed}};
}

Dataset generate_synthetic_city(const SyntheticCityConfig& cfg) {
  if (!(cfg.extent.max_x > cfg.extent.min_x) || !(cfg.extent.max_y > cfg.extent.min_y))
    throw InvalidInput("synthetic city: degenerate extent");
  if (cfg.zone_cols == 0 || cfg.zone_rows == 0) throw InvalidInput("synthetic city: zone partition needs cells");
  std::size_t total = cfg.background_visible + cfg.background_registered;
  for (const auto& b : cfg.blobs) {
    if (!(b.spread > 0.0)) throw InvalidInput("synthetic city: blob spread must be positive");
    total += b.count;
  }
  if (total == 0) throw InvalidInput("synthetic city: no firms configured");
  for (int s : cfg.strata)
    if (s < 1 || s > 6) throw InvalidInput("synthetic city: strata must be in 1..6");

  Dataset d;
  d.grid = build_grid(cfg.extent, cfg.cell_size);

  // Zones: rectangular partition.
  const std::size_t n_zones = cfg.zone_cols * cfg.zone_rows;
  const double zw = (cfg.extent.max_x - cfg.extent.min_x) / static_cast<double>(cfg.zone_cols);
  const double zh = (cfg.extent.max_y - cfg.extent.min_y) / static_cast<double>(cfg.zone_rows);
  std::vector<bool> commercial(n_zones, false);
  for (std::size_t k : cfg.commercial_zones) {
    if (k >= n_zones) throw InvalidInput("synthetic city: commercial zone index out of range");
    commercial[k] = true;
  }
  std::vector<Zone> zones;
  for (std::size_t r = 0; r < cfg.zone_rows; ++r) {
    for (std::size_t c = 0; c < cfg.zone_cols; ++c) {
      const std::size_t k = r * cfg.zone_cols + c;
      const double x0 = cfg.extent.min_x + zw * static_cast<double>(c);
      const double y0 = cfg.extent.min_y + zh * static_cast<double>(r);
      const double x1 = c + 1 == cfg.zone_cols ? cfg.extent.max_x : x0 + zw;
      const double y1 = r + 1 == cfg.zone_rows ? cfg.extent.max_y : y0 + zh;
      Zone z;
      z.id = zone_id(k);
      z.polygon = Polygon({{x0, y0, 1}, {x1, y0, 1}, {x1, y1, 1}, {x0, y1, 1}});
      z.attributes.stratum = cfg.strata.empty() ? static_cast<int>(1 + k % 6) : cfg.strata[k % cfg.strata.size()];
      z.attributes.population = cfg.population.empty() ? 10000.0 * static_cast<double>(1 + k % 3)
                                                       : cfg.population[k % cfg.population.size()];
      z.attributes.comuna_id = z.id;
      if (cfg.commercial_zones.empty()) {
        for (const auto& b : cfg.blobs)
          if (point_in_polygon(b.center, z.polygon)) commercial[k] = true;
      }
      z.attributes.land_use = commercial[k] ? LandUse::CommercialMixed : LandUse::Other;
      zones.push_back(std::move(z));
    }
  }
  d.zones = ZoneMap(std::move(zones));

  Rng rng(derive_seed(cfg.seed, 0x63697479 /* "city" */));
  auto gaussian_point = [&](const Blob& b) {
    for (;;) {
      const double dx = rng.normal();
      const double dy = rng.normal();
      const Point p{b.center.x + b.spread * dx, b.center.y + b.spread * dy, 1.0};
      if (inside(p, cfg.extent)) return p;
    }
  };
  auto uniform_point = [&] {
    const double x = rng.uniform(cfg.extent.min_x, cfg.extent.max_x);
    const double y = rng.uniform(cfg.extent.min_y, cfg.extent.max_y);
    return Point{x, y, 1.0};
  };

  for (const auto& b : cfg.blobs) {
    if (b.population != Population::Registered)
      for (std::size_t i = 0; i < b.count; ++i) d.visible.points.push_back(gaussian_point(b));
    if (b.population != Population::Visible)
      for (std::size_t i = 0; i < b.count; ++i) d.registered.points.push_back(gaussian_point(b));
  }
  for (std::size_t i = 0; i < cfg.background_visible; ++i) d.visible.points.push_back(uniform_point());
  for (std::size_t i = 0; i < cfg.background_registered; ++i) d.registered.points.push_back(uniform_point());

  // Industries for registered firms, drawn from each zone's mixture.
  const auto& industries = cfg.industries.empty() ? default_industries() : cfg.industries;
  const auto assignment = assign_zones(d.registered, *d.zones);
  std::vector<FirmRecord> records;
  for (std::size_t i = 0; i < d.registered.size(); ++i) {
    const auto z = assignment.zone[i];
    std::vector<double> w(industries.size(), 1.0);
    if (z) {
      auto it = cfg.industry_weights.find(*z);
      if (it != cfg.industry_weights.end()) {
        if (it->second.size() != industries.size())
          throw InvalidInput("synthetic city: industry weights must match the industry list");
        w = it->second;
      }
    }
    double total_w = 0.0;
    for (double v : w) {
      if (!(v >= 0.0)) throw InvalidInput("synthetic city: industry weights must be non-negative");
      total_w += v;
    }
    if (!(total_w > 0.0)) throw InvalidInput("synthetic city: industry weights sum to zero");
    double u = rng.uniform() * total_w;
    std::size_t pick = 0;
    while (pick + 1 < w.size() && u >= w[pick]) u -= w[pick++];
    d.registered.industry.push_back(industries[pick]);
    if (z) records.push_back({(*d.zones)[*z].id, industries[pick], 1});
  }
  FirmTable firms(records);
  for (const auto& z : d.zones->zones()) firms.add_zone(z.id);
  d.firms = std::move(firms);
  if (d.registered.empty()) d.registered.industry.clear();
  else d.registered_commercial = filter_commercial(d.registered, default_street_commerce_codes()).points;
  return d;
}

}  // namespace urbanscope
