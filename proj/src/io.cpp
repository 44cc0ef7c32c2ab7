#include "urbanscope/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "urbanscope/csv.hpp"
#include "urbanscope/error.hpp"

namespace urbanscope {

namespace {

constexpr double kEarthRadius = 6371008.8;

std::ofstream open_out(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  return out;
}

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string opt_csv(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

Point Projection::forward(double lon, double lat) const {
  constexpr double deg = std::numbers::pi / 180.0;
  return {kEarthRadius * (lon - lon0) * deg * std::cos(lat0 * deg), kEarthRadius * (lat - lat0) * deg, 1.0};
}

PointFormat point_format_from_string(const std::string& s) {
  if (s == "xy_csv") return PointFormat::XyCsv;
  if (s == "lonlat_csv") return PointFormat::LonLatCsv;
  if (s == "grid_counts_csv") return PointFormat::GridCountsCsv;
  throw InvalidInput("unknown point format '" + s + "' (expected xy_csv, lonlat_csv or grid_counts_csv)");
}

LoadedPoints load_points(const std::string& path, PointFormat format, const PointLoadOptions& opts) {
  const CsvTable t = CsvTable::read(path);
  LoadedPoints out;
  const auto weight_col = t.column("weight");
  const auto industry_col = t.column("industry");
  auto read_weight = [&](std::size_t r) {
    if (!weight_col) return 1.0;
    const double w = t.number(r, *weight_col);
    if (w < 0.0) throw ParseError(path, t.line(r), "negative weight");
    return w;
  };

  switch (format) {
    case PointFormat::XyCsv: {
      const auto cx = t.require("x");
      const auto cy = t.require("y");
      for (std::size_t r = 0; r < t.rows(); ++r)
        out.points.points.push_back({t.number(r, cx), t.number(r, cy), read_weight(r)});
      break;
    }
    case PointFormat::LonLatCsv: {
      const auto clon = t.require("lon");
      const auto clat = t.require("lat");
      std::vector<std::pair<double, double>> ll;
      for (std::size_t r = 0; r < t.rows(); ++r) {
        const double lon = t.number(r, clon);
        const double lat = t.number(r, clat);
        if (lon < -180.0 || lon > 180.0 || lat < -90.0 || lat > 90.0)
          throw ParseError(path, t.line(r), "longitude/latitude out of range");
        ll.emplace_back(lon, lat);
      }
      Projection proj;
      if (opts.projection) {
        proj = *opts.projection;
      } else if (!ll.empty()) {
        for (const auto& [lon, lat] : ll) {
          proj.lon0 += lon;
          proj.lat0 += lat;
        }
        proj.lon0 /= static_cast<double>(ll.size());
        proj.lat0 /= static_cast<double>(ll.size());
      }
      for (std::size_t r = 0; r < ll.size(); ++r) {
        Point p = proj.forward(ll[r].first, ll[r].second);
        p.weight = read_weight(r);
        out.points.points.push_back(p);
      }
      out.projection = proj;
      break;
    }
    case PointFormat::GridCountsCsv: {
      if (!opts.grid) throw InvalidInput("grid_counts_csv requires a grid specification");
      const GridSpec& g = *opts.grid;
      validate(g);
      const auto crow = t.require("row");
      const auto ccol = t.require("col");
      const auto ccount = t.require("count");
      for (std::size_t r = 0; r < t.rows(); ++r) {
        const long long row = t.integer(r, crow);
        const long long col = t.integer(r, ccol);
        const double count = t.number(r, ccount);
        if (row < 0 || col < 0 || static_cast<std::size_t>(row) >= g.n_rows || static_cast<std::size_t>(col) >= g.n_cols)
          throw ParseError(path, t.line(r), "cell outside the grid");
        if (count < 0.0) throw ParseError(path, t.line(r), "negative count");
        Point p = g.center(g.index(static_cast<std::size_t>(row), static_cast<std::size_t>(col)));
        p.weight = count;
        out.points.points.push_back(p);
      }
      break;
    }
  }
  if (industry_col && format != PointFormat::GridCountsCsv)
    for (std::size_t r = 0; r < t.rows(); ++r) out.points.industry.push_back(t.cell(r, *industry_col));
  return out;
}

void save_points(const std::string& path, const PointSet& points) {
  auto out = open_out(path);
  out << "x,y,weight" << (points.has_industry() ? ",industry" : "") << "\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points.points[i];
    out << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.weight);
    if (points.has_industry()) out << ',' << csv_escape(points.industry[i]);
    out << '\n';
  }
}

PointSet aggregate_to_cells(const PointSet& points, const GridSpec& g) {
  const auto counts = rasterize_counts(points, g);
  PointSet out;
  for (std::size_t i = 0; i < counts.field.values.size(); ++i) {
    if (counts.field.values[i] == 0.0) continue;
    Point p = g.center(i);
    p.weight = counts.field.values[i];
    out.points.push_back(p);
  }
  return out;
}

void save_grid_counts(const std::string& path, const PointSet& points, const GridSpec& g) {
  const auto counts = rasterize_counts(points, g);
  auto out = open_out(path);
  out << "row,col,count\n";
  for (std::size_t i = 0; i < counts.field.values.size(); ++i) {
    if (counts.field.values[i] == 0.0) continue;
    const Cell c = g.cell(i);
    out << c.row << ',' << c.col << ',' << format_double(counts.field.values[i]) << '\n';
  }
}

Json to_json(const GridSpec& g) {
  return Json{{"origin_x", g.origin_x}, {"origin_y", g.origin_y}, {"cell_size", g.cell_size},
              {"n_cols", g.n_cols},     {"n_rows", g.n_rows}};
}

GridSpec grid_from_json(const Json& j) {
  try {
    GridSpec g;
    g.origin_x = j.at("origin_x").get<double>();
    g.origin_y = j.at("origin_y").get<double>();
    g.cell_size = j.value("cell_size", 200.0);
    g.n_cols = j.at("n_cols").get<std::size_t>();
    g.n_rows = j.at("n_rows").get<std::size_t>();
    validate(g);
    return g;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("grid specification: ") + e.what());
  }
}

std::string sidecar_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  if (p.extension() == ".csv") p.replace_extension(".json");
  else p += ".json";
  return p.string();
}

void save_field(const std::string& path, const GridField& f) {
  {
    auto out = open_out(path);
    out << "row,col,value\n";
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      const Cell c = f.grid.cell(i);
      out << c.row << ',' << c.col << ',' << format_double(f.values[i]) << '\n';
    }
  }
  write_json(sidecar_path(path), Json{{"grid", to_json(f.grid)}, {"kind", to_string(f.kind)}, {"values", path.substr(path.find_last_of('/') + 1)}});
}

GridField load_field(const std::string& path) {
  const Json header = read_json(sidecar_path(path));
  const GridSpec g = grid_from_json(header.at("grid"));
  const FieldKind kind = field_kind_from_string(header.value("kind", std::string("statistic")));
  const CsvTable t = CsvTable::read(path);
  const auto crow = t.require("row");
  const auto ccol = t.require("col");
  const auto cval = t.require("value");
  std::vector<double> values(g.n_cells(), 0.0);
  std::vector<bool> seen(g.n_cells(), false);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const long long row = t.integer(r, crow);
    const long long col = t.integer(r, ccol);
    if (row < 0 || col < 0 || static_cast<std::size_t>(row) >= g.n_rows || static_cast<std::size_t>(col) >= g.n_cols)
      throw ParseError(path, t.line(r), "cell outside the grid");
    const auto idx = g.index(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
    if (seen[idx]) throw ParseError(path, t.line(r), "duplicate cell");
    seen[idx] = true;
    values[idx] = t.number(r, cval);
  }
  return GridField(g, std::move(values), kind);
}

void save_firm_table(const std::string& path, const FirmTable& t) {
  auto out = open_out(path);
  out << "zone_id,industry_code,count\n";
  for (const auto& r : t.records()) out << csv_escape(r.zone_id) << ',' << csv_escape(r.industry) << ',' << r.count << '\n';
}

FirmTable load_firm_table(const std::string& path) {
  const CsvTable t = CsvTable::read(path);
  const auto cz = t.require("zone_id");
  const auto ci = t.require("industry_code");
  const auto cc = t.require("count");
  std::vector<FirmRecord> recs;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const long long count = t.integer(r, cc);
    if (count < 0) throw ParseError(path, t.line(r), "negative firm count");
    if (t.cell(r, ci).empty()) throw ParseError(path, t.line(r), "empty industry code");
    recs.push_back({t.cell(r, cz), t.cell(r, ci), count});
  }
  return FirmTable(recs);
}

ZoneMap zones_from_json(const Json& j, const std::optional<Projection>& projection) {
  try {
    const bool lonlat = j.value("coordinates", std::string("planar")) == "lonlat";
    if (lonlat && !projection) throw InvalidInput("zones: lonlat coordinates need a projection origin");
    auto to_point = [&](const Json& xy) {
      const double a = xy.at(0).get<double>();
      const double b = xy.at(1).get<double>();
      return lonlat ? projection->forward(a, b) : Point{a, b, 1.0};
    };
    std::vector<Zone> zones;
    for (const auto& zj : j.at("zones")) {
      Zone z;
      z.id = zj.at("id").is_string() ? zj.at("id").get<std::string>() : zj.at("id").dump();
      std::vector<Ring> rings;
      for (const auto& rj : zj.at("rings")) {
        Ring r;
        for (const auto& xy : rj) r.push_back(to_point(xy));
        rings.push_back(std::move(r));
      }
      if (rings.empty()) throw InvalidInput("zone '" + z.id + "' has no rings");
      Ring outer = std::move(rings.front());
      rings.erase(rings.begin());
      z.polygon = Polygon(std::move(outer), std::move(rings));
      if (zj.contains("attributes")) {
        const auto& a = zj.at("attributes");
        if (a.contains("stratum") && !a.at("stratum").is_null()) z.attributes.stratum = a.at("stratum").get<int>();
        const std::string lu = a.value("land_use", std::string("other"));
        if (lu == "commercial_mixed") z.attributes.land_use = LandUse::CommercialMixed;
        else if (lu == "other") z.attributes.land_use = LandUse::Other;
        else throw InvalidInput("zone '" + z.id + "': unknown land_use '" + lu + "'");
        if (a.contains("population") && !a.at("population").is_null())
          z.attributes.population = a.at("population").get<double>();
        if (a.contains("comuna_id") && !a.at("comuna_id").is_null())
          z.attributes.comuna_id =
              a.at("comuna_id").is_string() ? a.at("comuna_id").get<std::string>() : a.at("comuna_id").dump();
      }
      zones.push_back(std::move(z));
    }
    return ZoneMap(std::move(zones));
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("zones: ") + e.what());
  }
}

ZoneMap load_zones(const std::string& path, const std::optional<Projection>& projection) {
  try {
    return zones_from_json(read_json(path), projection);
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

Json to_json(const ZoneMap& zones) {
  Json arr = Json::array();
  for (const auto& z : zones.zones()) {
    Json rings = Json::array();
    auto ring_json = [](const Ring& r) {
      Json a = Json::array();
      for (const auto& p : r) a.push_back(Json::array({p.x, p.y}));
      return a;
    };
    rings.push_back(ring_json(z.polygon.outer()));
    for (const auto& h : z.polygon.holes()) rings.push_back(ring_json(h));
    Json attrs;
    attrs["stratum"] = z.attributes.stratum ? Json(*z.attributes.stratum) : Json(nullptr);
    attrs["land_use"] = z.attributes.land_use == LandUse::CommercialMixed ? "commercial_mixed" : "other";
    attrs["population"] = opt_json(z.attributes.population);
    attrs["comuna_id"] = z.attributes.comuna_id;
    arr.push_back(Json{{"id", z.id}, {"rings", rings}, {"attributes", attrs}});
  }
  return Json{{"coordinates", "planar"}, {"zones", arr}};
}

StreetNetwork network_from_json(const Json& j) {
  try {
    std::vector<StreetNode> nodes;
    std::map<std::int64_t, std::size_t> index;
    for (const auto& nj : j.at("nodes")) {
      StreetNode n{nj.at("id").get<std::int64_t>(), nj.at("x").get<double>(), nj.at("y").get<double>()};
      if (!index.emplace(n.id, nodes.size()).second)
        throw InvalidInput("street network: duplicate node id " + std::to_string(n.id));
      nodes.push_back(n);
    }
    std::vector<StreetEdge> edges;
    for (const auto& ej : j.at("edges")) {
      const auto from = index.find(ej.at("from").get<std::int64_t>());
      const auto to = index.find(ej.at("to").get<std::int64_t>());
      if (from == index.end() || to == index.end()) throw InvalidInput("street network: edge references unknown node");
      StreetEdge e;
      e.from = from->second;
      e.to = to->second;
      if (ej.contains("polyline"))
        for (const auto& xy : ej.at("polyline")) e.polyline.push_back({xy.at(0).get<double>(), xy.at(1).get<double>(), 1.0});
      e.length = ej.value("length", 0.0);
      edges.push_back(std::move(e));
    }
    return StreetNetwork(std::move(nodes), std::move(edges));
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("street network: ") + e.what());
  }
}

StreetNetwork load_network(const std::string& path) { return network_from_json(read_json(path)); }

Json to_json(const StreetNetwork& net) {
  Json nodes = Json::array();
  for (const auto& n : net.nodes()) nodes.push_back(Json{{"id", n.id}, {"x", n.x}, {"y", n.y}});
  Json edges = Json::array();
  for (const auto& e : net.edges()) {
    Json line = Json::array();
    for (const auto& p : e.polyline) line.push_back(Json::array({p.x, p.y}));
    edges.push_back(Json{{"from", net.nodes()[e.from].id}, {"to", net.nodes()[e.to].id}, {"polyline", line}, {"length", e.length}});
  }
  return Json{{"nodes", nodes}, {"edges", edges}};
}

void save_sample_points(const std::string& path, const std::vector<SamplePoint>& pts) {
  auto out = open_out(path);
  out << "x,y,kind,node_id,edge_index,arc\n";
  for (const auto& s : pts) {
    out << format_double(s.location.x) << ',' << format_double(s.location.y) << ','
        << (s.crossing ? "crossing" : "interior") << ',' << (s.node ? std::to_string(*s.node) : "") << ','
        << (s.edge ? std::to_string(*s.edge) : "") << ',' << format_double(s.arc) << '\n';
  }
}

void save_lisa(const std::string& path, const LisaResult& r) {
  {
    auto out = open_out(path);
    out << "row,col,local_i,p_value,quadrant\n";
    for (std::size_t i = 0; i < r.local_i.size(); ++i) {
      const Cell c = r.grid.cell(i);
      out << c.row << ',' << c.col << ',' << format_double(r.local_i[i]) << ',' << format_double(r.p_value[i]) << ','
          << to_string(r.quadrant[i]) << '\n';
    }
  }
  write_json(sidecar_path(path), Json{{"grid", to_json(r.grid)}, {"permutations", r.permutations}, {"seed", r.seed}});
}

LisaResult load_lisa(const std::string& path, const GridSpec& g) {
  LisaResult r;
  r.grid = g;
  const std::string side = sidecar_path(path);
  if (std::filesystem::exists(side)) {
    const Json h = read_json(side);
    if (h.contains("grid") && !(grid_from_json(h.at("grid")) == g))
      throw InvalidInput("LISA result '" + path + "' is on a different grid");
    r.permutations = h.value("permutations", std::size_t{0});
    r.seed = h.value("seed", std::uint64_t{0});
  }
  const CsvTable t = CsvTable::read(path);
  const auto crow = t.require("row");
  const auto ccol = t.require("col");
  const auto ci = t.require("local_i");
  const auto cp = t.require("p_value");
  const auto cq = t.require("quadrant");
  r.local_i.assign(g.n_cells(), 0.0);
  r.p_value.assign(g.n_cells(), 1.0);
  r.quadrant.assign(g.n_cells(), Quadrant::LL);
  if (t.rows() != g.n_cells()) throw ParseError(path, 1, "expected one row per grid cell");
  for (std::size_t row = 0; row < t.rows(); ++row) {
    const long long rr = t.integer(row, crow);
    const long long cc = t.integer(row, ccol);
    if (rr < 0 || cc < 0 || static_cast<std::size_t>(rr) >= g.n_rows || static_cast<std::size_t>(cc) >= g.n_cols)
      throw ParseError(path, t.line(row), "cell outside the grid");
    const auto idx = g.index(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
    r.local_i[idx] = t.number(row, ci);
    r.p_value[idx] = t.number(row, cp);
    try {
      r.quadrant[idx] = quadrant_from_string(t.cell(row, cq));
    } catch (const InvalidInput& e) {
      throw ParseError(path, t.line(row), e.what());
    }
  }
  return r;
}

Json to_json(const ClusterSet& cs) {
  Json arr = Json::array();
  for (const auto& c : cs.clusters) {
    Json cells = Json::array();
    for (CellIndex i : c.cells) {
      const Cell rc = cs.grid.cell(i);
      cells.push_back(Json::array({rc.row, rc.col}));
    }
    arr.push_back(Json{{"label", c.label},
                       {"n_cells", c.cells.size()},
                       {"mass", c.mass},
                       {"centroid", Json::array({c.centroid.x, c.centroid.y})},
                       {"cells", cells}});
  }
  return Json{{"grid", to_json(cs.grid)},
              {"density_percentile", cs.density_percentile},
              {"p_threshold", cs.p_threshold},
              {"n_clusters", cs.clusters.size()},
              {"clusters", arr}};
}

ClusterSet clusters_from_json(const Json& j) {
  try {
    ClusterSet cs;
    cs.grid = grid_from_json(j.at("grid"));
    cs.density_percentile = j.value("density_percentile", 0.0);
    cs.p_threshold = j.value("p_threshold", 0.0);
    for (const auto& cj : j.at("clusters")) {
      Cluster c;
      c.label = cj.at("label").get<std::string>();
      c.mass = cj.value("mass", 0.0);
      c.centroid = {cj.at("centroid").at(0).get<double>(), cj.at("centroid").at(1).get<double>(), 1.0};
      for (const auto& rc : cj.value("cells", Json::array()))
        c.cells.push_back(cs.grid.index(rc.at(0).get<std::size_t>(), rc.at(1).get<std::size_t>()));
      cs.clusters.push_back(std::move(c));
    }
    return cs;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("cluster set: ") + e.what());
  }
}

Json to_json(const Dendrogram& d) {
  Json levels = Json::array();
  for (std::size_t lv = 0; lv < d.levels.size(); ++lv) {
    Json l = to_json(d.levels[lv]);
    l.erase("grid");
    levels.push_back(std::move(l));
  }
  Json nodes = Json::array();
  for (const auto& n : d.nodes) {
    const auto& cl = d.levels[n.level].clusters[n.cluster];
    nodes.push_back(Json{{"name", n.name},
                         {"threshold", d.thresholds[n.level]},
                         {"cluster", cl.label},
                         {"parent", n.parent < 0 ? Json(nullptr) : Json(d.nodes[static_cast<std::size_t>(n.parent)].name)},
                         {"n_cells", cl.cells.size()},
                         {"mass", cl.mass},
                         {"centroid", Json::array({cl.centroid.x, cl.centroid.y})}});
  }
  Json branches = Json::array();
  for (const auto& b : d.branches)
    branches.push_back(Json{{"name", b.name}, {"appears", b.appears}, {"disappears", b.disappears}});
  return Json{{"grid", d.levels.empty() ? Json(nullptr) : to_json(d.levels.front().grid)},
              {"thresholds", d.thresholds},
              {"nodes", nodes},
              {"branches", branches},
              {"levels", levels}};
}

void save_dendrogram_edges(const std::string& path, const Dendrogram& d) {
  auto out = open_out(path);
  out << "parent_name,parent_threshold,child_name,child_threshold,n_cells,mass\n";
  for (const auto& n : d.nodes) {
    const auto& cl = d.levels[n.level].clusters[n.cluster];
    if (n.parent >= 0) {
      const auto& p = d.nodes[static_cast<std::size_t>(n.parent)];
      out << csv_escape(p.name) << ',' << format_double(d.thresholds[p.level]) << ',';
    } else {
      out << ",,";
    }
    out << csv_escape(n.name) << ',' << format_double(d.thresholds[n.level]) << ',' << cl.cells.size() << ','
        << format_double(cl.mass) << '\n';
  }
}

void save_profile(const std::string& path, const RadialProfile& p, const std::string& value_column,
                  const std::string& support_column) {
  auto out = open_out(path);
  out << "bin_lo,bin_hi," << value_column << ',' << support_column << '\n';
  for (std::size_t k = 0; k < p.n_bins(); ++k)
    out << format_double(p.edges[k]) << ',' << format_double(p.edges[k + 1]) << ',' << opt_csv(p.mean[k]) << ','
        << format_double(p.support[k]) << '\n';
}

Json to_json(const RegressionReport& r) {
  auto finite_or_null = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return Json{{"slope", r.slope},          {"intercept", r.intercept}, {"slope_se", r.slope_se},
              {"t", finite_or_null(r.t)},  {"p_value", r.p_value},     {"r_squared", r.r_squared},
              {"n", r.n},                  {"weighted", r.weighted}};
}

Json to_json(const CountMetrics& m) {
  return Json{{"c_f", opt_json(m.c_f)},           {"err_0", opt_json(m.err_0)}, {"n_r", m.n_r},
              {"n_nr", m.n_nr},                   {"precision", opt_json(m.precision)},
              {"recall", opt_json(m.recall)},     {"f1", opt_json(m.f1)}};
}

Json to_json(const OmissionResult& r, bool with_samples) {
  Json j{{"mean", r.mean}, {"std", r.std}, {"n_regions", r.samples.size()}};
  if (with_samples) j["samples"] = r.samples;
  return j;
}

Json to_json(const StratumAdherence& a) {
  auto row = [](const AdherenceRow& r) {
    return Json{{"firms", r.firms}, {"on_commercial", r.on_commercial}, {"rate", opt_json(r.rate)}};
  };
  Json strata = Json::array();
  for (int s = 1; s <= 6; ++s) {
    Json j = row(a.stratum(s));
    j["stratum"] = s;
    strata.push_back(std::move(j));
  }
  return Json{{"strata", strata}, {"unzoned", row(a.unzoned)}, {"total", row(a.total)}};
}

void save_adherence(const std::string& path, const StratumAdherence& a) {
  auto out = open_out(path);
  out << "stratum,firms,on_commercial,nonadherence\n";
  auto line = [&](const std::string& label, const AdherenceRow& r) {
    out << label << ',' << format_double(r.firms) << ',' << format_double(r.on_commercial) << ',' << opt_csv(r.rate) << '\n';
  };
  for (int s = 1; s <= 6; ++s) line(std::to_string(s), a.stratum(s));
  line("unzoned", a.unzoned);
  line("total", a.total);
}

void save_rca(const std::string& path, const RcaMatrix& m) {
  auto out = open_out(path);
  out << "industry_code,zone_id,rca\n";
  for (std::size_t i = 0; i < m.industries.size(); ++i)
    for (std::size_t z = 0; z < m.zones.size(); ++z)
      out << csv_escape(m.industries[i]) << ',' << csv_escape(m.zones[z]) << ',' << opt_csv(m.at(i, z)) << '\n';
}

void save_sector_association(const std::string& path, const SectorAssociation& s) {
  auto out = open_out(path);
  out << "rank,industry_code,slope,intercept,slope_se,t,p_value,r_squared,n,status\n";
  std::size_t rank = 1;
  for (const auto& r : s.ranked)
    out << rank++ << ',' << csv_escape(r.industry) << ',' << format_double(r.report.slope) << ','
        << format_double(r.report.intercept) << ',' << format_double(r.report.slope_se) << ','
        << format_double(r.report.t) << ',' << format_double(r.report.p_value) << ','
        << format_double(r.report.r_squared) << ',' << r.report.n << ",ok\n";
  for (const auto& k : s.skipped) out << ',' << csv_escape(k.industry) << ",,,,,,,," << csv_escape("skipped: " + k.reason) << '\n';
}

CodeList load_code_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open code list '" + path + "'");
  CodeList codes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream words(line);
    std::string w;
    while (words >> w) {
      if (w.size() != 4 || w.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(path, lineno, "expected a 4-digit industry code, got '" + w + "'");
      codes.insert(w);
    }
  }
  if (codes.empty()) throw InvalidInput("code list '" + path + "' is empty");
  return codes;
}

const CodeList& default_street_commerce_codes() {
  static const CodeList codes = [] {
#ifdef URBANSCOPE_DEFAULT_CODES
    if (std::filesystem::exists(URBANSCOPE_DEFAULT_CODES)) return load_code_list(URBANSCOPE_DEFAULT_CODES);
#endif
    return CodeList{"4711", "4719", "4721", "4722", "4723", "4724", "4729", "4730", "4741", "4742", "4751",
                    "4752", "4753", "4754", "4755", "4759", "4761", "4762", "4769", "4771", "4772", "4773",
                    "4774", "4775", "4781", "4782", "4789", "4520", "5611", "5612", "5613", "5619", "5630",
                    "9511", "9512", "9521", "9522", "9523", "9524", "9529", "9601", "9602", "9603", "9609"};
  }();
  return codes;
}

FilteredTable filter_commercial(const FirmTable& t, const CodeList& codes) {
  if (codes.empty()) throw InvalidInput("filter_commercial: empty code list");
  std::vector<FirmRecord> kept;
  FilteredTable out;
  for (const auto& r : t.records()) {
    out.total += r.count;
    if (codes.count(r.industry.substr(0, 4))) {
      kept.push_back(r);
      out.retained += r.count;
    }
  }
  out.table = FirmTable(kept);
  for (const auto& z : t.zones()) out.table.add_zone(z);
  return out;
}

FilteredPoints filter_commercial(const PointSet& points, const CodeList& codes) {
  if (codes.empty()) throw InvalidInput("filter_commercial: empty code list");
  if (!points.has_industry()) throw InvalidInput("filter_commercial: points carry no industry codes");
  FilteredPoints out;
  out.total = points.size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!codes.count(points.industry[i].substr(0, 4))) continue;
    out.points.points.push_back(points.points[i]);
    out.points.industry.push_back(points.industry[i]);
  }
  out.retained = out.points.size();
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
}

Json read_json(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace urbanscope
