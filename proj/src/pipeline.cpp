#include "urbanscope/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

#include "urbanscope/compare.hpp"
#include "urbanscope/csv.hpp"
#include "urbanscope/density.hpp"
#include "urbanscope/econ.hpp"
#include "urbanscope/error.hpp"
#include "urbanscope/landuse.hpp"
#include "urbanscope/lisa.hpp"
#include "urbanscope/random.hpp"
#include "urbanscope/synthetic.hpp"

namespace fs = std::filesystem;

namespace urbanscope {

namespace {

struct Settings {
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double cell_size = 200.0;
  double bandwidth = 150.0;
  std::optional<BBox> bbox;
  std::size_t permutations = 999;
  double p_threshold = 0.10;
  double density_percentile = 0.80;
  std::vector<double> dendrogram_thresholds{0.80, 0.85, 0.90, 0.95, 0.99};
  std::vector<double> robustness_p{0.05, 0.10};
  std::vector<double> robustness_thresholds{0.50, 0.60, 0.70, 0.80};
  std::vector<double> top_percentiles{0.01};
  double bin_width = 250.0;
  double max_dist = 10000.0;
  std::size_t rca_digits = 2;
  std::size_t diversity_digits = 4;
  bool export_cell_counts = false;
};

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

Settings parse_settings(const Json& c, const PipelineOptions& opts) {
  Settings s;
  s.seed = get_or(c, "seed", s.seed);
  s.workers = opts.workers ? *opts.workers : get_or(c, "workers", s.workers);
  s.cell_size = get_or(c, "cell_size", s.cell_size);
  s.bandwidth = get_or(c, "bandwidth", s.bandwidth);
  if (c.contains("bbox")) {
    const auto v = c.at("bbox").get<std::vector<double>>();
    if (v.size() != 4) throw InvalidInput("config: bbox needs [min_x, min_y, max_x, max_y]");
    s.bbox = BBox{v[0], v[1], v[2], v[3]};
  }
  s.permutations = get_or(c, "permutations", s.permutations);
  s.p_threshold = get_or(c, "p_threshold", s.p_threshold);
  s.density_percentile = get_or(c, "density_percentile", s.density_percentile);
  s.dendrogram_thresholds = get_or(c, "dendrogram_thresholds", s.dendrogram_thresholds);
  if (c.contains("robustness")) {
    s.robustness_p = get_or(c.at("robustness"), "p_values", s.robustness_p);
    s.robustness_thresholds = get_or(c.at("robustness"), "thresholds", s.robustness_thresholds);
  }
  s.top_percentiles = get_or(c, "top_percentiles", s.top_percentiles);
  if (c.contains("profile")) {
    s.bin_width = get_or(c.at("profile"), "bin_width", s.bin_width);
    s.max_dist = get_or(c.at("profile"), "max_dist", s.max_dist);
  }
  s.rca_digits = get_or(c, "rca_digits", s.rca_digits);
  s.diversity_digits = get_or(c, "diversity_digits", s.diversity_digits);
  s.export_cell_counts = get_or(c, "export_cell_counts", s.export_cell_counts);

  if (!(s.cell_size > 0.0)) throw InvalidInput("config: cell_size must be positive");
  if (!(s.bandwidth > 0.0)) throw InvalidInput("config: bandwidth must be positive");
  if (s.permutations < 99) throw InvalidInput("config: permutations must be at least 99");
  if (!(s.p_threshold > 0.0 && s.p_threshold < 1.0)) throw InvalidInput("config: p_threshold must be in (0, 1)");
  if (!(s.density_percentile >= 0.0 && s.density_percentile <= 1.0))
    throw InvalidInput("config: density_percentile must be in [0, 1]");
  if (s.workers == 0) s.workers = 1;
  return s;
}

Json settings_echo(const Settings& s) {
  Json j{{"seed", s.seed},
         {"cell_size", s.cell_size},
         {"bandwidth", s.bandwidth},
         {"permutations", s.permutations},
         {"p_threshold", s.p_threshold},
         {"density_percentile", s.density_percentile},
         {"dendrogram_thresholds", s.dendrogram_thresholds},
         {"robustness", {{"p_values", s.robustness_p}, {"thresholds", s.robustness_thresholds}}},
         {"top_percentiles", s.top_percentiles},
         {"profile", {{"bin_width", s.bin_width}, {"max_dist", s.max_dist}}},
         {"rca_digits", s.rca_digits},
         {"diversity_digits", s.diversity_digits},
         {"export_cell_counts", s.export_cell_counts}};
  if (s.bbox) j["bbox"] = {s.bbox->min_x, s.bbox->min_y, s.bbox->max_x, s.bbox->max_y};
  return j;
}

std::string resolve(const std::string& base, const std::string& p) {
  if (base.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).string();
}

struct Inputs {
  Dataset data;
  bool have_grid = false;
  std::optional<std::string> source;  // "synthetic" or "files"
  Json echo;
};

Inputs load_inputs(const Json& c, const Settings& s, const std::string& base) {
  Inputs in;
  if (c.contains("synthetic")) {
    const SyntheticCityConfig cfg = synthetic_config_from_json(c.at("synthetic"));
    in.data = generate_synthetic_city(cfg);
    in.have_grid = true;
    in.source = "synthetic";
    in.echo = Json{{"synthetic", to_json(cfg)}};
    return in;
  }
  if (!c.contains("inputs")) throw InvalidInput("config: needs either 'synthetic' or 'inputs'");
  const Json& ij = c.at("inputs");
  in.source = "files";
  in.echo = Json{{"inputs", ij}};

  std::optional<GridSpec> file_grid;
  if (ij.contains("grid")) file_grid = grid_from_json(read_json(resolve(base, ij.at("grid").get<std::string>())));
  std::optional<Projection> proj;
  if (ij.contains("projection"))
    proj = Projection{ij.at("projection").at("lon0").get<double>(), ij.at("projection").at("lat0").get<double>()};

  auto load_population = [&](const char* key, PointSet& dst) {
    if (!ij.contains(key)) return;
    const Json& pj = ij.at(key);
    const std::string path = resolve(base, pj.is_string() ? pj.get<std::string>() : pj.at("path").get<std::string>());
    const PointFormat fmt = point_format_from_string(pj.is_string() ? "xy_csv" : pj.value("format", std::string("xy_csv")));
    PointLoadOptions o;
    o.grid = file_grid;
    o.projection = proj;
    auto loaded = load_points(path, fmt, o);
    // Later lon/lat inputs must share the first one's projection.
    if (loaded.projection && !proj) proj = loaded.projection;
    dst = std::move(loaded.points);
  };
  load_population("visible", in.data.visible);
  load_population("registered", in.data.registered);
  load_population("registered_commercial", in.data.registered_commercial);
  if (in.data.registered_commercial.empty() && in.data.registered.has_industry()) {
    const CodeList codes = ij.contains("codes") ? load_code_list(resolve(base, ij.at("codes").get<std::string>()))
                                                : default_street_commerce_codes();
    in.data.registered_commercial = filter_commercial(in.data.registered, codes).points;
  }
  if (ij.contains("firms")) in.data.firms = load_firm_table(resolve(base, ij.at("firms").get<std::string>()));
  if (ij.contains("zones")) in.data.zones = load_zones(resolve(base, ij.at("zones").get<std::string>()), proj);
  if (file_grid) {
    in.data.grid = *file_grid;
    in.have_grid = true;
  }
  (void)s;
  return in;
}

GridSpec choose_grid(const Inputs& in, const Settings& s) {
  if (s.bbox) return build_grid(*s.bbox, s.cell_size);
  if (in.have_grid) return in.data.grid;
  PointSet all;
  for (const PointSet* p : {&in.data.visible, &in.data.registered, &in.data.registered_commercial})
    all.points.insert(all.points.end(), p->points.begin(), p->points.end());
  if (all.empty()) throw InvalidInput("config: no input points");
  return build_grid(bounding_box(all), s.cell_size);
}

class Runner {
public:
  Runner(std::string dir) : dir_(std::move(dir)) {}

  void run(const std::string& name, const std::function<void()>& body) {
    try {
      body();
      stages_.push_back(Json{{"name", name}, {"status", "ok"}});
    } catch (const StageFailure&) {
      throw;
    } catch (const InvalidInput& e) {
      // Bad input data is the caller's problem, not a failing stage.
      if (name == "inputs") throw;
      throw StageFailure(name, e.what());
    } catch (const std::exception& e) {
      throw StageFailure(name, e.what());
    }
  }

  void skip(const std::string& name, const std::string& reason) {
    stages_.push_back(Json{{"name", name}, {"status", "skipped"}, {"reason", reason}});
    notices_.push_back(name + " skipped: " + reason);
  }

  std::string path(const std::string& file) const { return dir_ + "/" + file; }

  Json stages_;
  std::vector<std::string> notices_;
  Json summary_ = Json::object();

private:
  std::string dir_;
};

Json source_echo(const Json& c) {
  if (c.contains("synthetic")) return Json{{"synthetic", c.at("synthetic")}};
  if (c.contains("inputs")) return Json{{"inputs", c.at("inputs")}};
  return Json(nullptr);
}

Json profile_summary(const RadialProfile& p) {
  const auto k = p.argmax();
  if (!k) return Json(nullptr);
  return Json{{"peak_bin_lo", p.edges[*k]}, {"peak_bin_hi", p.edges[*k + 1]}, {"peak_value", *p.mean[*k]}};
}

Json report_or_skip(const std::function<RegressionReport()>& fit) {
  try {
    return to_json(fit());
  } catch (const InvalidInput& e) {
    return Json{{"skipped", e.what()}};
  }
}

}  // namespace

PipelineResult run_pipeline(const Json& config, const PipelineOptions& opts) {
  Settings s;
  std::string out_dir;
  try {
    s = parse_settings(config, opts);
    if (opts.output_dir) out_dir = *opts.output_dir;
    else if (config.contains("output_dir")) out_dir = resolve(opts.base_dir, config.at("output_dir").get<std::string>());
    else if (const char* env = std::getenv("URBANSCOPE_OUTPUT_DIR")) out_dir = env;
    else out_dir = "urbanscope-out";
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  while (out_dir.size() > 1 && out_dir.back() == '/') out_dir.pop_back();

  const std::string tmp = out_dir + ".partial";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  Runner R(tmp);

  try {
    Inputs in;
    GridSpec grid;
    R.run("inputs", [&] {
      try {
        in = load_inputs(config, s, opts.base_dir);
      } catch (const Json::exception& e) {
        throw InvalidInput(std::string("config: ") + e.what());
      }
      grid = choose_grid(in, s);
      if (s.export_cell_counts) {
        for (auto [name, ps] : {std::pair{"visible", &in.data.visible}, std::pair{"registered", &in.data.registered},
                                std::pair{"registered_commercial", &in.data.registered_commercial}})
          if (!ps->empty()) save_grid_counts(R.path(std::string("cells_") + name + ".csv"), *ps, grid);
      }
      R.summary_["grid"] = to_json(grid);
      R.summary_["points"] = {{"visible", in.data.visible.size()},
                              {"registered", in.data.registered.size()},
                              {"registered_commercial", in.data.registered_commercial.size()}};
    });

    // ---- density --------------------------------------------------------
    struct Pop {
      std::string name;
      const PointSet* points;
      std::optional<GridField> rho;
      std::optional<GridField> counts;
    };
    std::vector<Pop> pops{{"visible", &in.data.visible, {}, {}},
                          {"registered", &in.data.registered, {}, {}},
                          {"registered_commercial", &in.data.registered_commercial, {}, {}}};
    R.run("density", [&] {
      Json rep = Json::object();
      for (auto& p : pops) {
        if (p.points->empty()) continue;
        auto counts = rasterize_counts(*p.points, grid);
        p.counts = counts.field;
        p.rho = kde(*p.points, grid, KdeOptions{s.bandwidth, 8.0, s.workers});
        save_field(R.path("counts_" + p.name + ".csv"), *p.counts);
        save_field(R.path("rho_" + p.name + ".csv"), *p.rho);
        Json pj{{"n_points", p.points->size()},
                {"out_of_grid", counts.out_of_grid},
                {"cv", coefficient_of_variation(*p.rho)}};
        Json shares = Json::array();
        for (double q : s.top_percentiles) {
          const auto ts = top_share(*p.rho, *p.counts, q);
          shares.push_back(Json{{"percentile", q}, {"n_cells", ts.n_selected}, {"share", ts.share}});
        }
        pj["top_share"] = shares;
        const auto curve = top_share(*p.rho, *p.counts, 1.0).curve;
        std::ofstream cf(R.path("rank_share_" + p.name + ".csv"));
        cf << "rank,cell_fraction,count_share\n";
        for (std::size_t k = 0; k < curve.size(); ++k)
          cf << k + 1 << ',' << format_double(static_cast<double>(k + 1) / static_cast<double>(curve.size())) << ','
             << format_double(curve[k]) << '\n';
        rep[p.name] = pj;
      }
      if (rep.empty()) throw InvalidInput("no population has points");
      write_json(R.path("density_report.json"), rep);
      R.summary_["density"] = rep;
    });

    // ---- clustering of visible firms -------------------------------------
    const Pop& vis = pops[0];
    const Pop& regc = pops[2];
    std::optional<ClusterSet> vis_clusters;
    std::optional<ClusterSet> formal_clusters;
    const SpatialWeights weights = build_weights(grid, Contiguity::Queen, true);

    if (!vis.rho) {
      R.skip("lisa", "no visible firms");
    } else {
      std::optional<LisaResult> lisa;
      const std::uint64_t lisa_seed = derive_seed(s.seed, 1);
      R.run("lisa", [&] {
        lisa = local_moran(*vis.rho, weights, LisaOptions{s.permutations, lisa_seed, s.workers});
        save_lisa(R.path("lisa_visible.csv"), *lisa);
        R.summary_["seeds"]["lisa_visible"] = lisa_seed;
      });
      R.run("clusters", [&] {
        vis_clusters = extract_clusters(*vis.rho, *lisa, s.density_percentile, s.p_threshold);
        write_json(R.path("clusters_visible.json"), to_json(*vis_clusters));
        Json cj = Json::array();
        for (const auto& c : vis_clusters->clusters)
          cj.push_back(Json{{"label", c.label}, {"n_cells", c.cells.size()}, {"mass", c.mass},
                            {"centroid", {c.centroid.x, c.centroid.y}}});
        R.summary_["clusters"] = {{"p_threshold", s.p_threshold}, {"density_percentile", s.density_percentile},
                                  {"n_clusters", vis_clusters->clusters.size()}, {"clusters", cj}};
      });
      R.run("dendrogram", [&] {
        const Dendrogram d = build_dendrogram(*vis.rho, *lisa, s.dendrogram_thresholds, s.p_threshold);
        write_json(R.path("dendrogram_visible.json"), to_json(d));
        save_dendrogram_edges(R.path("dendrogram_visible_edges.csv"), d);
        Json br = Json::array();
        for (const auto& b : d.branches) br.push_back(Json{{"name", b.name}, {"appears", b.appears}, {"disappears", b.disappears}});
        R.summary_["dendrogram"] = {{"thresholds", d.thresholds}, {"branches", br}};
      });
      R.run("cluster_robustness", [&] {
        std::ofstream f(R.path("cluster_robustness.csv"));
        f << "p_threshold,density_percentile,n_clusters,n_cells\n";
        Json m = Json::array();
        for (double p : s.robustness_p) {
          for (double q : s.robustness_thresholds) {
            const auto cs = extract_clusters(*vis.rho, *lisa, q, p);
            std::size_t cells = 0;
            for (const auto& c : cs.clusters) cells += c.cells.size();
            f << format_double(p) << ',' << format_double(q) << ',' << cs.clusters.size() << ',' << cells << '\n';
            m.push_back(Json{{"p_threshold", p}, {"density_percentile", q}, {"n_clusters", cs.clusters.size()}});
          }
        }
        R.summary_["cluster_robustness"] = m;
      });
    }

    if (!regc.rho) {
      R.skip("formal_clusters", "no registered commercial firms");
    } else {
      R.run("formal_clusters", [&] {
        const std::uint64_t seed = derive_seed(s.seed, 2);
        const auto lisa = local_moran(*regc.rho, weights, LisaOptions{s.permutations, seed, s.workers});
        save_lisa(R.path("lisa_registered_commercial.csv"), lisa);
        formal_clusters = extract_clusters(*regc.rho, lisa, s.density_percentile, s.p_threshold);
        write_json(R.path("clusters_registered_commercial.json"), to_json(*formal_clusters));
        R.summary_["seeds"]["lisa_registered_commercial"] = seed;
        R.summary_["formal_clusters"] = {{"n_clusters", formal_clusters->clusters.size()}};
      });
    }

    // ---- visible vs registered commercial ---------------------------------
    std::optional<GridField> delta;
    if (!vis.rho || !regc.rho) {
      R.skip("compare", "needs both visible and registered commercial firms");
    } else {
      R.run("compare", [&] {
        delta = delta_density(*vis.rho, *regc.rho);
        save_field(R.path("delta_rho.csv"), *delta);
        Json cj{{"delta_sum", delta->sum()}};
        if (formal_clusters && !formal_clusters->clusters.empty()) {
          const auto prof = radial_profile(*delta, formal_clusters->centroids(), s.bin_width, s.max_dist);
          save_profile(R.path("delta_rho_profile.csv"), prof);
          cj["profile"] = profile_summary(prof);
        } else {
          R.notices_.push_back("compare: no formal clusters, radial profile not computed");
          cj["profile"] = nullptr;
        }
        R.summary_["compare"] = cj;
      });
    }

    // ---- industry structure ------------------------------------------------
    if (!in.data.zones || !in.data.firms) {
      R.skip("econ", "needs zones and a firm table");
    } else if (!delta) {
      R.skip("econ", "needs the delta-rho field");
    } else {
      R.run("econ", [&] {
        const ZoneMap& zones = *in.data.zones;
        FirmTable firms = *in.data.firms;
        for (const auto& z : zones.zones()) firms.add_zone(z.id);
        const auto means = zone_mean(*delta, zones);
        const FirmTable div_table = firms.aggregate(s.diversity_digits);
        save_rca(R.path("rca.csv"), rca(firms.aggregate(s.rca_digits)));

        std::ofstream zf(R.path("zone_table.csv"));
        zf << "zone_id,stratum,population_density,firms,diversity,mean_delta_rho,n_cells\n";
        std::vector<double> stratum, popdens, weight, div, dmean, pd_w, pd_y;
        std::map<std::string, double> delta_by_zone;
        for (std::size_t z = 0; z < zones.size(); ++z) {
          const auto& zone = zones[z];
          const auto fi = firms.zone_index(zone.id);
          const double nf = fi ? static_cast<double>(firms.zone_total(*fi)) : 0.0;
          const std::size_t dv = diversity(div_table, zone.id);
          std::optional<double> density;
          if (zone.attributes.population) density = *zone.attributes.population / (zone.polygon.area() / 1e6);
          zf << csv_escape(zone.id) << ',' << (zone.attributes.stratum ? std::to_string(*zone.attributes.stratum) : "")
             << ',' << (density ? format_double(*density) : "") << ',' << format_double(nf) << ',' << dv << ','
             << (means[z].mean ? format_double(*means[z].mean) : "") << ',' << means[z].n_cells << '\n';
          if (!means[z].mean) continue;
          delta_by_zone[zone.id] = *means[z].mean;
          div.push_back(static_cast<double>(dv));
          dmean.push_back(*means[z].mean);
          weight.push_back(nf);
          stratum.push_back(zone.attributes.stratum ? *zone.attributes.stratum : std::nan(""));
          if (density) {
            popdens.push_back(*density);
            pd_y.push_back(*means[z].mean);
            pd_w.push_back(nf);
          }
        }
        auto drop_nan = [](const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
          std::vector<double> a, b, c;
          for (std::size_t i = 0; i < x.size(); ++i)
            if (!std::isnan(x[i])) {
              a.push_back(x[i]);
              b.push_back(y[i]);
              c.push_back(w[i]);
            }
          return std::tuple{a, b, c};
        };
        const auto [sx, sy, sw] = drop_nan(stratum, dmean, weight);
        Json regs{
            {"delta_vs_stratum", report_or_skip([&] { return least_squares(sx, sy, sw); })},
            {"delta_vs_stratum_unweighted", report_or_skip([&] { return least_squares(sx, sy); })},
            {"delta_vs_population_density", report_or_skip([&] { return least_squares(popdens, pd_y, pd_w); })},
            {"delta_vs_population_density_unweighted", report_or_skip([&] { return least_squares(popdens, pd_y); })},
            {"diversity_vs_delta", report_or_skip([&] { return least_squares(dmean, div, weight); })},
            {"diversity_vs_delta_unweighted", report_or_skip([&] { return least_squares(dmean, div); })}};
        write_json(R.path("regressions.json"), regs);

        const auto sectors = sector_association(firms, delta_by_zone, s.rca_digits);
        save_sector_association(R.path("sector_association.csv"), sectors);
        Json top = Json::array(), bottom = Json::array();
        for (const auto& r : sectors.top(6)) top.push_back(Json{{"industry", r.industry}, {"slope", r.report.slope}, {"p_value", r.report.p_value}});
        for (const auto& r : sectors.bottom(6)) bottom.push_back(Json{{"industry", r.industry}, {"slope", r.report.slope}, {"p_value", r.report.p_value}});
        R.summary_["econ"] = {{"regressions", regs}, {"sectors_top", top}, {"sectors_bottom", bottom},
                              {"sectors_skipped", sectors.skipped.size()}};
      });
    }

    // ---- land use adherence ------------------------------------------------
    if (!in.data.zones) {
      R.skip("adherence", "needs zones");
    } else {
      R.run("adherence", [&] {
        const ZoneMap& zones = *in.data.zones;
        std::vector<std::pair<std::string, std::vector<Point>>> center_sets;
        if (formal_clusters && !formal_clusters->clusters.empty()) center_sets.emplace_back("formal", formal_clusters->centroids());
        if (vis_clusters && !vis_clusters->clusters.empty()) center_sets.emplace_back("visible", vis_clusters->centroids());
        std::ofstream combined(R.path("adherence_profiles.csv"));
        combined << "population,center_set,bin_lo,bin_hi,nonadherence,n_firms\n";
        Json aj = Json::object();
        for (const auto& p : pops) {
          if (p.points->empty()) continue;
          const auto a = nonadherence_by_stratum(*p.points, zones);
          save_adherence(R.path("adherence_" + p.name + ".csv"), a);
          Json pj = to_json(a);
          for (const auto& [set_name, centers] : center_sets) {
            const auto prof = nonadherence_vs_distance(*p.points, zones, centers, s.bin_width, s.max_dist);
            for (std::size_t k = 0; k < prof.n_bins(); ++k)
              combined << p.name << ',' << set_name << ',' << format_double(prof.edges[k]) << ','
                       << format_double(prof.edges[k + 1]) << ',' << (prof.mean[k] ? format_double(*prof.mean[k]) : "")
                       << ',' << format_double(prof.support[k]) << '\n';
            pj["profile_" + set_name] = profile_summary(prof);
          }
          aj[p.name] = pj;
        }
        if (center_sets.empty()) R.notices_.push_back("adherence: no cluster centers, distance profiles not computed");
        R.summary_["adherence"] = aj;
      });
    }
  } catch (...) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    throw;
  }

  // ---- manifest ----------------------------------------------------------
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(tmp))
    if (e.is_regular_file()) files.push_back(e.path().filename().string());
  std::sort(files.begin(), files.end());
  Json file_hashes = Json::object();
  for (const auto& f : files) file_hashes[f] = hex64(fnv1a64(read_text(tmp + "/" + f)));

  Json manifest{{"tool", "urbanscope"},
                {"version", kVersion},
                {"parameters", settings_echo(s)},
                {"source", source_echo(config)},
                {"stages", R.stages_},
                {"notices", R.notices_},
                {"summary", R.summary_},
                {"files", file_hashes}};
  const std::string text = manifest.dump(2) + "\n";
  write_text(tmp + "/manifest.json", text);

  fs::remove_all(out_dir);
  fs::rename(tmp, out_dir);

  PipelineResult res;
  res.output_dir = out_dir;
  res.manifest = std::move(manifest);
  res.manifest_hash = hex64(fnv1a64(text));
  res.notices = R.notices_;
  return res;
}

PipelineResult run_pipeline_file(const std::string& config_path, const PipelineOptions& opts) {
  PipelineOptions o = opts;
  if (o.base_dir.empty()) o.base_dir = fs::path(config_path).parent_path().string();
  return run_pipeline(read_json(config_path), o);
}

}  // namespace urbanscope
