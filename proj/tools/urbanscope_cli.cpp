// urbanscope command line: one subcommand per analysis step, plus `synth`
// for fixture cities and `pipeline` for a full config-driven run.
//
// Exit codes: 0 success, 2 invalid input, 3 stage failure.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "urbanscope/compare.hpp"
#include "urbanscope/csv.hpp"
#include "urbanscope/density.hpp"
#include "urbanscope/econ.hpp"
#include "urbanscope/error.hpp"
#include "urbanscope/io.hpp"
#include "urbanscope/landuse.hpp"
#include "urbanscope/lisa.hpp"
#include "urbanscope/pipeline.hpp"
#include "urbanscope/stats.hpp"
#include "urbanscope/survey.hpp"
#include "urbanscope/synthetic.hpp"

using namespace urbanscope;
namespace fs = std::filesystem;

namespace {

constexpr int kInvalidInput = 2;
constexpr int kStageFailure = 3;

std::string default_output_dir() {
  const char* env = std::getenv("URBANSCOPE_OUTPUT_DIR");
  return env && *env ? env : ".";
}

struct Common {
  std::string out;
  std::uint64_t seed = 12345;
  unsigned workers = 1;
};

std::string out_path(const Common& c, const std::string& name) {
  fs::create_directories(c.out);
  return (fs::path(c.out) / name).string();
}

void report(const std::string& path) { std::cout << "wrote " << path << '\n'; }

void write_report(const Common& c, const std::string& name, const Json& j) {
  const auto p = out_path(c, name);
  write_json(p, j);
  report(p);
}

PointSet read_points(const std::string& path, const std::string& format, const std::optional<GridSpec>& grid) {
  PointLoadOptions o;
  o.grid = grid;
  return load_points(path, point_format_from_string(format), o).points;
}

std::vector<Point> centers_from(const std::string& clusters_json) {
  return clusters_from_json(read_json(clusters_json)).centroids();
}

std::vector<double> column_values(const CsvTable& t, const std::string& name) {
  const std::size_t col = t.require(name);
  std::vector<double> v;
  v.reserve(t.rows());
  for (std::size_t r = 0; r < t.rows(); ++r) v.push_back(t.number(r, col));
  return v;
}

void add_common(CLI::App* app, Common& c, bool with_seed) {
  app->add_option("-o,--out", c.out, "output directory (default: $URBANSCOPE_OUTPUT_DIR or .)");
  app->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1u, 1024u));
  if (with_seed) app->add_option("--seed", c.seed, "random seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"urbanscope: spatial analysis of visible and registered firms"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common c;
  c.out = default_output_dir();

  std::string points, format = "xy_csv", grid_path, field, lisa_path, firms_path, zones_path, landuse_path,
              clusters_path, config_path, network_path, data_path;
  double cell_size = 200.0, bandwidth = 150.0, p_threshold = 0.10, percentile = 0.80;
  std::size_t permutations = 999;
  std::vector<double> bbox, thresholds{0.80, 0.85, 0.90, 0.95, 0.99}, top_pcts{0.01, 0.05, 0.10, 0.20};
  std::string contiguity = "queen";

  std::function<void()> action;

  // ---- density ---------------------------------------------------------
  auto* density = app.add_subcommand("density", "kernel density of a point set on a grid");
  density->add_option("--points", points, "point file")->required();
  density->add_option("--format", format, "xy_csv, lonlat_csv or grid_counts_csv");
  density->add_option("--grid", grid_path, "grid JSON (default: bounding box of the points)");
  density->add_option("--bbox", bbox, "min_x min_y max_x max_y")->expected(4);
  density->add_option("--cell-size", cell_size, "cell size in metres")->check(CLI::PositiveNumber);
  density->add_option("--bandwidth", bandwidth, "kernel bandwidth in metres")->check(CLI::PositiveNumber);
  density->add_option("--top", top_pcts, "top cell fractions to report");
  add_common(density, c, false);
  density->callback([&] {
    action = [&] {
      std::optional<GridSpec> grid;
      if (!grid_path.empty()) grid = grid_from_json(read_json(grid_path));
      const PointSet pts = read_points(points, format, grid);
      if (!grid) grid = build_grid(bbox.empty() ? bounding_box(pts) : BBox{bbox[0], bbox[1], bbox[2], bbox[3]}, cell_size);
      const auto counts = rasterize_counts(pts, *grid);
      const auto rho = kde(pts, *grid, KdeOptions{bandwidth, 8.0, c.workers});
      const auto rp = out_path(c, "rho.csv"), cp = out_path(c, "counts.csv");
      save_field(rp, rho);
      save_field(cp, counts.field);
      report(rp);
      report(cp);
      Json shares = Json::array();
      for (double q : top_pcts) {
        const auto ts = top_share(rho, counts.field, q);
        shares.push_back(Json{{"fraction", q}, {"n_cells", ts.n_selected}, {"share", ts.share}});
      }
      write_report(c, "density_report.json",
                   Json{{"n_points", pts.size()}, {"out_of_grid", counts.out_of_grid}, {"bandwidth", bandwidth},
                        {"cv", coefficient_of_variation(rho)}, {"top_share", shares}, {"grid", to_json(*grid)}});
    };
  });

  // ---- lisa --------------------------------------------------------------
  auto* lisa = app.add_subcommand("lisa", "local Moran's I with permutation p-values");
  lisa->add_option("--field", field, "density field CSV")->required();
  lisa->add_option("--permutations", permutations, "conditional permutations")->check(CLI::Range(99, 1000000));
  lisa->add_option("--contiguity", contiguity, "queen or rook");
  add_common(lisa, c, true);
  lisa->callback([&] {
    action = [&] {
      const auto f = load_field(field);
      const auto w = build_weights(f.grid, contiguity_from_string(contiguity), true);
      const auto r = local_moran(f, w, LisaOptions{permutations, c.seed, c.workers});
      const auto p = out_path(c, "lisa.csv");
      save_lisa(p, r);
      report(p);
      std::cout << "global Moran's I " << global_moran(f, w) << '\n';
    };
  });

  // ---- clusters ----------------------------------------------------------
  auto* clusters = app.add_subcommand("clusters", "HH clusters above a density quantile");
  clusters->add_option("--field", field, "density field CSV")->required();
  clusters->add_option("--lisa", lisa_path, "LISA CSV for the same grid")->required();
  clusters->add_option("--p-threshold", p_threshold, "significance level")->check(CLI::Range(0.0, 1.0));
  clusters->add_option("--density-percentile", percentile, "density quantile")->check(CLI::Range(0.0, 1.0));
  add_common(clusters, c, false);
  clusters->callback([&] {
    action = [&] {
      const auto f = load_field(field);
      const auto cs = extract_clusters(f, load_lisa(lisa_path, f.grid), percentile, p_threshold);
      write_report(c, "clusters.json", to_json(cs));
      for (const auto& cl : cs.clusters)
        std::cout << cl.label << " cells=" << cl.cells.size() << " mass=" << cl.mass << " centroid=(" << cl.centroid.x
                  << ", " << cl.centroid.y << ")\n";
    };
  });

  // ---- dendrogram --------------------------------------------------------
  auto* dendro = app.add_subcommand("dendrogram", "nested clusters over ascending density quantiles");
  dendro->add_option("--field", field, "density field CSV")->required();
  dendro->add_option("--lisa", lisa_path, "LISA CSV for the same grid")->required();
  dendro->add_option("--thresholds", thresholds, "ascending density quantiles");
  dendro->add_option("--p-threshold", p_threshold, "significance level")->check(CLI::Range(0.0, 1.0));
  add_common(dendro, c, false);
  dendro->callback([&] {
    action = [&] {
      const auto f = load_field(field);
      const auto d = build_dendrogram(f, load_lisa(lisa_path, f.grid), thresholds, p_threshold);
      write_report(c, "dendrogram.json", to_json(d));
      const auto e = out_path(c, "dendrogram_edges.csv");
      save_dendrogram_edges(e, d);
      report(e);
    };
  });

  // ---- compare -----------------------------------------------------------
  std::string field_b;
  double bin_width = 250.0, max_dist = 10000.0;
  auto* compare = app.add_subcommand("compare", "delta-rho between two densities, radial and zone profiles");
  compare->add_option("--visible", field, "visible-firm density CSV")->required();
  compare->add_option("--registered", field_b, "registered-commercial density CSV")->required();
  compare->add_option("--centers", clusters_path, "clusters JSON whose centroids anchor the radial profile");
  compare->add_option("--zones", zones_path, "zones JSON for per-zone means");
  compare->add_option("--bin-width", bin_width, "radial bin width in metres")->check(CLI::PositiveNumber);
  compare->add_option("--max-dist", max_dist, "radial profile extent in metres")->check(CLI::PositiveNumber);
  add_common(compare, c, false);
  compare->callback([&] {
    action = [&] {
      const auto d = delta_density(load_field(field), load_field(field_b));
      const auto dp = out_path(c, "delta_rho.csv");
      save_field(dp, d);
      report(dp);
      if (!clusters_path.empty()) {
        const auto pp = out_path(c, "delta_rho_profile.csv");
        save_profile(pp, radial_profile(d, centers_from(clusters_path), bin_width, max_dist), "mean_delta_rho");
        report(pp);
      }
      if (!zones_path.empty()) {
        const auto zp = out_path(c, "zone_delta_rho.csv");
        std::ofstream out(zp);
        out << "zone_id,mean,n_cells\n";
        for (const auto& z : zone_mean(d, load_zones(zones_path)))
          out << csv_escape(z.zone_id) << ',' << (z.mean ? format_double(*z.mean) : "") << ',' << z.n_cells << '\n';
        report(zp);
      }
    };
  });

  // ---- rca ---------------------------------------------------------------
  std::size_t digits = 2;
  std::string zone_delta;
  auto* rca_cmd = app.add_subcommand("rca", "revealed comparative advantage per zone and industry");
  rca_cmd->add_option("--firms", firms_path, "firm table CSV (zone_id, industry_code, count)")->required();
  rca_cmd->add_option("--digits", digits, "industry code digits")->check(CLI::Range(1, 6));
  rca_cmd->add_option("--zone-delta", zone_delta, "per-zone mean delta-rho CSV; adds the sector regressions");
  add_common(rca_cmd, c, false);
  rca_cmd->callback([&] {
    action = [&] {
      const auto t = load_firm_table(firms_path);
      const auto rp = out_path(c, "rca.csv");
      save_rca(rp, rca(t.aggregate(digits)));
      report(rp);
      if (!zone_delta.empty()) {
        const auto zt = CsvTable::read(zone_delta);
        const std::size_t zc = zt.require("zone_id"), mc = zt.require("mean");
        std::map<std::string, double> means;
        for (std::size_t r = 0; r < zt.rows(); ++r)
          if (!zt.cell(r, mc).empty()) means[zt.cell(r, zc)] = zt.number(r, mc);
        const auto sp = out_path(c, "sector_association.csv");
        save_sector_association(sp, sector_association(t, means, digits));
        report(sp);
      }
    };
  });

  // ---- diversity ---------------------------------------------------------
  std::size_t div_digits = 4;
  auto* div_cmd = app.add_subcommand("diversity", "distinct industries per zone");
  div_cmd->add_option("--firms", firms_path, "firm table CSV")->required();
  div_cmd->add_option("--digits", div_digits, "industry code digits")->check(CLI::Range(1, 6));
  add_common(div_cmd, c, false);
  div_cmd->callback([&] {
    action = [&] {
      const auto t = load_firm_table(firms_path).aggregate(div_digits);
      const auto p = out_path(c, "diversity.csv");
      std::ofstream out(p);
      out << "zone_id,diversity,firms\n";
      for (std::size_t z = 0; z < t.n_zones(); ++z)
        out << csv_escape(t.zones()[z]) << ',' << diversity(t, t.zones()[z]) << ',' << t.zone_total(z) << '\n';
      report(p);
    };
  });

  // ---- regress -----------------------------------------------------------
  std::string x_col, y_col, w_col;
  auto* regress = app.add_subcommand("regress", "least squares of y on x with a slope t-test");
  regress->add_option("--data", data_path, "CSV file")->required();
  regress->add_option("--x", x_col, "regressor column")->required();
  regress->add_option("--y", y_col, "response column")->required();
  regress->add_option("--weight", w_col, "weight column (omit for OLS)");
  add_common(regress, c, false);
  regress->callback([&] {
    action = [&] {
      const auto t = CsvTable::read(data_path);
      const auto x = column_values(t, x_col), y = column_values(t, y_col);
      const auto r = w_col.empty() ? least_squares(x, y) : least_squares(x, y, column_values(t, w_col));
      const Json j = to_json(r);
      write_report(c, "regression.json", j);
      std::cout << j.dump(2) << '\n';
    };
  });

  // ---- adherence ---------------------------------------------------------
  auto* adherence = app.add_subcommand("adherence", "share of firms off commercial land, by stratum");
  adherence->add_option("--firms", points, "firm point file")->required();
  adherence->add_option("--format", format, "xy_csv or lonlat_csv");
  adherence->add_option("--zones", zones_path, "zones JSON with strata (and land use)")->required();
  adherence->add_option("--landuse", landuse_path, "separate land-use zones JSON");
  adherence->add_option("--centers", clusters_path, "clusters JSON for the distance profile");
  adherence->add_option("--bin-width", bin_width, "distance bin width in metres")->check(CLI::PositiveNumber);
  adherence->add_option("--max-dist", max_dist, "distance profile extent in metres")->check(CLI::PositiveNumber);
  add_common(adherence, c, false);
  adherence->callback([&] {
    action = [&] {
      const auto firms = read_points(points, format, std::nullopt);
      const auto strata = load_zones(zones_path);
      const auto uses = landuse_path.empty() ? strata : load_zones(landuse_path);
      const auto a = nonadherence_by_stratum(firms, strata, uses);
      const auto p = out_path(c, "adherence.csv");
      save_adherence(p, a);
      report(p);
      if (!clusters_path.empty()) {
        const auto pp = out_path(c, "adherence_profile.csv");
        save_profile(pp, nonadherence_vs_distance(firms, uses, centers_from(clusters_path), bin_width, max_dist),
                     "nonadherence", "firms");
        report(pp);
      }
    };
  });

  // ---- sample-points -----------------------------------------------------
  double spacing = 20.0;
  auto* sample = app.add_subcommand("sample-points", "survey points along a street network");
  sample->add_option("--network", network_path, "network JSON")->required();
  sample->add_option("--spacing", spacing, "minimum spacing in metres")->check(CLI::PositiveNumber);
  add_common(sample, c, false);
  sample->callback([&] {
    action = [&] {
      const auto pts = plan_sample_points(load_network(network_path), spacing);
      const auto p = out_path(c, "sample_points.csv");
      save_sample_points(p, pts);
      report(p);
      std::cout << pts.size() << " sample points\n";
    };
  });

  // ---- eval-detector -----------------------------------------------------
  auto* eval = app.add_subcommand("eval-detector", "count metrics from per-image true and detected counts");
  eval->add_option("--data", data_path, "CSV with truth and predicted columns")->required();
  add_common(eval, c, false);
  eval->callback([&] {
    action = [&] {
      const auto t = CsvTable::read(data_path);
      const std::size_t tc = t.require("truth"), pc = t.require("predicted");
      DetectorEval e;
      for (std::size_t r = 0; r < t.rows(); ++r) {
        e.truth.push_back(t.integer(r, tc));
        e.predicted.push_back(t.integer(r, pc));
      }
      const Json j = to_json(count_metrics(e));
      write_report(c, "detector_metrics.json", j);
      std::cout << j.dump(2) << '\n';
    };
  });

  // ---- robustness --------------------------------------------------------
  OmissionOptions om;
  std::string centers_mode = "bbox";
  auto* robust = app.add_subcommand("robustness", "regional detected/true ratios under random omission");
  robust->add_option("--points", points, "firm point file")->required();
  robust->add_option("--format", format, "xy_csv or lonlat_csv");
  robust->add_option("--keep-prob", om.keep_prob, "probability a firm is detected")->check(CLI::Range(0.0, 1.0));
  robust->add_option("--regions", om.n_regions, "number of random disks")->check(CLI::PositiveNumber);
  robust->add_option("--radius-min", om.radius_min, "smallest disk radius in metres");
  robust->add_option("--radius-max", om.radius_max, "largest disk radius in metres");
  robust->add_option("--centers", centers_mode, "bbox or data");
  add_common(robust, c, true);
  robust->callback([&] {
    action = [&] {
      if (centers_mode != "bbox" && centers_mode != "data") throw InvalidInput("--centers must be bbox or data");
      om.centers = centers_mode == "bbox" ? RegionCenters::BoundingBox : RegionCenters::DataPoints;
      om.seed = c.seed;
      om.workers = c.workers;
      const auto r = omission_robustness(read_points(points, format, std::nullopt), om);
      write_report(c, "robustness.json", to_json(r));
      std::cout << "mean " << r.mean << " std " << r.std << '\n';
    };
  });

  // ---- synth -------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate a synthetic city dataset");
  synth->add_option("--config", config_path, "synthetic city JSON (default: two blobs 6 km apart)");
  add_common(synth, c, true);
  synth->callback([&] {
    action = [&] {
      SyntheticCityConfig cfg;
      if (!config_path.empty()) {
        cfg = synthetic_config_from_json(read_json(config_path));
      } else {
        cfg.blobs = {{{3000, 4000}, 400, 5000, Population::Both}, {{9000, 4000}, 400, 5000, Population::Both}};
        cfg.background_visible = cfg.background_registered = 2000;
        cfg.zone_cols = 6;
        cfg.zone_rows = 4;
      }
      if (synth->count("--seed")) cfg.seed = c.seed;
      save_dataset(c.out, generate_synthetic_city(cfg));
      write_json(out_path(c, "synthetic_config.json"), to_json(cfg));
      std::cout << "wrote dataset to " << c.out << '\n';
    };
  });

  // ---- pipeline ----------------------------------------------------------
  auto* pipe = app.add_subcommand("pipeline", "run every stage the config's inputs allow");
  pipe->add_option("--config", config_path, "pipeline config JSON")->required();
  pipe->add_option("-o,--out", c.out, "output directory (default: config output_dir, then $URBANSCOPE_OUTPUT_DIR)");
  pipe->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1u, 1024u));
  pipe->callback([&] {
    action = [&] {
      PipelineOptions o;
      if (pipe->count("--out")) o.output_dir = c.out;
      if (pipe->count("--workers")) o.workers = c.workers;
      const auto r = run_pipeline_file(config_path, o);
      for (const auto& n : r.notices) std::cerr << "note: " << n << '\n';
      std::cout << "wrote " << r.output_dir << " (manifest " << r.manifest_hash << ")\n";
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInvalidInput;
  }

  try {
    action();
    return 0;
  } catch (const StageFailure& e) {
    std::cerr << "error: stage " << e.stage() << " failed: " << e.what() << '\n';
    return kStageFailure;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kStageFailure;
  }
}
