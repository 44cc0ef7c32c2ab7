#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "urbanscope/compare.hpp"
#include "urbanscope/density.hpp"
#include "urbanscope/econ.hpp"
#include "urbanscope/geometry.hpp"
#include "urbanscope/landuse.hpp"
#include "urbanscope/lisa.hpp"
#include "urbanscope/survey.hpp"

namespace urbanscope {

using Json = nlohmann::ordered_json;

// ---- projection ---------------------------------------------------------

// Local equirectangular projection about (lon0, lat0), in metres.
struct Projection {
  double lon0 = 0.0;
  double lat0 = 0.0;

  Point forward(double lon, double lat) const;
};

// ---- point sets -----------------------------------------------------------

enum class PointFormat { XyCsv, LonLatCsv, GridCountsCsv };

PointFormat point_format_from_string(const std::string& s);

struct PointLoadOptions {
  std::optional<GridSpec> grid;            // required for grid_counts_csv
  std::optional<Projection> projection;    // lonlat_csv; default: data centroid
};

struct LoadedPoints {
  PointSet points;
  std::optional<Projection> projection;  // set for lonlat_csv
};

// xy_csv: columns x, y [, weight] [, industry]
// lonlat_csv: columns lon, lat [, weight] [, industry]
// grid_counts_csv: columns row, col, count; each row becomes one weighted
// point at the cell center.
LoadedPoints load_points(const std::string& path, PointFormat format, const PointLoadOptions& opts = {});

void save_points(const std::string& path, const PointSet& points);

// Replaces every point by its cell, one weighted point per non-empty cell
// at the cell center. Out-of-grid points are dropped.
PointSet aggregate_to_cells(const PointSet& points, const GridSpec& g);
void save_grid_counts(const std::string& path, const PointSet& points, const GridSpec& g);

// ---- grid fields ------------------------------------------------------------

Json to_json(const GridSpec& g);
GridSpec grid_from_json(const Json& j);

// Writes `path` as CSV (row, col, value) and the grid header next to it as
// JSON (same stem, .json extension).
void save_field(const std::string& path, const GridField& f);
GridField load_field(const std::string& path);
std::string sidecar_path(const std::string& csv_path);

// ---- firm tables ------------------------------------------------------------

void save_firm_table(const std::string& path, const FirmTable& t);
FirmTable load_firm_table(const std::string& path);

// ---- zones and networks -----------------------------------------------------

// {"zones": [{"id": "...", "rings": [[[x, y], ...], ...],
//             "attributes": {"stratum": 3, "land_use": "commercial_mixed",
//                            "population": 1200, "comuna_id": "..."}}]}
// The first ring is the outer boundary, the rest are holes. With
// "coordinates": "lonlat" the rings are projected with `projection`.
ZoneMap load_zones(const std::string& path, const std::optional<Projection>& projection = {});
ZoneMap zones_from_json(const Json& j, const std::optional<Projection>& projection = {});
Json to_json(const ZoneMap& zones);

// {"nodes": [{"id": 1, "x": .., "y": ..}], "edges": [{"from": 1, "to": 2,
//  "polyline": [[x, y], ...]}]}; polyline is optional.
StreetNetwork load_network(const std::string& path);
StreetNetwork network_from_json(const Json& j);
Json to_json(const StreetNetwork& net);

void save_sample_points(const std::string& path, const std::vector<SamplePoint>& pts);

// ---- analysis outputs -------------------------------------------------------

void save_lisa(const std::string& path, const LisaResult& r);
LisaResult load_lisa(const std::string& path, const GridSpec& g);

Json to_json(const ClusterSet& cs);
ClusterSet clusters_from_json(const Json& j);
Json to_json(const Dendrogram& d);
// parent_name, parent_threshold, child_name, child_threshold, n_cells, mass
void save_dendrogram_edges(const std::string& path, const Dendrogram& d);

void save_profile(const std::string& path, const RadialProfile& p, const std::string& value_column = "mean",
                  const std::string& support_column = "n_cells");

Json to_json(const RegressionReport& r);
Json to_json(const CountMetrics& m);
Json to_json(const OmissionResult& r, bool with_samples = true);
Json to_json(const StratumAdherence& a);
void save_adherence(const std::string& path, const StratumAdherence& a);
void save_rca(const std::string& path, const RcaMatrix& m);
void save_sector_association(const std::string& path, const SectorAssociation& s);

// ---- industry code lists ----------------------------------------------------

using CodeList = std::set<std::string>;

// One 4-digit code per line; '#' starts a comment.
CodeList load_code_list(const std::string& path);
const CodeList& default_street_commerce_codes();

struct FilteredTable {
  FirmTable table;
  std::int64_t retained = 0;
  std::int64_t total = 0;
};

struct FilteredPoints {
  PointSet points;
  std::size_t retained = 0;
  std::size_t total = 0;
};

// Keeps records whose code, truncated to four digits, is listed.
FilteredTable filter_commercial(const FirmTable& t, const CodeList& codes);
FilteredPoints filter_commercial(const PointSet& points, const CodeList& codes);

// ---- misc -------------------------------------------------------------------

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);
Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);

// FNV-1a, 64 bit. Stable across platforms; used for artifact manifests.
std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

}  // namespace urbanscope
