#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "urbanscope/csv.hpp"
#include "urbanscope/error.hpp"
#include "urbanscope/io.hpp"
#include "urbanscope/synthetic.hpp"

using namespace urbanscope;
namespace fs = std::filesystem;

namespace {

std::string tmp_file(const std::string& name) {
  fs::create_directories(URBANSCOPE_TEST_TMP);
  return std::string(URBANSCOPE_TEST_TMP) + "/" + name;
}

CsvTable parse_text(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  return CsvTable::parse(in, name);
}

std::string write(const std::string& name, const std::string& text) {
  const auto p = tmp_file(name);
  write_text(p, text);
  return p;
}

}  // namespace

TEST_CASE("csv parsing") {
  const auto t = parse_text("\xEF\xBB\xBFx,\"name, quoted\",y\r\n1,\"a \"\"b\"\"\",2\r\n\r\n3,c,4\n", "mem");
  CHECK(t.header().size() == 3);
  CHECK(t.rows() == 2);
  CHECK(t.cell(0, 1) == "a \"b\"");
  CHECK(t.column("name, quoted") == 1);
  CHECK_THROWS_AS(parse_text("a,b\n1,2,3\n", "mem"), ParseError);
  try {
    parse_text("a,b\n1,2\n1,2,3\n", "mem");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(std::stod(format_double(0.1)) == 0.1);
}

TEST_CASE("load_points formats") {
  const auto xy = load_points(write("xy.csv", "x,y,weight,industry\n1,2,3,4711\n5,6,1,5611\n"), PointFormat::XyCsv);
  REQUIRE(xy.points.size() == 2);
  CHECK(xy.points.points[0].weight == 3.0);
  CHECK(xy.points.industry[1] == "5611");

  const auto ll = load_points(write("ll.csv", "lon,lat\n-75.57,6.24\n-75.56,6.25\n"), PointFormat::LonLatCsv);
  REQUIRE(ll.projection);
  CHECK(ll.points.points[0].x + ll.points.points[1].x == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(ll.points.points[1].y - ll.points.points[0].y == doctest::Approx(1111.95).epsilon(1e-3));

  const GridSpec g{0, 0, 200, 3, 2};
  PointLoadOptions o;
  o.grid = g;
  const auto gc = load_points(write("gc.csv", "row,col,count\n1,2,7\n0,0,1\n"), PointFormat::GridCountsCsv, o);
  REQUIRE(gc.points.size() == 2);
  CHECK(gc.points.points[0].x == 500.0);
  CHECK(gc.points.points[0].y == 300.0);
  CHECK(gc.points.total_weight() == 8.0);
  CHECK_THROWS_AS(load_points(write("gc2.csv", "row,col,count\n5,0,1\n"), PointFormat::GridCountsCsv, o), InvalidInput);
  CHECK_THROWS_AS(load_points(tmp_file("gc.csv"), PointFormat::GridCountsCsv), InvalidInput);

  CHECK_THROWS_AS(point_format_from_string("shapefile"), InvalidInput);
  CHECK_THROWS_AS(load_points(tmp_file("missing.csv"), PointFormat::XyCsv), InvalidInput);
  CHECK_THROWS_AS(load_points(write("bad.csv", "x,y\n1,abc\n"), PointFormat::XyCsv), ParseError);
}

TEST_CASE("missing column is named in the error") {
  const auto p = write("nolat.csv", "lon,latitude\n1,2\n");
  try {
    load_points(p, PointFormat::LonLatCsv);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("lat") != std::string::npos);
  }
}

TEST_CASE("field and lisa round trips") {
  const GridSpec g{10, 20, 200, 4, 3};
  GridField f(g, FieldKind::Density);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = 1.0 / 3.0 + static_cast<double>(i) * 1e-7;
  save_field(tmp_file("f.csv"), f);
  const auto back = load_field(tmp_file("f.csv"));
  CHECK(back.grid == g);
  CHECK(back.kind == FieldKind::Density);
  CHECK(back.values == f.values);

  LisaResult r;
  r.grid = g;
  r.local_i.assign(12, 0.25);
  r.p_value.assign(12, 0.5);
  r.quadrant.assign(12, Quadrant::HH);
  r.quadrant[3] = Quadrant::LH;
  r.permutations = 99;
  r.seed = 7;
  save_lisa(tmp_file("l.csv"), r);
  CHECK(load_lisa(tmp_file("l.csv"), g) == r);
}

TEST_CASE("firm table, zones and network round trips") {
  const FirmTable t({{"A", "4711", 2}, {"B", "5611", 3}});
  save_firm_table(tmp_file("firms.csv"), t);
  const auto t2 = load_firm_table(tmp_file("firms.csv"));
  CHECK(t2.total() == 5);
  CHECK(t2.count(*t2.zone_index("B"), *t2.industry_index("5611")) == 3);

  const Json zj = Json::parse(R"({"zones":[{"id":"a","rings":[[[0,0],[10,0],[10,10],[0,10]]],
    "attributes":{"stratum":2,"land_use":"commercial_mixed","population":100}}]})");
  const auto zones = zones_from_json(zj);
  CHECK(zones.size() == 1);
  CHECK(zones.zones()[0].attributes.stratum == 2);
  const auto z2 = zones_from_json(to_json(zones));
  CHECK(z2.zones()[0].attributes.land_use == LandUse::CommercialMixed);
  CHECK(z2.zones()[0].polygon.area() == doctest::Approx(100.0));
  CHECK_THROWS_AS(zones_from_json(Json::parse(R"({"zones":[{"id":"a","rings":[[[0,0],[1,1]]]}]})")), InvalidInput);

  const Json nj = Json::parse(R"({"nodes":[{"id":1,"x":0,"y":0},{"id":2,"x":30,"y":40}],"edges":[{"from":1,"to":2}]})");
  const auto net = network_from_json(nj);
  CHECK(net.edges()[0].length == doctest::Approx(50.0));
  CHECK(network_from_json(to_json(net)).edges()[0].length == doctest::Approx(50.0));
}

TEST_CASE("commercial filter") {
  CodeList codes{"4711", "5611"};
  const FirmTable t({{"A", "471101", 2}, {"A", "1011", 5}, {"B", "5611", 1}});
  const auto f = filter_commercial(t, codes);
  CHECK(f.retained == 3);
  CHECK(f.total == 8);
  CHECK(f.table.n_industries() == 2);

  PointSet p;
  p.points = {{0, 0}, {1, 1}, {2, 2}};
  p.industry = {"4711", "0111", "56110"};
  const auto fp = filter_commercial(p, codes);
  CHECK(fp.retained == 2);
  CHECK(fp.points.industry[1] == "56110");

  const auto& defaults = default_street_commerce_codes();
  CHECK(defaults.count("4711") == 1);
  CHECK(defaults.count("0111") == 0);
  CHECK(load_code_list(write("codes.txt", "# retail\n4711\n\n5611 # food\n")).size() == 2);
  CHECK_THROWS_AS(load_code_list(write("codes_bad.txt", "47x1\n")), InvalidInput);
}

TEST_CASE("synthetic city is deterministic and background is flat") {
  SyntheticCityConfig c;
  c.extent = {0, 0, 8000, 8000};
  c.background_visible = 20000;
  c.background_registered = 500;
  c.zone_cols = 2;
  c.zone_rows = 2;
  c.seed = 42;
  const auto a = generate_synthetic_city(c);
  const auto b = generate_synthetic_city(c);
  REQUIRE(a.visible.size() == 20000);
  for (std::size_t i = 0; i < a.visible.size(); ++i) {
    REQUIRE(a.visible.points[i].x == b.visible.points[i].x);
    REQUIRE(a.visible.points[i].y == b.visible.points[i].y);
  }
  REQUIRE(a.firms);
  CHECK(a.firms->total() == 500);
  CHECK(a.zones->size() == 4);

  const auto rho = kde(a.visible, a.grid, KdeOptions{});
  CHECK(coefficient_of_variation(rho) < 0.3);

  const auto cfg2 = synthetic_config_from_json(to_json(c));
  CHECK(cfg2.background_visible == c.background_visible);
  CHECK(cfg2.seed == 42);

  c.seed = 43;
  CHECK(generate_synthetic_city(c).visible.points[0].x != a.visible.points[0].x);

  const auto dir = tmp_file("dataset");
  save_dataset(dir, a);
  CHECK(fs::exists(dir + "/visible.csv"));
  CHECK(fs::exists(dir + "/zones.json"));
  CHECK(load_points(dir + "/visible.csv", PointFormat::XyCsv).points.size() == 20000);
}

TEST_CASE("fnv1a64") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}
