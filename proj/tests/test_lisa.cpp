#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "urbanscope/error.hpp"
#include "urbanscope/lisa.hpp"
#include "urbanscope/random.hpp"
#include "urbanscope/synthetic.hpp"

using namespace urbanscope;

namespace {

GridField blob_field(const GridSpec& g, const std::vector<std::pair<Point, double>>& blobs, std::uint64_t seed,
                     std::size_t background = 300) {
  SyntheticCityConfig cfg;
  cfg.extent = {g.origin_x, g.origin_y, g.max_x(), g.max_y()};
  cfg.cell_size = g.cell_size;
  for (const auto& [c, count] : blobs) cfg.blobs.push_back({c, 300.0, static_cast<std::size_t>(count), Population::Visible});
  cfg.background_visible = background;
  cfg.seed = seed;
  const auto city = generate_synthetic_city(cfg);
  return kde(city.visible, g);
}

bool contains(const Cluster& c, CellIndex i) { return std::binary_search(c.cells.begin(), c.cells.end(), i); }

}  // namespace

TEST_CASE("build_weights neighbour counts on a 3x3 grid") {
  const GridSpec g{0, 0, 200, 3, 3};
  const auto queen = build_weights(g, Contiguity::Queen, false);
  CHECK(queen.neighbors(g.index(0, 0)).size() == 3);
  CHECK(queen.neighbors(g.index(0, 1)).size() == 5);
  CHECK(queen.neighbors(g.index(1, 1)).size() == 8);
  const auto rook = build_weights(g, Contiguity::Rook, false);
  CHECK(rook.neighbors(g.index(1, 1)).size() == 4);
  CHECK(rook.neighbors(g.index(0, 0)).size() == 2);

  const auto std_queen = build_weights(g, Contiguity::Queen, true);
  for (const auto& nb : std_queen.neighbors(0)) CHECK(nb.weight == doctest::Approx(1.0 / 3.0));
  for (std::size_t i = 0; i < g.n_cells(); ++i) {
    double s = 0.0;
    for (const auto& nb : std_queen.neighbors(i)) {
      s += nb.weight;
      CHECK(nb.cell != i);
    }
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
  // Symmetric neighbour relation.
  for (std::size_t i = 0; i < g.n_cells(); ++i)
    for (const auto& nb : queen.neighbors(i)) {
      bool back = false;
      for (const auto& nb2 : queen.neighbors(nb.cell)) back = back || nb2.cell == i;
      CHECK(back);
    }
}

TEST_CASE("local_moran rejects a constant field") {
  const GridSpec g{0, 0, 200, 4, 4};
  GridField f(g, std::vector<double>(16, 3.0), FieldKind::Density);
  CHECK_THROWS_AS(local_moran(f, build_weights(g)), DegenerateInput);
  GridField ok(g, FieldKind::Density);
  ok.values[3] = 1.0;
  CHECK_THROWS_AS(local_moran(ok, build_weights(g), {50, 1, 1}), InvalidInput);
}

TEST_CASE("checkerboard gives negative local association everywhere") {
  const GridSpec g{0, 0, 200, 4, 4};
  GridField f(g, FieldKind::Statistic);
  for (std::size_t i = 0; i < 16; ++i) f.values[i] = static_cast<double>((g.cell(i).row + g.cell(i).col) % 2);
  const auto w = build_weights(g, Contiguity::Rook, true);
  const auto res = local_moran(f, w, {199, 3, 1});
  const auto ref = oracle::local_moran_formula(f.values, oracle::dense_weights(4, 4, false, true));
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(res.local_i[i] < 0.0);
    CHECK(std::abs(res.local_i[i] - ref[i]) <= 1e-12);
    CHECK((res.quadrant[i] == Quadrant::HL || res.quadrant[i] == Quadrant::LH));
  }
}

TEST_CASE("two-cell grid has a single conditional arrangement") {
  const GridSpec g{0, 0, 200, 2, 1};
  GridField f(g, {0.0, 1.0}, FieldKind::Statistic);
  const auto res = local_moran(f, build_weights(g, Contiguity::Queen, true), {999, 42, 1});
  CHECK(res.p_value[0] == 1.0);
  CHECK(res.p_value[1] == 1.0);
}

TEST_CASE("local_moran p-values lie in (0, 1] and are deterministic in the seed") {
  const GridSpec g{0, 0, 200, 12, 9};
  Rng rng(17);
  GridField f(g, FieldKind::Statistic);
  for (double& v : f.values) v = rng.uniform();
  const auto w = build_weights(g);
  const auto a = local_moran(f, w, {199, 5, 1});
  const auto b = local_moran(f, w, {199, 5, 4});
  CHECK(a == b);
  const auto c = local_moran(f, w, {199, 6, 1});
  CHECK(a.p_value != c.p_value);
  for (double p : a.p_value) {
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
    // (1 + k) / (1 + perms) for integer k.
    const double k = p * 200.0 - 1.0;
    CHECK(std::abs(k - std::round(k)) < 1e-9);
  }
}

TEST_CASE("mean local I equals global Moran's I") {
  Rng rng(23);
  for (int t = 0; t < 5; ++t) {
    const GridSpec g{0, 0, 200, 7 + static_cast<std::size_t>(t), 5};
    GridField f(g, FieldKind::Statistic);
    for (double& v : f.values) v = rng.uniform(-2, 5);
    const auto w = build_weights(g, Contiguity::Queen, true);
    const auto res = local_moran(f, w, {99, 1, 1});
    double mean_i = 0.0;
    for (double v : res.local_i) mean_i += v;
    mean_i /= static_cast<double>(res.local_i.size());
    const double ref = oracle::global_moran_formula(f.values, oracle::dense_weights(5, g.n_cols, true, true));
    CHECK(std::abs(mean_i - ref) <= 1e-10);
    CHECK(std::abs(global_moran(f, w) - ref) <= 1e-10);
  }
}

TEST_CASE("Monte-Carlo p-values approach exact enumeration on a tiny grid") {
  const GridSpec g{0, 0, 200, 5, 1};
  GridField f(g, {3.0, 1.0, 4.0, 9.0, 7.5}, FieldKind::Statistic);
  const auto res = local_moran(f, build_weights(g, Contiguity::Rook, true), {50000, 8, 1});
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(res.p_value[i] - oracle::exact_lisa_p(f.values, i)) <= 0.02);
}

TEST_CASE("top_cells selects by quantile") {
  const GridSpec g{0, 0, 200, 10, 1};
  GridField f(g, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, FieldKind::Density);
  auto top = top_cells(f, 0.8);
  CHECK(std::count(top.begin(), top.end(), true) == 2);
  CHECK(top[9]);
  CHECK(top[8]);
  top = top_cells(f, 1.0);
  CHECK(std::count(top.begin(), top.end(), true) == 0);
  top = top_cells(f, 0.0);
  CHECK(std::count(top.begin(), top.end(), true) == 10);
}

TEST_CASE("extract_clusters finds one cluster per blob") {
  const auto g = build_grid({0, 0, 8000, 6000}, 200);
  const Point a{2000, 3000}, b{6000, 3000};
  const auto f = blob_field(g, {{a, 3000}, {b, 3000}}, 1);
  const auto lisa = local_moran(f, build_weights(g), {499, 2, 1});
  const auto cs = extract_clusters(f, lisa, 0.8, 0.1);
  REQUIRE(cs.clusters.size() == 2);
  const auto ca = *point_to_cell(a, g);
  const auto cb = *point_to_cell(b, g);
  CHECK(((contains(cs.clusters[0], ca) && contains(cs.clusters[1], cb)) ||
         (contains(cs.clusters[0], cb) && contains(cs.clusters[1], ca))));
  CHECK(cs.clusters[0].mass >= cs.clusters[1].mass);
  CHECK(cs.clusters[0].label == "C1");
  // Centroids near the blob centers.
  for (const auto& c : cs.clusters)
    CHECK(std::min(distance(c.centroid, a), distance(c.centroid, b)) < 200.0);

  CHECK(extract_clusters(f, lisa, 1.0, 0.1).clusters.empty());
}

TEST_CASE("single central blob yields one cluster holding the peak") {
  const auto g = build_grid({0, 0, 6000, 6000}, 200);
  const auto f = blob_field(g, {{{3000, 3000}, 3000}}, 4);
  const auto lisa = local_moran(f, build_weights(g), {499, 9, 1});
  const auto cs = extract_clusters(f, lisa, 0.8, 0.1);
  REQUIRE(cs.clusters.size() == 1);
  const auto peak = static_cast<CellIndex>(std::max_element(f.values.begin(), f.values.end()) - f.values.begin());
  CHECK(contains(cs.clusters[0], peak));
}

TEST_CASE("cluster area shrinks monotonically with the density threshold") {
  const auto g = build_grid({0, 0, 8000, 6000}, 200);
  const auto f = blob_field(g, {{{2000, 3000}, 3000}, {{6000, 3000}, 1500}}, 12);
  const auto lisa = local_moran(f, build_weights(g), {499, 3, 1});
  std::set<CellIndex> looser;
  bool first = true;
  for (double q : {0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99}) {
    std::set<CellIndex> cells;
    for (const auto& c : extract_clusters(f, lisa, q, 0.1).clusters) cells.insert(c.cells.begin(), c.cells.end());
    if (!first) CHECK(std::includes(looser.begin(), looser.end(), cells.begin(), cells.end()));
    looser = cells;
    first = false;
  }
}

TEST_CASE("dendrogram: weak blob disappears first") {
  const auto g = build_grid({0, 0, 8000, 6000}, 200);
  const Point strong{2000, 3000}, weak{6000, 3000};
  const auto f = blob_field(g, {{strong, 4000}, {weak, 1200}}, 21);
  const auto lisa = local_moran(f, build_weights(g), {499, 4, 1});
  const auto d = build_dendrogram(f, lisa, {0.80, 0.85, 0.90, 0.95, 0.99}, 0.1);
  REQUIRE(d.levels.front().clusters.size() == 2);
  // C1 is the heavier (strong) blob at the loosest threshold.
  CHECK(distance(d.levels.front().clusters[0].centroid, strong) < 300.0);
  const Branch* a = d.branch("C1");
  const Branch* b = d.branch("C2");
  REQUIRE(a);
  REQUIRE(b);
  CHECK(b->disappears < a->disappears);
  CHECK(a->disappears == 0.99);
}

TEST_CASE("dendrogram: a two-peak blob fragments at stricter thresholds") {
  const auto g = build_grid({0, 0, 6000, 6000}, 200);
  const auto f = blob_field(g, {{{2500, 3000}, 3000}, {{3700, 3000}, 3000}}, 8, 200);
  const auto lisa = local_moran(f, build_weights(g), {499, 5, 1});
  const auto d = build_dendrogram(f, lisa, {0.80, 0.90, 0.95, 0.97, 0.98, 0.99}, 0.1);
  CHECK(d.levels.front().clusters.size() == 1);
  std::size_t max_children = 0;
  for (const auto& n : d.nodes) {
    std::size_t kids = 0;
    for (const auto& m : d.nodes) kids += m.parent >= 0 && d.nodes[static_cast<std::size_t>(m.parent)].name == n.name &&
                                          d.nodes[static_cast<std::size_t>(m.parent)].level == n.level;
    max_children = std::max(max_children, kids);
  }
  CHECK(max_children == 2);
  CHECK(d.levels.back().clusters.size() == 2);
}

TEST_CASE("dendrogram nesting and single-threshold case") {
  const auto g = build_grid({0, 0, 8000, 6000}, 200);
  const auto f = blob_field(g, {{{2000, 3000}, 3000}, {{6000, 3000}, 2000}}, 30);
  const auto lisa = local_moran(f, build_weights(g), {499, 6, 1});
  const auto flat = build_dendrogram(f, lisa, {0.8}, 0.1);
  CHECK(flat.nodes.size() == flat.levels[0].clusters.size());
  for (const auto& n : flat.nodes) CHECK(n.parent == -1);

  const auto d = build_dendrogram(f, lisa, {0.80, 0.85, 0.90, 0.95, 0.99}, 0.1);
  for (const auto& n : d.nodes) {
    if (n.parent < 0) continue;
    const auto& parent = d.nodes[static_cast<std::size_t>(n.parent)];
    CHECK(parent.level + 1 == n.level);
    const auto& pc = d.levels[parent.level].clusters[parent.cluster].cells;
    const auto& cc = d.levels[n.level].clusters[n.cluster].cells;
    CHECK(std::includes(pc.begin(), pc.end(), cc.begin(), cc.end()));
  }
  CHECK_THROWS_AS(build_dendrogram(f, lisa, {0.9, 0.8}, 0.1), InvalidInput);
}
