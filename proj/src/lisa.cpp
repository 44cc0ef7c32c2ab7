#include "urbanscope/lisa.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "urbanscope/error.hpp"
#include "urbanscope/parallel.hpp"
#include "urbanscope/random.hpp"

namespace urbanscope {

std::string to_string(Contiguity c) { return c == Contiguity::Queen ? "queen" : "rook"; }

Contiguity contiguity_from_string(const std::string& s) {
  if (s == "queen") return Contiguity::Queen;
  if (s == "rook") return Contiguity::Rook;
  throw InvalidInput("unknown contiguity scheme '" + s + "'");
}

std::string to_string(Quadrant q) {
  switch (q) {
    case Quadrant::HH: return "HH";
    case Quadrant::LL: return "LL";
    case Quadrant::HL: return "HL";
    case Quadrant::LH: return "LH";
  }
  return "LL";
}

Quadrant quadrant_from_string(const std::string& s) {
  if (s == "HH") return Quadrant::HH;
  if (s == "LL") return Quadrant::LL;
  if (s == "HL") return Quadrant::HL;
  if (s == "LH") return Quadrant::LH;
  throw InvalidInput("unknown quadrant '" + s + "'");
}

SpatialWeights::SpatialWeights(const GridSpec& g, Contiguity scheme, bool row_standardized)
    : grid_(g), scheme_(scheme), row_standardized_(row_standardized) {
  validate(g);
  const auto rows = static_cast<std::ptrdiff_t>(g.n_rows);
  const auto cols = static_cast<std::ptrdiff_t>(g.n_cols);
  offsets_.reserve(g.n_cells() + 1);
  offsets_.push_back(0);
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      const std::size_t start = neighbors_.size();
      for (std::ptrdiff_t dr = -1; dr <= 1; ++dr) {
        for (std::ptrdiff_t dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          if (scheme == Contiguity::Rook && dr != 0 && dc != 0) continue;
          const auto rr = r + dr;
          const auto cc = c + dc;
          if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
          neighbors_.push_back({g.index(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)), 1.0});
        }
      }
      const std::size_t k = neighbors_.size() - start;
      if (row_standardized && k > 0)
        for (std::size_t j = start; j < neighbors_.size(); ++j) neighbors_[j].weight = 1.0 / static_cast<double>(k);
      offsets_.push_back(neighbors_.size());
    }
  }
}

SpatialWeights build_weights(const GridSpec& g, Contiguity scheme, bool row_standardize) {
  return SpatialWeights(g, scheme, row_standardize);
}

namespace {

struct Deviations {
  std::vector<double> z;
  double m2 = 0.0;
};

Deviations deviations(const GridField& f) {
  const std::size_t n = f.values.size();
  if (n < 2) throw InvalidInput("local_moran: needs at least two cells");
  const double mean = f.mean();
  Deviations d;
  d.z.resize(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d.z[i] = f.values[i] - mean;
    ss += d.z[i] * d.z[i];
  }
  d.m2 = ss / static_cast<double>(n);
  if (!(d.m2 > 0.0)) throw DegenerateInput("local_moran: constant field");
  return d;
}

bool ties_or_exceeds(double perm, double obs) {
  const double tol = 1e-10 * std::abs(obs);
  return obs >= 0.0 ? perm >= obs - tol : perm <= obs + tol;
}

}  // namespace

LisaResult local_moran(const GridField& f, const SpatialWeights& w, const LisaOptions& opts) {
  if (!(f.grid == w.grid())) throw InvalidInput("local_moran: field and weights are on different grids");
  if (opts.permutations < 99) throw InvalidInput("local_moran: at least 99 permutations required");
  const Deviations dev = deviations(f);
  const std::size_t n = dev.z.size();

  LisaResult out;
  out.grid = f.grid;
  out.local_i.resize(n);
  out.p_value.resize(n);
  out.quadrant.resize(n);
  out.permutations = opts.permutations;
  out.seed = opts.seed;

  parallel_for(n, opts.workers, [&](std::size_t i) {
    const auto row = w.neighbors(i);
    double lag = 0.0;
    for (const auto& nb : row) lag += nb.weight * dev.z[nb.cell];
    const double scale = dev.z[i] / dev.m2;
    const double obs = scale * lag;
    out.local_i[i] = obs;
    const bool high = dev.z[i] > 0.0;
    const bool high_lag = lag > 0.0;
    out.quadrant[i] = high ? (high_lag ? Quadrant::HH : Quadrant::HL) : (high_lag ? Quadrant::LH : Quadrant::LL);

    const std::size_t k = row.size();
    if (k == 0) {
      out.p_value[i] = 1.0;
      return;
    }
    if (k > n - 1) throw InternalError("local_moran: more neighbours than other cells");
    // Draw k distinct cells other than i by rejection; k is at most 8.
    Rng rng(derive_seed(opts.seed, 0x6c697361 /* "lisa" */, i));
    std::vector<std::size_t> picked(k);
    std::size_t extreme = 0;
    for (std::size_t p = 0; p < opts.permutations; ++p) {
      double perm_lag = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        std::size_t c;
        bool fresh;
        do {
          c = static_cast<std::size_t>(rng.below(n - 1));
          if (c >= i) ++c;
          fresh = std::find(picked.begin(), picked.begin() + static_cast<std::ptrdiff_t>(t), c) ==
                  picked.begin() + static_cast<std::ptrdiff_t>(t);
        } while (!fresh);
        picked[t] = c;
        perm_lag += row.first[t].weight * dev.z[c];
      }
      if (ties_or_exceeds(scale * perm_lag, obs)) ++extreme;
    }
    out.p_value[i] = static_cast<double>(extreme + 1) / static_cast<double>(opts.permutations + 1);
  });
  return out;
}

double global_moran(const GridField& f, const SpatialWeights& w) {
  if (!(f.grid == w.grid())) throw InvalidInput("global_moran: field and weights are on different grids");
  const Deviations dev = deviations(f);
  double s0 = 0.0;
  double cross = 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < dev.z.size(); ++i) {
    ss += dev.z[i] * dev.z[i];
    for (const auto& nb : w.neighbors(i)) {
      s0 += nb.weight;
      cross += nb.weight * dev.z[i] * dev.z[nb.cell];
    }
  }
  return static_cast<double>(dev.z.size()) / s0 * cross / ss;
}

std::vector<Point> ClusterSet::centroids() const {
  std::vector<Point> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) out.push_back(c.centroid);
  return out;
}

std::vector<bool> top_cells(const GridField& f, double density_percentile) {
  if (!(density_percentile >= 0.0) || density_percentile > 1.0)
    throw InvalidInput("density percentile must be in [0, 1]");
  const std::size_t n = f.values.size();
  const auto k = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::floor((1.0 - density_percentile) * static_cast<double>(n) + 1e-9)));
  const auto order = rank_cells_descending(f);
  std::vector<bool> top(n, false);
  for (std::size_t r = 0; r < k; ++r) top[order[r]] = true;
  return top;
}

ClusterSet extract_clusters(const GridField& f, const LisaResult& lisa, double density_percentile,
                            double p_threshold) {
  if (!(f.grid == lisa.grid)) throw InvalidInput("extract_clusters: field and LISA result are on different grids");
  if (!(p_threshold > 0.0) || !(p_threshold < 1.0)) throw InvalidInput("p threshold must be in (0, 1)");
  const GridSpec& g = f.grid;
  const std::size_t n = g.n_cells();
  std::vector<bool> eligible = top_cells(f, density_percentile);
  for (std::size_t i = 0; i < n; ++i)
    eligible[i] = eligible[i] && lisa.p_value[i] <= p_threshold && lisa.quadrant[i] == Quadrant::HH;

  ClusterSet out;
  out.grid = g;
  out.density_percentile = density_percentile;
  out.p_threshold = p_threshold;

  std::vector<bool> seen(n, false);
  std::vector<CellIndex> stack;
  for (std::size_t start = 0; start < n; ++start) {
    if (!eligible[start] || seen[start]) continue;
    Cluster cl;
    seen[start] = true;
    stack.push_back(start);
    while (!stack.empty()) {
      const CellIndex cur = stack.back();
      stack.pop_back();
      cl.cells.push_back(cur);
      const Cell c = g.cell(cur);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const auto rr = static_cast<std::ptrdiff_t>(c.row) + dr;
          const auto cc = static_cast<std::ptrdiff_t>(c.col) + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(g.n_rows) ||
              cc >= static_cast<std::ptrdiff_t>(g.n_cols))
            continue;
          const CellIndex nb = g.index(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
          if (eligible[nb] && !seen[nb]) {
            seen[nb] = true;
            stack.push_back(nb);
          }
        }
      }
    }
    std::sort(cl.cells.begin(), cl.cells.end());
    double sx = 0.0, sy = 0.0;
    for (CellIndex i : cl.cells) {
      const Point p = g.center(i);
      cl.mass += f.values[i];
      sx += f.values[i] * p.x;
      sy += f.values[i] * p.y;
    }
    if (cl.mass > 0.0) {
      cl.centroid = {sx / cl.mass, sy / cl.mass, 1.0};
    } else {
      // HH cells carry above-mean values; a zero-mass cluster only arises for
      // fields that are not densities. Fall back to the unweighted centroid.
      sx = sy = 0.0;
      for (CellIndex i : cl.cells) {
        sx += g.center(i).x;
        sy += g.center(i).y;
      }
      const auto m = static_cast<double>(cl.cells.size());
      cl.centroid = {sx / m, sy / m, 1.0};
    }
    out.clusters.push_back(std::move(cl));
  }
  std::stable_sort(out.clusters.begin(), out.clusters.end(),
                   [](const Cluster& a, const Cluster& b) { return a.mass > b.mass; });
  for (std::size_t k = 0; k < out.clusters.size(); ++k) out.clusters[k].label = "C" + std::to_string(k + 1);
  return out;
}

const Branch* Dendrogram::branch(const std::string& name) const {
  for (const auto& b : branches)
    if (b.name == name) return &b;
  return nullptr;
}

std::ptrdiff_t Dendrogram::node_id(std::size_t level, std::size_t cluster) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].level == level && nodes[i].cluster == cluster) return static_cast<std::ptrdiff_t>(i);
  return -1;
}

Dendrogram build_dendrogram(const GridField& f, const LisaResult& lisa, const std::vector<double>& thresholds,
                            double p_threshold) {
  if (thresholds.empty()) throw InvalidInput("build_dendrogram: no thresholds");
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (!(thresholds[i] > thresholds[i - 1]))
      throw InvalidInput("build_dendrogram: thresholds must be strictly ascending");

  Dendrogram d;
  d.thresholds = thresholds;
  for (double q : thresholds) d.levels.push_back(extract_clusters(f, lisa, q, p_threshold));

  const std::size_t n = f.grid.n_cells();
  std::vector<std::ptrdiff_t> prev_owner;  // cell -> node id at previous level
  std::map<std::string, std::size_t> branch_index;
  auto touch_branch = [&](const std::string& name, double q) {
    auto it = branch_index.find(name);
    if (it == branch_index.end()) {
      branch_index.emplace(name, d.branches.size());
      d.branches.push_back({name, q, q});
    } else {
      d.branches[it->second].disappears = q;
    }
  };

  for (std::size_t lv = 0; lv < d.levels.size(); ++lv) {
    const auto& clusters = d.levels[lv].clusters;
    std::vector<std::ptrdiff_t> owner(n, -1);
    std::map<std::ptrdiff_t, std::size_t> children_seen;
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
      DendrogramNode node;
      node.level = lv;
      node.cluster = ci;
      if (lv == 0) {
        node.name = clusters[ci].label;
      } else {
        const auto& cells = clusters[ci].cells;
        const std::ptrdiff_t parent = prev_owner[cells.front()];
        for (CellIndex c : cells)
          if (parent < 0 || prev_owner[c] != parent)
            throw InternalError("build_dendrogram: cluster at threshold " + std::to_string(thresholds[lv]) +
                                " is not nested in a single looser cluster");
        node.parent = parent;
        const std::size_t k = children_seen[parent]++;
        const std::string& pname = d.nodes[static_cast<std::size_t>(parent)].name;
        node.name = k == 0 ? pname : pname + "." + std::to_string(k);
      }
      const auto id = static_cast<std::ptrdiff_t>(d.nodes.size());
      for (CellIndex c : clusters[ci].cells) owner[c] = id;
      touch_branch(node.name, thresholds[lv]);
      d.nodes.push_back(std::move(node));
    }
    prev_owner = std::move(owner);
  }
  return d;
}

}  // namespace urbanscope
