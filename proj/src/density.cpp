#include "urbanscope/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "urbanscope/error.hpp"
#include "urbanscope/parallel.hpp"

namespace urbanscope {

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::Count: return "count";
    case FieldKind::Density: return "density";
    case FieldKind::Delta: return "delta";
    case FieldKind::Statistic: return "statistic";
  }
  return "statistic";
}

FieldKind field_kind_from_string(const std::string& s) {
  if (s == "count") return FieldKind::Count;
  if (s == "density") return FieldKind::Density;
  if (s == "delta") return FieldKind::Delta;
  if (s == "statistic") return FieldKind::Statistic;
  throw InvalidInput("unknown field kind '" + s + "'");
}

GridField::GridField(GridSpec g, std::vector<double> v, FieldKind k) : grid(g), values(std::move(v)), kind(k) {
  validate(grid);
  if (values.size() != grid.n_cells()) throw InvalidInput("field: value count does not match grid");
  for (double x : values)
    if (!std::isfinite(x)) throw InvalidInput("field: non-finite value");
}

double GridField::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

double GridField::mean() const { return values.empty() ? 0.0 : sum() / static_cast<double>(values.size()); }

RasterCounts rasterize_counts(const PointSet& points, const GridSpec& g) {
  validate(g);
  RasterCounts out{GridField(g, FieldKind::Count), 0};
  for (const auto& p : points.points) {
    if (auto c = point_to_cell(p, g)) out.field.values[*c] += p.weight;
    else ++out.out_of_grid;
  }
  return out;
}

GridField kde(const PointSet& points, const GridSpec& g, const KdeOptions& opts) {
  validate(g);
  if (!(opts.bandwidth > 0.0) || !std::isfinite(opts.bandwidth))
    throw InvalidInput("kde: bandwidth must be positive");
  if (!(opts.truncation > 0.0)) throw InvalidInput("kde: truncation must be positive");

  // Bucket in-grid points by cell, keeping input order inside each bucket.
  const std::size_t n = g.n_cells();
  std::vector<std::size_t> bucket_start(n + 1, 0);
  std::vector<CellIndex> cell_of(points.size(), n);
  double mass = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points.points[i];
    if (p.weight < 0.0 || !std::isfinite(p.weight)) throw InvalidInput("kde: point weights must be non-negative");
    if (auto c = point_to_cell(p, g)) {
      cell_of[i] = *c;
      ++bucket_start[*c + 1];
      mass += p.weight;
    }
  }
  if (!(mass > 0.0)) throw InvalidInput("kde: no in-grid point with positive weight");
  std::partial_sum(bucket_start.begin(), bucket_start.end(), bucket_start.begin());
  std::vector<Point> sorted(bucket_start[n]);
  {
    std::vector<std::size_t> fill(bucket_start.begin(), bucket_start.end() - 1);
    for (std::size_t i = 0; i < points.size(); ++i)
      if (cell_of[i] < n) sorted[fill[cell_of[i]]++] = points.points[i];
  }

  const double h = opts.bandwidth;
  const double radius = opts.truncation * h;
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(radius / g.cell_size)) + 1;
  const double inv_2h2 = 1.0 / (2.0 * h * h);
  const auto rows = static_cast<std::ptrdiff_t>(g.n_rows);
  const auto cols = static_cast<std::ptrdiff_t>(g.n_cols);

  GridField out(g, FieldKind::Density);
  parallel_for(n, opts.workers, [&](std::size_t idx) {
    const Cell c = g.cell(idx);
    const Point ctr = g.center(idx);
    const auto r0 = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(c.row) - reach);
    const auto r1 = std::min<std::ptrdiff_t>(rows - 1, static_cast<std::ptrdiff_t>(c.row) + reach);
    const auto c0 = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(c.col) - reach);
    const auto c1 = std::min<std::ptrdiff_t>(cols - 1, static_cast<std::ptrdiff_t>(c.col) + reach);
    double acc = 0.0;
    for (auto r = r0; r <= r1; ++r) {
      for (auto cc = c0; cc <= c1; ++cc) {
        const CellIndex b = g.index(static_cast<std::size_t>(r), static_cast<std::size_t>(cc));
        for (std::size_t k = bucket_start[b]; k < bucket_start[b + 1]; ++k) {
          const Point& p = sorted[k];
          const double dx = p.x - ctr.x;
          const double dy = p.y - ctr.y;
          const double d2 = dx * dx + dy * dy;
          if (d2 > radius * radius) continue;
          acc += p.weight * std::exp(-d2 * inv_2h2);
        }
      }
    }
    out.values[idx] = acc;
  });

  const double total = out.sum();
  if (!(total > 0.0)) throw InvalidInput("kde: density vanished on the grid");
  for (double& v : out.values) v /= total;
  return out;
}

double coefficient_of_variation(const GridField& f) {
  if (f.values.empty()) throw InvalidInput("coefficient_of_variation: empty field");
  const double mean = f.mean();
  if (!(std::abs(mean) > 0.0)) throw InvalidInput("coefficient_of_variation: zero mean");
  double ss = 0.0;
  for (double v : f.values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(f.values.size())) / mean;
}

std::vector<CellIndex> rank_cells_descending(const GridField& f) {
  std::vector<CellIndex> order(f.values.size());
  std::iota(order.begin(), order.end(), CellIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](CellIndex a, CellIndex b) { return f.values[a] > f.values[b]; });
  return order;
}

TopShare top_share(const GridField& density, const GridField& counts, double percentile) {
  if (!(density.grid == counts.grid)) throw InvalidInput("top_share: fields are on different grids");
  if (!(percentile > 0.0) || percentile > 1.0) throw InvalidInput("top_share: percentile must be in (0, 1]");
  const double total = counts.sum();
  if (!(total > 0.0)) throw InvalidInput("top_share: total count must be positive");

  const auto order = rank_cells_descending(density);
  const std::size_t n = order.size();
  TopShare out;
  out.curve.resize(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += counts.values[order[k]];
    out.curve[k] = acc / total;
  }
  const double want = percentile * static_cast<double>(n);
  out.n_selected = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(want - 1e-9)), 1, n);
  out.share = out.curve[out.n_selected - 1];
  return out;
}

}  // namespace urbanscope
