#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "urbanscope/geometry.hpp"

namespace urbanscope {

enum class FieldKind { Count, Density, Delta, Statistic };

std::string to_string(FieldKind k);
FieldKind field_kind_from_string(const std::string& s);

// One scalar per grid cell, row-major in the grid's index order.
struct GridField {
  GridSpec grid;
  std::vector<double> values;
  FieldKind kind = FieldKind::Statistic;

  GridField() = default;
  GridField(GridSpec g, FieldKind k) : grid(g), values(g.n_cells(), 0.0), kind(k) {}
  GridField(GridSpec g, std::vector<double> v, FieldKind k);

  double sum() const;
  double mean() const;
};

struct RasterCounts {
  GridField field;
  std::size_t out_of_grid = 0;
};

// Sum of point weights per cell.
RasterCounts rasterize_counts(const PointSet& points, const GridSpec& g);

struct KdeOptions {
  double bandwidth = 150.0;
  // Kernel support radius in bandwidths. At 8 the discarded tail is below
  // exp(-32) of the peak, far inside the 1e-10 equivalence bound.
  double truncation = 8.0;
  unsigned workers = 1;
};

// Gaussian KDE evaluated at cell centers, normalized to sum to one. Only
// in-grid points contribute. Each cell sums its contributions in a fixed
// order, so the result is bit-identical for any worker count.
GridField kde(const PointSet& points, const GridSpec& g, const KdeOptions& opts = {});

// Population standard deviation over mean, over all cells.
double coefficient_of_variation(const GridField& f);

struct TopShare {
  double share = 0.0;             // count share of the selected cells
  std::size_t n_selected = 0;     // ceil(percentile * n_cells)
  std::vector<double> curve;      // curve[k] = share of the k + 1 densest cells
};

// Cells ranked by density (descending, ties by cell index); returns the share
// of total count held by the top `percentile` fraction of cells.
TopShare top_share(const GridField& density, const GridField& counts, double percentile);

// Cell indices sorted by value descending, ties by ascending index.
std::vector<CellIndex> rank_cells_descending(const GridField& f);

}  // namespace urbanscope
