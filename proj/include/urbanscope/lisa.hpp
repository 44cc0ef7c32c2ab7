#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "urbanscope/density.hpp"
#include "urbanscope/geometry.hpp"

namespace urbanscope {

enum class Contiguity { Queen, Rook };

std::string to_string(Contiguity c);
Contiguity contiguity_from_string(const std::string& s);

struct Neighbor {
  CellIndex cell = 0;
  double weight = 1.0;
};

// Lattice contiguity weights stored as compressed rows.
class SpatialWeights {
public:
  SpatialWeights(const GridSpec& g, Contiguity scheme, bool row_standardized);

  const GridSpec& grid() const { return grid_; }
  Contiguity scheme() const { return scheme_; }
  bool row_standardized() const { return row_standardized_; }
  std::size_t size() const { return offsets_.size() - 1; }

  struct Row {
    const Neighbor* first;
    const Neighbor* last;
    const Neighbor* begin() const { return first; }
    const Neighbor* end() const { return last; }
    std::size_t size() const { return static_cast<std::size_t>(last - first); }
  };
  Row neighbors(CellIndex i) const {
    return {neighbors_.data() + offsets_[i], neighbors_.data() + offsets_[i + 1]};
  }

private:
  GridSpec grid_;
  Contiguity scheme_;
  bool row_standardized_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> neighbors_;
};

// Queen = 8-neighbourhood, rook = 4-neighbourhood, clipped at the grid edge.
SpatialWeights build_weights(const GridSpec& g, Contiguity scheme = Contiguity::Queen,
                             bool row_standardize = true);

enum class Quadrant { HH, LL, HL, LH };

std::string to_string(Quadrant q);
Quadrant quadrant_from_string(const std::string& s);

struct LisaResult {
  GridSpec grid;
  std::vector<double> local_i;
  std::vector<double> p_value;
  std::vector<Quadrant> quadrant;
  std::size_t permutations = 0;
  std::uint64_t seed = 0;

  bool operator==(const LisaResult&) const = default;
};

struct LisaOptions {
  std::size_t permutations = 999;
  std::uint64_t seed = 12345;
  unsigned workers = 1;
};

// Local Moran's I with conditional permutation inference.
//
// With z_i = x_i - mean(x) and m2 = sum(z^2) / n,
//   I_i = (z_i / m2) * sum_j w_ij z_j.
// For each cell the remaining n - 1 values are reshuffled over the other
// cells and I_i recomputed. The pseudo p-value is one-sided in the direction
// of the observed statistic:
//   p_i = (1 + #{I_perm >= I_i}) / (1 + permutations)   if I_i >= 0
//   p_i = (1 + #{I_perm <= I_i}) / (1 + permutations)   otherwise.
// Cell i draws from a stream seeded by (seed, i), so results do not depend
// on the worker count.
LisaResult local_moran(const GridField& f, const SpatialWeights& w, const LisaOptions& opts = {});

// Global Moran's I: (n / S0) * sum_ij w_ij z_i z_j / sum_i z_i^2.
double global_moran(const GridField& f, const SpatialWeights& w);

struct Cluster {
  std::string label;
  std::vector<CellIndex> cells;  // ascending
  Point centroid;                // density-weighted mean of cell centers
  double mass = 0.0;             // summed field value
};

struct ClusterSet {
  GridSpec grid;
  double density_percentile = 0.0;
  double p_threshold = 0.0;
  std::vector<Cluster> clusters;  // descending mass, labelled C1, C2, ...

  std::vector<Point> centroids() const;
};

// Cells whose density is at or above the `density_percentile` quantile of the
// grid (the top floor((1 - q) * n) cells by rank, ties by cell index).
std::vector<bool> top_cells(const GridField& f, double density_percentile);

// Connected components (queen adjacency) of the cells that are dense enough,
// significant at p_threshold, and high-high.
ClusterSet extract_clusters(const GridField& f, const LisaResult& lisa, double density_percentile,
                            double p_threshold);

struct DendrogramNode {
  std::size_t level = 0;    // index into thresholds
  std::size_t cluster = 0;  // index into levels[level].clusters
  std::string name;
  std::ptrdiff_t parent = -1;  // node id at level - 1, or -1 at the loosest level
};

struct Branch {
  std::string name;
  double appears = 0.0;     // loosest threshold at which the branch exists
  double disappears = 0.0;  // strictest threshold at which it still exists
};

// Clusters across ascending density thresholds. Each cluster at a stricter
// threshold is a subset of exactly one cluster at the previous threshold.
struct Dendrogram {
  std::vector<double> thresholds;
  std::vector<ClusterSet> levels;
  std::vector<DendrogramNode> nodes;
  std::vector<Branch> branches;

  const Branch* branch(const std::string& name) const;
  std::ptrdiff_t node_id(std::size_t level, std::size_t cluster) const;
};

// Names are assigned by descending mass at the loosest threshold. Going
// stricter, the heaviest child keeps its parent's name and further children
// get "<parent>.<k>".
Dendrogram build_dendrogram(const GridField& f, const LisaResult& lisa, const std::vector<double>& thresholds,
                            double p_threshold);

}  // namespace urbanscope
