#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "urbanscope/stats.hpp"

namespace urbanscope {

struct FirmRecord {
  std::string zone_id;
  std::string industry;  // digit string; its length is the digit level
  std::int64_t count = 0;
};

// Firm counts cross-classified by zone and industry. Zones and industries
// keep first-seen order; repeated (zone, industry) records accumulate.
class FirmTable {
public:
  FirmTable() = default;
  explicit FirmTable(const std::vector<FirmRecord>& records);

  const std::vector<std::string>& zones() const { return zones_; }
  const std::vector<std::string>& industries() const { return industries_; }
  std::size_t n_zones() const { return zones_.size(); }
  std::size_t n_industries() const { return industries_.size(); }

  std::int64_t count(std::size_t zone, std::size_t industry) const { return counts_[zone * industries_.size() + industry]; }
  std::int64_t zone_total(std::size_t zone) const;
  std::int64_t industry_total(std::size_t industry) const;
  std::int64_t total() const;

  std::optional<std::size_t> zone_index(const std::string& id) const;
  std::optional<std::size_t> industry_index(const std::string& code) const;

  // Adds zones that carry no firms (so they show up in per-zone outputs).
  void add_zone(const std::string& id);

  // Truncates every industry code to its first `digits` characters and merges.
  FirmTable aggregate(std::size_t digits) const;

  std::vector<FirmRecord> records() const;  // non-zero cells, zone-major

private:
  std::vector<std::string> zones_;
  std::vector<std::string> industries_;
  std::map<std::string, std::size_t> zone_lookup_;
  std::map<std::string, std::size_t> industry_lookup_;
  std::vector<std::int64_t> counts_;  // zone-major
};

// Balassa index RCA(i, c) = (F(c, i) / F(c)) / (F(i) / F), stored
// industry-major. Zones without firms have undefined entries.
struct RcaMatrix {
  std::vector<std::string> industries;
  std::vector<std::string> zones;
  std::vector<std::optional<double>> values;

  const std::optional<double>& at(std::size_t industry, std::size_t zone) const {
    return values[industry * zones.size() + zone];
  }
};

RcaMatrix rca(const FirmTable& t);

// Distinct industries with at least one firm in `zone`.
std::size_t diversity(const FirmTable& t, const std::string& zone);

struct SectorResult {
  std::string industry;
  RegressionReport report;
};

struct SectorSkip {
  std::string industry;
  std::string reason;
};

struct SectorAssociation {
  std::vector<SectorResult> ranked;  // descending slope
  std::vector<SectorSkip> skipped;

  std::vector<SectorResult> top(std::size_t k) const;
  std::vector<SectorResult> bottom(std::size_t k) const;  // most negative first
};

// For each industry at `digits` level, regress the zone mean of delta-rho on
// the industry's RCA across zones, weighted by the zone's firm count.
// Industries present in fewer than three zones are skipped.
SectorAssociation sector_association(const FirmTable& t, const std::map<std::string, double>& delta_means,
                                     std::size_t digits = 2);

}  // namespace urbanscope
