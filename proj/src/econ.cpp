#include "urbanscope/econ.hpp"

#include <algorithm>

#include "urbanscope/error.hpp"

namespace urbanscope {

FirmTable::FirmTable(const std::vector<FirmRecord>& records) {
  for (const auto& r : records) {
    if (r.count < 0) throw InvalidInput("firm table: negative count for zone '" + r.zone_id + "'");
    if (r.industry.empty()) throw InvalidInput("firm table: empty industry code");
    add_zone(r.zone_id);
    if (!industry_lookup_.count(r.industry)) {
      const std::size_t old = industries_.size();
      industry_lookup_.emplace(r.industry, old);
      industries_.push_back(r.industry);
      std::vector<std::int64_t> grown(zones_.size() * (old + 1), 0);
      for (std::size_t z = 0; z < zones_.size(); ++z)
        for (std::size_t i = 0; i < old; ++i) grown[z * (old + 1) + i] = counts_[z * old + i];
      counts_ = std::move(grown);
    }
    counts_[zone_lookup_.at(r.zone_id) * industries_.size() + industry_lookup_.at(r.industry)] += r.count;
  }
}

void FirmTable::add_zone(const std::string& id) {
  if (zone_lookup_.count(id)) return;
  zone_lookup_.emplace(id, zones_.size());
  zones_.push_back(id);
  counts_.resize(zones_.size() * industries_.size(), 0);
}

std::int64_t FirmTable::zone_total(std::size_t zone) const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < industries_.size(); ++i) s += count(zone, i);
  return s;
}

std::int64_t FirmTable::industry_total(std::size_t industry) const {
  std::int64_t s = 0;
  for (std::size_t z = 0; z < zones_.size(); ++z) s += count(z, industry);
  return s;
}

std::int64_t FirmTable::total() const {
  std::int64_t s = 0;
  for (auto c : counts_) s += c;
  return s;
}

std::optional<std::size_t> FirmTable::zone_index(const std::string& id) const {
  auto it = zone_lookup_.find(id);
  if (it == zone_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> FirmTable::industry_index(const std::string& code) const {
  auto it = industry_lookup_.find(code);
  if (it == industry_lookup_.end()) return std::nullopt;
  return it->second;
}

FirmTable FirmTable::aggregate(std::size_t digits) const {
  if (digits == 0) throw InvalidInput("firm table: digit level must be positive");
  std::vector<FirmRecord> recs;
  for (std::size_t z = 0; z < zones_.size(); ++z)
    for (std::size_t i = 0; i < industries_.size(); ++i)
      recs.push_back({zones_[z], industries_[i].substr(0, digits), count(z, i)});
  FirmTable out(recs);
  for (const auto& z : zones_) out.add_zone(z);
  return out;
}

std::vector<FirmRecord> FirmTable::records() const {
  std::vector<FirmRecord> out;
  for (std::size_t z = 0; z < zones_.size(); ++z)
    for (std::size_t i = 0; i < industries_.size(); ++i)
      if (count(z, i) != 0) out.push_back({zones_[z], industries_[i], count(z, i)});
  return out;
}

RcaMatrix rca(const FirmTable& t) {
  const auto total = static_cast<double>(t.total());
  if (!(total > 0.0)) throw InvalidInput("rca: firm table is empty");
  RcaMatrix m;
  m.industries = t.industries();
  m.zones = t.zones();
  m.values.assign(t.n_industries() * t.n_zones(), std::nullopt);
  std::vector<double> zone_tot(t.n_zones());
  for (std::size_t z = 0; z < t.n_zones(); ++z) zone_tot[z] = static_cast<double>(t.zone_total(z));
  for (std::size_t i = 0; i < t.n_industries(); ++i) {
    const auto ind_tot = static_cast<double>(t.industry_total(i));
    if (!(ind_tot > 0.0)) continue;
    const double region_share = ind_tot / total;
    for (std::size_t z = 0; z < t.n_zones(); ++z) {
      if (!(zone_tot[z] > 0.0)) continue;
      m.values[i * t.n_zones() + z] = (static_cast<double>(t.count(z, i)) / zone_tot[z]) / region_share;
    }
  }
  return m;
}

std::size_t diversity(const FirmTable& t, const std::string& zone) {
  const auto z = t.zone_index(zone);
  if (!z) throw InvalidInput("diversity: unknown zone '" + zone + "'");
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.n_industries(); ++i)
    if (t.count(*z, i) > 0) ++n;
  return n;
}

std::vector<SectorResult> SectorAssociation::top(std::size_t k) const {
  return {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranked.size()))};
}

std::vector<SectorResult> SectorAssociation::bottom(std::size_t k) const {
  std::vector<SectorResult> out(ranked.rbegin(),
                                ranked.rbegin() + static_cast<std::ptrdiff_t>(std::min(k, ranked.size())));
  return out;
}

SectorAssociation sector_association(const FirmTable& t, const std::map<std::string, double>& delta_means,
                                     std::size_t digits) {
  const FirmTable agg = t.aggregate(digits);
  const RcaMatrix m = rca(agg);
  SectorAssociation out;
  for (std::size_t i = 0; i < agg.n_industries(); ++i) {
    std::size_t support = 0;
    std::vector<double> x, y, w;
    for (std::size_t z = 0; z < agg.n_zones(); ++z) {
      if (agg.count(z, i) > 0) ++support;
      const auto& r = m.at(i, z);
      auto d = delta_means.find(agg.zones()[z]);
      if (!r || d == delta_means.end()) continue;
      x.push_back(*r);
      y.push_back(d->second);
      w.push_back(static_cast<double>(agg.zone_total(z)));
    }
    if (support < 3) {
      out.skipped.push_back({agg.industries()[i], "present in fewer than 3 zones"});
      continue;
    }
    try {
      out.ranked.push_back({agg.industries()[i], least_squares(x, y, w)});
    } catch (const InvalidInput& e) {
      out.skipped.push_back({agg.industries()[i], e.what()});
    }
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const SectorResult& a, const SectorResult& b) { return a.report.slope > b.report.slope; });
  return out;
}

}  // namespace urbanscope
