#pragma once

#include "tal/guard.hh"
#include "tal/region.hh"

#include <vector>

namespace tal {

// Lower-bound atom c >= value or c > value (clock is 0-based).
struct LowerBound {
  std::size_t clock = 0;
  int value = 0;
  bool strict = false;
};

// Finite union of regions over one ceiling. Regions are kept sorted.
class RegionSet {
 public:
  RegionSet() = default;
  explicit RegionSet(ClockCeiling ceiling) : ceiling_(std::move(ceiling)) {}
  RegionSet(ClockCeiling ceiling, std::vector<Region> regions);

  static RegionSet empty(const ClockCeiling& k) { return RegionSet(k); }
  static RegionSet full(const ClockCeiling& k);
  static RegionSet from_guard(const Guard& g, const ClockCeiling& k);
  static RegionSet from_lower_bounds(const std::vector<LowerBound>& atoms, const ClockCeiling& k);
  static RegionSet single(const Region& r, const ClockCeiling& k) { return RegionSet(k, {r}); }

  const ClockCeiling& ceiling() const { return ceiling_; }
  const std::vector<Region>& regions() const { return regions_; }
  std::size_t size() const { return regions_.size(); }
  bool is_empty() const { return regions_.empty(); }

  bool contains(const Region& r) const;  // r over this ceiling
  bool contains(const ClockValuation& v) const;
  // r over a ceiling at least as fine as this one.
  bool contains_refined(const Region& r) const { return contains(coarsen(r, ceiling_)); }

  RegionSet unite(const RegionSet& o) const;
  RegionSet difference(const RegionSet& o) const;
  RegionSet intersect(const RegionSet& o) const;
  void insert(const Region& r);

  // Same point set, re-expressed under a finer ceiling.
  RegionSet refine(const ClockCeiling& finer) const;

  bool operator==(const RegionSet& o) const { return ceiling_ == o.ceiling_ && regions_ == o.regions_; }

 private:
  void require_same_ceiling(const RegionSet& o) const;

  ClockCeiling ceiling_;
  std::vector<Region> regions_;
};

// Point-set equality across possibly different ceilings.
bool same_points(const RegionSet& a, const RegionSet& b);

}  // namespace tal
