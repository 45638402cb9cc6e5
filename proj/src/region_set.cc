#include "tal/region_set.hh"

#include "tal/errors.hh"

#include <algorithm>
#include <iterator>

namespace tal {

RegionSet::RegionSet(ClockCeiling ceiling, std::vector<Region> regions)
    : ceiling_(std::move(ceiling)), regions_(std::move(regions)) {
  std::sort(regions_.begin(), regions_.end());
  regions_.erase(std::unique(regions_.begin(), regions_.end()), regions_.end());
}

RegionSet RegionSet::full(const ClockCeiling& k) { return RegionSet(k, enumerate_regions(k)); }

RegionSet RegionSet::from_guard(const Guard& g, const ClockCeiling& k) {
  if (g.clocks() != k.size()) throw CeilingMismatch("guard and ceiling differ in clock count");
  RegionSet out(k);
  for (const Region& r : enumerate_regions(k))
    if (region_satisfies(r, g, k)) out.regions_.push_back(r);
  return out;
}

RegionSet RegionSet::from_lower_bounds(const std::vector<LowerBound>& atoms, const ClockCeiling& k) {
  Guard g(k.size());
  for (const auto& a : atoms) g[a.clock] = tal::intersect(g[a.clock], Interval{a.value, a.strict, std::nullopt, false});
  return from_guard(g, k);
}

bool RegionSet::contains(const Region& r) const { return std::binary_search(regions_.begin(), regions_.end(), r); }

bool RegionSet::contains(const ClockValuation& v) const { return contains(region_of(v, ceiling_)); }

void RegionSet::require_same_ceiling(const RegionSet& o) const {
  if (!(ceiling_ == o.ceiling_))
    throw CeilingMismatch("region sets over different ceilings " + to_string(ceiling_) + " and " + to_string(o.ceiling_));
}

RegionSet RegionSet::unite(const RegionSet& o) const {
  require_same_ceiling(o);
  RegionSet out(ceiling_);
  std::set_union(regions_.begin(), regions_.end(), o.regions_.begin(), o.regions_.end(),
                 std::back_inserter(out.regions_));
  return out;
}

RegionSet RegionSet::difference(const RegionSet& o) const {
  require_same_ceiling(o);
  RegionSet out(ceiling_);
  std::set_difference(regions_.begin(), regions_.end(), o.regions_.begin(), o.regions_.end(),
                      std::back_inserter(out.regions_));
  return out;
}

RegionSet RegionSet::intersect(const RegionSet& o) const {
  require_same_ceiling(o);
  RegionSet out(ceiling_);
  std::set_intersection(regions_.begin(), regions_.end(), o.regions_.begin(), o.regions_.end(),
                        std::back_inserter(out.regions_));
  return out;
}

void RegionSet::insert(const Region& r) {
  auto it = std::lower_bound(regions_.begin(), regions_.end(), r);
  if (it == regions_.end() || !(*it == r)) regions_.insert(it, r);
}

RegionSet RegionSet::refine(const ClockCeiling& finer) const {
  if (finer == ceiling_) return *this;
  if (finer.size() != ceiling_.size()) throw CeilingMismatch("refinement changes the clock count");
  for (std::size_t c = 0; c < finer.size(); ++c)
    if (finer[c] < ceiling_[c]) throw CeilingMismatch("refinement target is coarser than the set's ceiling");
  RegionSet out(finer);
  for (const Region& r : enumerate_regions(finer))
    if (contains(coarsen(r, ceiling_))) out.regions_.push_back(r);
  return out;
}

bool same_points(const RegionSet& a, const RegionSet& b) {
  ClockCeiling k = max_ceiling(a.ceiling(), b.ceiling());
  return a.refine(k).regions() == b.refine(k).regions();
}

}  // namespace tal
