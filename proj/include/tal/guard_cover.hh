#pragma once

#include "tal/guard.hh"
#include "tal/region_set.hh"

#include <string>
#include <vector>

namespace tal {

// lo (<|<=) c_clock - c_minus_clock (<|<=) hi
struct DifferenceAtom {
  std::size_t clock = 0;
  std::size_t minus_clock = 0;
  int lo = 0;
  bool lo_strict = false;
  int hi = 0;
  bool hi_strict = false;
  bool operator==(const DifferenceAtom&) const = default;
};

// Convex constraint: per-clock box plus optional clock-difference atoms.
struct Conjunct {
  Guard box;
  std::vector<DifferenceAtom> differences;
};

// Greedy cover of a region set by conjuncts: boxes where exact, single regions otherwise.
std::vector<Conjunct> cover(const RegionSet& set);
Conjunct conjunct_of(const Region& r, const ClockCeiling& k);

// Regions of `k` lying entirely inside some conjunct.
RegionSet regions_of(const std::vector<Conjunct>& conjuncts, const ClockCeiling& k);
bool region_within(const Region& r, const Conjunct& c, const ClockCeiling& k);

std::string to_string(const Conjunct& c);

}  // namespace tal
