#include "tal/guard_cover.hh"

#include <algorithm>

namespace tal {

namespace {

int index_of(const Region& r, std::size_t c, const ClockCeiling& k) {
  return r.code(c) == Region::unbounded_code ? 2 * k[c] + 1 : r.code(c);
}

Interval interval_of(int lo, int hi, int top) {
  Interval iv;
  iv.lower = lo / 2;
  iv.lower_strict = lo % 2 == 1;
  if (hi < top) {
    iv.upper = (hi + 1) / 2;
    iv.upper_strict = hi % 2 == 1;
  }
  return iv;
}

struct Box {
  std::vector<int> lo, hi;
  bool holds(const Region& r, const ClockCeiling& k) const {
    for (std::size_t c = 0; c < lo.size(); ++c) {
      int i = index_of(r, c, k);
      if (i < lo[c] || i > hi[c]) return false;
    }
    return true;
  }
};

bool box_inside(const Box& box, const RegionSet& set) {
  for (const Region& r : enumerate_regions(set.ceiling()))
    if (box.holds(r, set.ceiling()) && !set.contains(r)) return false;
  return true;
}

std::pair<int, int> difference_range(const Region& r, std::size_t i, std::size_t j, bool& bounded) {
  bounded = r.kind(i) != Region::Kind::unbounded && r.kind(j) != Region::Kind::unbounded;
  int d = r.integer_part(i) - r.integer_part(j);
  bool oi = r.kind(i) == Region::Kind::open, oj = r.kind(j) == Region::Kind::open;
  if (!oi && !oj) return {d, d};
  if (!oi) return {d - 1, d};  // f_i = 0 < f_j
  if (!oj) return {d, d + 1};
  if (r.frac_rank(i) == r.frac_rank(j)) return {d, d};
  return r.frac_rank(i) < r.frac_rank(j) ? std::pair{d - 1, d} : std::pair{d, d + 1};
}

}  // namespace

Conjunct conjunct_of(const Region& r, const ClockCeiling& k) {
  Conjunct out{Guard(r.clocks()), {}};
  for (std::size_t c = 0; c < r.clocks(); ++c) {
    int i = index_of(r, c, k);
    out.box[c] = interval_of(i, i, 2 * k[c] + 1);
  }
  for (std::size_t i = 0; i < r.clocks(); ++i) {
    for (std::size_t j = i + 1; j < r.clocks(); ++j) {
      if (r.kind(i) != Region::Kind::open || r.kind(j) != Region::Kind::open) continue;
      bool bounded = true;
      auto [lo, hi] = difference_range(r, i, j, bounded);
      bool exact = lo == hi;
      out.differences.push_back({i, j, lo, !exact, hi, !exact});
    }
  }
  return out;
}

std::vector<Conjunct> cover(const RegionSet& set) {
  const ClockCeiling& k = set.ceiling();
  std::size_t n = k.size();
  std::vector<Conjunct> out;
  std::vector<bool> covered(set.size(), false);
  for (std::size_t idx = 0; idx < set.size(); ++idx) {
    if (covered[idx]) continue;
    const Region& seed = set.regions()[idx];
    Box box{std::vector<int>(n), std::vector<int>(n)};
    for (std::size_t c = 0; c < n; ++c) box.lo[c] = box.hi[c] = index_of(seed, c, k);
    if (!box_inside(box, set)) {
      out.push_back(conjunct_of(seed, k));
      covered[idx] = true;
      continue;
    }
    for (std::size_t c = 0; c < n; ++c) {
      while (box.lo[c] > 0) {
        --box.lo[c];
        if (!box_inside(box, set)) {
          ++box.lo[c];
          break;
        }
      }
      while (box.hi[c] < 2 * k[c] + 1) {
        ++box.hi[c];
        if (!box_inside(box, set)) {
          --box.hi[c];
          break;
        }
      }
    }
    Conjunct conj{Guard(n), {}};
    for (std::size_t c = 0; c < n; ++c) conj.box[c] = interval_of(box.lo[c], box.hi[c], 2 * k[c] + 1);
    out.push_back(std::move(conj));
    for (std::size_t j = idx; j < set.size(); ++j)
      if (box.holds(set.regions()[j], k)) covered[j] = true;
  }
  return out;
}

bool region_within(const Region& r, const Conjunct& conj, const ClockCeiling& k) {
  for (std::size_t c = 0; c < r.clocks(); ++c)
    if (!range_within(clock_range(r, c, k), conj.box[c])) return false;
  for (const auto& d : conj.differences) {
    bool bounded = true;
    auto [lo, hi] = difference_range(r, d.clock, d.minus_clock, bounded);
    if (!bounded) return false;
    bool exact = lo == hi;
    // region range is [lo,hi] when exact, else the open interval (lo,hi)
    if (lo < d.lo || (lo == d.lo && d.lo_strict && exact)) return false;
    if (hi > d.hi || (hi == d.hi && d.hi_strict && exact)) return false;
  }
  return true;
}

RegionSet regions_of(const std::vector<Conjunct>& conjuncts, const ClockCeiling& k) {
  std::vector<Region> picked;
  for (const Region& r : enumerate_regions(k))
    for (const auto& conj : conjuncts)
      if (region_within(r, conj, k)) {
        picked.push_back(r);
        break;
      }
  return RegionSet(k, std::move(picked));
}

std::string to_string(const Conjunct& conj) {
  std::string out = to_string(conj.box);
  for (const auto& d : conj.differences) {
    std::string diff = "c" + std::to_string(d.clock + 1) + "-c" + std::to_string(d.minus_clock + 1);
    if (d.lo == d.hi && !d.lo_strict && !d.hi_strict)
      out += " & " + diff + "=" + std::to_string(d.lo);
    else
      out += " & " + std::to_string(d.lo) + (d.lo_strict ? "<" : "<=") + diff + (d.hi_strict ? "<" : "<=") +
             std::to_string(d.hi);
  }
  return out;
}

}  // namespace tal
