#include "tal/region.hh"

#include "tal/errors.hh"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace tal {

ClockCeiling::ClockCeiling(std::vector<int> bounds) : bounds_(std::move(bounds)) {
  for (int& b : bounds_) b = std::max(b, 1);
}

ClockCeiling max_ceiling(const ClockCeiling& a, const ClockCeiling& b) {
  if (a.size() != b.size()) throw CeilingMismatch("ceilings over different clock counts");
  std::vector<int> out(a.size());
  for (std::size_t c = 0; c < a.size(); ++c) out[c] = std::max(a[c], b[c]);
  return ClockCeiling(out);
}

ClockCeiling concat(const ClockCeiling& a, const ClockCeiling& b) {
  std::vector<int> out = a.values();
  out.insert(out.end(), b.values().begin(), b.values().end());
  return ClockCeiling(out);
}

std::string to_string(const ClockCeiling& k) {
  std::string out = "(";
  for (std::size_t c = 0; c < k.size(); ++c) out += (c ? "," : "") + std::to_string(k[c]);
  return out + ")";
}

Region::Region(std::size_t clocks) {
  if (clocks > max_clocks) throw std::invalid_argument("too many clocks for a region: " + std::to_string(clocks));
  size_ = static_cast<std::uint8_t>(clocks);
}

Region::Kind Region::kind(std::size_t c) const {
  if (code_[c] == unbounded_code) return Kind::unbounded;
  return (code_[c] & 1) ? Kind::open : Kind::point;
}

int Region::block_count() const {
  int m = 0;
  for (std::size_t c = 0; c < size_; ++c) m = std::max<int>(m, rank_[c]);
  return m;
}

std::vector<std::vector<std::size_t>> Region::fractional_order() const {
  std::vector<std::vector<std::size_t>> blocks(block_count());
  for (std::size_t c = 0; c < size_; ++c)
    if (rank_[c] > 0) blocks[rank_[c] - 1].push_back(c);
  return blocks;
}

bool Region::all_unbounded() const {
  for (std::size_t c = 0; c < size_; ++c)
    if (code_[c] != unbounded_code) return false;
  return true;
}

void Region::set(std::size_t c, std::uint16_t code, int rank) {
  code_[c] = code;
  rank_[c] = static_cast<std::uint8_t>(rank);
}

void Region::normalize() {
  // Ranks of open clocks become 1..m with order kept; other clocks get 0.
  std::array<std::uint8_t, max_clocks> dense{};
  for (std::size_t c = 0; c < size_; ++c) {
    if (kind(c) != Kind::open) continue;
    std::uint8_t below = 0;
    for (std::size_t o = 0; o < size_; ++o) {
      if (kind(o) != Kind::open || rank_[o] >= rank_[c]) continue;
      bool first = true;
      for (std::size_t p = 0; p < o; ++p)
        if (kind(p) == Kind::open && rank_[p] == rank_[o]) first = false;
      if (first) ++below;
    }
    dense[c] = below + 1;
  }
  for (std::size_t c = 0; c < size_; ++c) rank_[c] = dense[c];
}

bool Region::operator==(const Region& o) const {
  if (size_ != o.size_) return false;
  for (std::size_t c = 0; c < size_; ++c)
    if (code_[c] != o.code_[c] || rank_[c] != o.rank_[c]) return false;
  return true;
}

bool Region::operator<(const Region& o) const {
  if (size_ != o.size_) return size_ < o.size_;
  for (std::size_t c = 0; c < size_; ++c)
    if (code_[c] != o.code_[c]) return code_[c] < o.code_[c];
  for (std::size_t c = 0; c < size_; ++c)
    if (rank_[c] != o.rank_[c]) return rank_[c] < o.rank_[c];
  return false;
}

std::size_t Region::hash() const {
  std::size_t h = 1469598103934665603ull ^ size_;
  for (std::size_t c = 0; c < size_; ++c) {
    h = (h ^ code_[c]) * 1099511628211ull;
    h = (h ^ rank_[c]) * 1099511628211ull;
  }
  return h;
}

Region region_of(const ClockValuation& v, const ClockCeiling& k) {
  if (v.size() != k.size()) throw CeilingMismatch("valuation and ceiling differ in clock count");
  Region r(v.size());
  std::vector<Rational> fracs;
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (v[c] > k[c]) {
      r.set(c, Region::unbounded_code, 0);
    } else if (is_integral(v[c])) {
      r.set(c, static_cast<std::uint16_t>(2 * v[c].numerator()), 0);
    } else {
      r.set(c, static_cast<std::uint16_t>(2 * floor_of(v[c]) + 1), 0);
      fracs.push_back(frac_of(v[c]));
    }
  }
  std::sort(fracs.begin(), fracs.end());
  fracs.erase(std::unique(fracs.begin(), fracs.end()), fracs.end());
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (r.kind(c) != Region::Kind::open) continue;
    auto it = std::lower_bound(fracs.begin(), fracs.end(), frac_of(v[c]));
    r.set(c, r.code(c), static_cast<int>(it - fracs.begin()) + 1);
  }
  return r;
}

std::optional<Region> next_delay_region(const Region& r, const ClockCeiling& k) {
  bool has_point = false, has_open = false;
  for (std::size_t c = 0; c < r.clocks(); ++c) {
    has_point = has_point || r.kind(c) == Region::Kind::point;
    has_open = has_open || r.kind(c) == Region::Kind::open;
  }
  Region n = r;
  if (has_point) {
    // point clocks leave their integer with the smallest fractional part
    for (std::size_t c = 0; c < r.clocks(); ++c) {
      if (r.kind(c) == Region::Kind::open) {
        n.set(c, r.code(c), r.frac_rank(c) + 1);
      } else if (r.kind(c) == Region::Kind::point) {
        int i = r.integer_part(c);
        if (i < k[c])
          n.set(c, static_cast<std::uint16_t>(2 * i + 1), 1);
        else
          n.set(c, Region::unbounded_code, 0);
      }
    }
    n.normalize();
    return n;
  }
  if (has_open) {
    int top = r.block_count();
    for (std::size_t c = 0; c < r.clocks(); ++c)
      if (r.kind(c) == Region::Kind::open && r.frac_rank(c) == top)
        n.set(c, static_cast<std::uint16_t>(r.code(c) + 1), 0);
    n.normalize();
    return n;
  }
  return std::nullopt;
}

std::vector<Region> delay_successors(const Region& r, const ClockCeiling& k) {
  std::vector<Region> chain{r};
  while (auto n = next_delay_region(chain.back(), k)) chain.push_back(*n);
  return chain;
}

std::optional<Rational> solve_delay(const ClockValuation& v, const Region& target, const ClockCeiling& k) {
  if (v.size() != k.size() || target.clocks() != k.size())
    throw CeilingMismatch("solve_delay operands differ in clock count");
  std::vector<Rational> points{Rational(0)};
  for (std::size_t c = 0; c < v.size(); ++c) {
    for (std::int64_t m = std::max<std::int64_t>(0, ceil_of(v[c])); m <= k[c]; ++m) points.push_back(Rational(m) - v[c]);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto shifted = [&](const Rational& d) {
    ClockValuation w = v;
    for (auto& x : w) x += d;
    return w;
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (region_of(shifted(points[i]), k) == target) return points[i];
    if (i + 1 < points.size()) {
      Rational mid = (points[i] + points[i + 1]) / 2;
      if (region_of(shifted(mid), k) == target) return mid;
    } else {
      Rational beyond = points[i] + 1;
      if (region_of(shifted(beyond), k) == target) return beyond;
    }
  }
  return std::nullopt;
}

Region reset_region(const Region& r, const ResetTuple& resets) {
  Region n = r;
  for (std::size_t c = 0; c < r.clocks(); ++c)
    if (resets[c]) n.set(c, 0, 0);
  n.normalize();
  return n;
}

Region restrict_clocks(const Region& r, std::size_t offset, std::size_t count) {
  Region n(count);
  for (std::size_t c = 0; c < count; ++c) n.set(c, r.code(offset + c), r.frac_rank(offset + c));
  n.normalize();
  return n;
}

Region coarsen(const Region& r, const ClockCeiling& coarse) {
  Region n = r;
  bool changed = false;
  for (std::size_t c = 0; c < r.clocks(); ++c) {
    std::uint16_t code = r.code(c);
    if (code == Region::unbounded_code) continue;
    if (code > 2 * coarse[c]) {
      n.set(c, Region::unbounded_code, 0);
      changed = true;
    }
  }
  if (changed) n.normalize();
  return n;
}

std::uint64_t region_count_bound(const ClockCeiling& k) {
  std::uint64_t bound = 1;
  for (std::size_t c = 0; c < k.size(); ++c) bound *= (c + 1) * 2 * static_cast<std::uint64_t>(2 * k[c] + 2);
  return bound;
}

namespace {

void enumerate_orders(const std::vector<std::size_t>& open, std::size_t i, std::vector<std::vector<std::size_t>>& blocks,
                      Region& base, std::vector<Region>& out) {
  if (i == open.size()) {
    Region r = base;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (std::size_t c : blocks[b]) r.set(c, r.code(c), static_cast<int>(b) + 1);
    out.push_back(r);
    return;
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    blocks[b].push_back(open[i]);
    enumerate_orders(open, i + 1, blocks, base, out);
    blocks[b].pop_back();
  }
  for (std::size_t pos = 0; pos <= blocks.size(); ++pos) {
    blocks.insert(blocks.begin() + static_cast<std::ptrdiff_t>(pos), std::vector<std::size_t>{open[i]});
    enumerate_orders(open, i + 1, blocks, base, out);
    blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(pos));
  }
}

void enumerate_codes(const ClockCeiling& k, std::size_t c, Region& r, std::vector<Region>& out) {
  if (c == k.size()) {
    std::vector<std::size_t> open;
    for (std::size_t j = 0; j < k.size(); ++j)
      if (r.kind(j) == Region::Kind::open) open.push_back(j);
    std::vector<std::vector<std::size_t>> blocks;
    enumerate_orders(open, 0, blocks, r, out);
    return;
  }
  for (int code = 0; code <= 2 * k[c]; ++code) {
    r.set(c, static_cast<std::uint16_t>(code), 0);
    enumerate_codes(k, c + 1, r, out);
  }
  r.set(c, Region::unbounded_code, 0);
  enumerate_codes(k, c + 1, r, out);
}

}  // namespace

const std::vector<Region>& enumerate_regions(const ClockCeiling& k) {
  static std::mutex mutex;
  static std::map<std::vector<int>, std::vector<Region>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(k.values());
  if (it != cache.end()) return it->second;
  std::vector<Region> out;
  Region r(k.size());
  enumerate_codes(k, 0, r, out);
  std::sort(out.begin(), out.end());
  return cache.emplace(k.values(), std::move(out)).first->second;
}

ClockRange clock_range(const Region& r, std::size_t c, const ClockCeiling& k) {
  switch (r.kind(c)) {
    case Region::Kind::point:
      return {r.integer_part(c), false, r.integer_part(c), false};
    case Region::Kind::open:
      return {r.integer_part(c), true, r.integer_part(c) + 1, true};
    case Region::Kind::unbounded:
      break;
  }
  return {k[c], true, std::nullopt, false};
}

bool range_within(const ClockRange& range, const Interval& iv) {
  if (range.lo < iv.lower) return false;
  if (range.lo == iv.lower && iv.lower_strict && !range.lo_open) return false;
  if (!iv.upper) return true;
  if (!range.hi) return false;
  if (*range.hi > *iv.upper) return false;
  if (*range.hi == *iv.upper && iv.upper_strict && !range.hi_open) return false;
  return true;
}

bool region_satisfies(const Region& r, const Guard& g, const ClockCeiling& k, std::size_t offset) {
  for (std::size_t c = 0; c < g.clocks(); ++c) {
    if (g.max_constant(c) > k[offset + c])
      throw CeilingMismatch("guard constant " + std::to_string(g.max_constant(c)) + " exceeds ceiling " +
                            std::to_string(k[offset + c]) + " of clock c" + std::to_string(c + 1));
    if (!range_within(clock_range(r, offset + c, k), g[c])) return false;
  }
  return true;
}

ClockValuation sample_point(const Region& r, const ClockCeiling& k) {
  int m = r.block_count();
  ClockValuation v(r.clocks());
  for (std::size_t c = 0; c < r.clocks(); ++c) {
    switch (r.kind(c)) {
      case Region::Kind::point:
        v[c] = Rational(r.integer_part(c));
        break;
      case Region::Kind::open:
        v[c] = Rational(r.integer_part(c)) + Rational(r.frac_rank(c), m + 1);
        break;
      case Region::Kind::unbounded:
        v[c] = Rational(k[c] + 1);
        break;
    }
  }
  return v;
}

std::string to_string(const Region& r, const ClockCeiling& k) {
  std::vector<std::string> atoms;
  for (std::size_t c = 0; c < r.clocks(); ++c) {
    std::string name = "c" + std::to_string(c + 1);
    switch (r.kind(c)) {
      case Region::Kind::point:
        atoms.push_back(name + "=" + std::to_string(r.integer_part(c)));
        break;
      case Region::Kind::open:
        atoms.push_back(std::to_string(r.integer_part(c)) + "<" + name + "<" + std::to_string(r.integer_part(c) + 1));
        break;
      case Region::Kind::unbounded:
        atoms.push_back(name + ">" + std::to_string(k[c]));
        break;
    }
  }
  for (std::size_t i = 0; i < r.clocks(); ++i) {
    for (std::size_t j = i + 1; j < r.clocks(); ++j) {
      if (r.kind(i) != Region::Kind::open || r.kind(j) != Region::Kind::open) continue;
      int d = r.integer_part(i) - r.integer_part(j);
      std::string diff = "c" + std::to_string(i + 1) + "-c" + std::to_string(j + 1);
      if (r.frac_rank(i) == r.frac_rank(j))
        atoms.push_back(diff + "=" + std::to_string(d));
      else if (r.frac_rank(i) < r.frac_rank(j))
        atoms.push_back(std::to_string(d - 1) + "<" + diff + "<" + std::to_string(d));
      else
        atoms.push_back(std::to_string(d) + "<" + diff + "<" + std::to_string(d + 1));
    }
  }
  std::string out;
  for (const auto& a : atoms) out += (out.empty() ? "" : " & ") + a;
  return out.empty() ? "true" : out;
}

RegionWord region_word_of(const ClockedWord& word, const ClockCeiling& k) {
  RegionWord out;
  out.reserve(word.size());
  for (const auto& l : word) out.push_back({l.action, region_of(l.values, k)});
  return out;
}

std::string to_string(const RegionWord& word, const ClockCeiling& k) {
  if (word.empty()) return "ε";
  std::string out;
  for (const auto& l : word) out += "(" + l.action + "," + to_string(l.region, k) + ")";
  return out;
}

}  // namespace tal
