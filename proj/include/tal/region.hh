#pragma once

#include "tal/guard.hh"
#include "tal/rational.hh"
#include "tal/words.hh"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tal {

// Largest constant per clock; every entry is at least 1.
class ClockCeiling {
 public:
  ClockCeiling() = default;
  explicit ClockCeiling(std::vector<int> bounds);
  static ClockCeiling uniform(std::size_t clocks, int bound) { return ClockCeiling(std::vector<int>(clocks, bound)); }

  std::size_t size() const { return bounds_.size(); }
  int operator[](std::size_t c) const { return bounds_[c]; }
  const std::vector<int>& values() const { return bounds_; }
  bool operator==(const ClockCeiling&) const = default;

 private:
  std::vector<int> bounds_;
};

ClockCeiling max_ceiling(const ClockCeiling& a, const ClockCeiling& b);
ClockCeiling concat(const ClockCeiling& a, const ClockCeiling& b);
std::string to_string(const ClockCeiling& k);

// Canonical clock region. Each clock is Point(k), Open(k,k+1) or Unbounded;
// open clocks carry a dense rank (1 = smallest fractional part).
class Region {
 public:
  enum class Kind : std::uint8_t { point, open, unbounded };
  static constexpr std::size_t max_clocks = 10;

  Region() = default;
  explicit Region(std::size_t clocks);  // all clocks at 0

  std::size_t clocks() const { return size_; }
  Kind kind(std::size_t c) const;
  // Integer part for point/open clocks; undefined for unbounded ones.
  int integer_part(std::size_t c) const { return code_[c] >> 1; }
  int frac_rank(std::size_t c) const { return rank_[c]; }
  int block_count() const;
  std::vector<std::vector<std::size_t>> fractional_order() const;
  bool all_unbounded() const;

  // Raw encoding: 2k for Point(k), 2k+1 for Open(k), unbounded_code otherwise.
  static constexpr std::uint16_t unbounded_code = 0xffff;
  std::uint16_t code(std::size_t c) const { return code_[c]; }

  // Builders for algorithm code; normalize() restores canonical ranks.
  void set(std::size_t c, std::uint16_t code, int rank);
  void normalize();

  bool operator==(const Region& o) const;
  bool operator<(const Region& o) const;
  std::size_t hash() const;

 private:
  std::array<std::uint16_t, max_clocks> code_{};
  std::array<std::uint8_t, max_clocks> rank_{};
  std::uint8_t size_ = 0;
};

struct RegionHash {
  std::size_t operator()(const Region& r) const noexcept { return r.hash(); }
};

Region region_of(const ClockValuation& v, const ClockCeiling& k);

// Time-successor chain starting at r and ending at the all-unbounded region.
std::vector<Region> delay_successors(const Region& r, const ClockCeiling& k);
std::optional<Region> next_delay_region(const Region& r, const ClockCeiling& k);

// Canonical delay d >= 0 with region_of(v + d) == target, or nullopt.
std::optional<Rational> solve_delay(const ClockValuation& v, const Region& target, const ClockCeiling& k);

Region reset_region(const Region& r, const ResetTuple& resets);
// Restricts to clocks [offset, offset + count).
Region restrict_clocks(const Region& r, std::size_t offset, std::size_t count);
// Re-expresses r (over some ceiling >= coarse) under the coarser ceiling.
Region coarsen(const Region& r, const ClockCeiling& coarse);

std::uint64_t region_count_bound(const ClockCeiling& k);
// Every canonical region under k, sorted. Cached per ceiling.
const std::vector<Region>& enumerate_regions(const ClockCeiling& k);

// Exact range of clock c over region r, as an interval (upper absent if unbounded).
struct ClockRange {
  int lo = 0;
  bool lo_open = false;
  std::optional<int> hi;
  bool hi_open = false;
};
ClockRange clock_range(const Region& r, std::size_t c, const ClockCeiling& k);

// Guard constants must not exceed the ceiling; then a region is inside or outside.
bool region_satisfies(const Region& r, const Guard& g, const ClockCeiling& k, std::size_t offset = 0);
bool range_within(const ClockRange& range, const Interval& iv);

// A representative valuation of r (used by tests and guard rendering).
ClockValuation sample_point(const Region& r, const ClockCeiling& k);

std::string to_string(const Region& r, const ClockCeiling& k);

struct RegionLetter {
  std::string action;
  Region region;
  bool operator==(const RegionLetter&) const = default;
};
using RegionWord = std::vector<RegionLetter>;

RegionWord region_word_of(const ClockedWord& word, const ClockCeiling& k);
std::string to_string(const RegionWord& word, const ClockCeiling& k);

}  // namespace tal
