#pragma once

#include "tal/rational.hh"
#include "tal/words.hh"

#include <optional>
#include <string>
#include <vector>

namespace tal {

// Integer-bounded interval over the non-negative reals.
struct Interval {
  int lower = 0;
  bool lower_strict = false;
  std::optional<int> upper;
  bool upper_strict = false;

  static Interval full() { return {}; }
  bool contains(const Rational& x) const;
  bool is_empty() const;
  bool is_full() const { return lower == 0 && !lower_strict && !upper; }
  int max_constant() const { return upper ? std::max(lower, *upper) : lower; }
  bool operator==(const Interval&) const = default;
};

Interval intersect(const Interval& a, const Interval& b);
// Parts of `a` outside `b`, below then above. Empty parts are omitted.
std::vector<Interval> subtract(const Interval& a, const Interval& b);

// Conjunction of per-clock interval constraints; diagonal-free.
class Guard {
 public:
  Guard() = default;
  explicit Guard(std::size_t clocks) : bounds_(clocks) {}
  explicit Guard(std::vector<Interval> bounds) : bounds_(std::move(bounds)) {}

  static Guard full(std::size_t clocks) { return Guard(clocks); }

  std::size_t clocks() const { return bounds_.size(); }
  const Interval& operator[](std::size_t c) const { return bounds_[c]; }
  Interval& operator[](std::size_t c) { return bounds_[c]; }
  const std::vector<Interval>& bounds() const { return bounds_; }

  bool satisfied_by(const ClockValuation& v) const;
  bool is_empty() const;
  int max_constant(std::size_t c) const { return bounds_[c].max_constant(); }
  bool operator==(const Guard&) const = default;

 private:
  std::vector<Interval> bounds_;
};

Guard intersect(const Guard& a, const Guard& b);

// Box difference a - b as disjoint boxes, splitting clocks in index order.
std::vector<Guard> subtract(const Guard& a, const Guard& b);

// e.g. "1<c1<2 & c2>=0"; every clock is listed.
std::string to_string(const Interval& iv, std::size_t clock);
std::string to_string(const Guard& g);

}  // namespace tal
