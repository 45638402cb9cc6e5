#include "tal/guard.hh"

namespace tal {

bool Interval::contains(const Rational& x) const {
  if (lower_strict ? !(x > lower) : x < lower) return false;
  if (upper && (upper_strict ? !(x < *upper) : x > *upper)) return false;
  return true;
}

bool Interval::is_empty() const {
  if (!upper) return false;
  if (*upper < lower) return true;
  return *upper == lower && (lower_strict || upper_strict);
}

Interval intersect(const Interval& a, const Interval& b) {
  Interval out;
  if (a.lower > b.lower || (a.lower == b.lower && a.lower_strict)) {
    out.lower = a.lower;
    out.lower_strict = a.lower_strict;
  } else {
    out.lower = b.lower;
    out.lower_strict = b.lower_strict;
  }
  if (!a.upper) {
    out.upper = b.upper;
    out.upper_strict = b.upper_strict;
  } else if (!b.upper || *a.upper < *b.upper || (*a.upper == *b.upper && a.upper_strict)) {
    out.upper = a.upper;
    out.upper_strict = a.upper_strict;
  } else {
    out.upper = b.upper;
    out.upper_strict = b.upper_strict;
  }
  return out;
}

std::vector<Interval> subtract(const Interval& a, const Interval& b) {
  std::vector<Interval> out;
  if (a.is_empty()) return out;
  if (intersect(a, b).is_empty()) {
    out.push_back(a);
    return out;
  }
  // below b
  if (b.lower > 0 || b.lower_strict) {
    Interval below{0, false, b.lower, !b.lower_strict};
    Interval part = intersect(a, below);
    if (!part.is_empty()) out.push_back(part);
  }
  // above b
  if (b.upper) {
    Interval above{*b.upper, !b.upper_strict, std::nullopt, false};
    Interval part = intersect(a, above);
    if (!part.is_empty()) out.push_back(part);
  }
  return out;
}

bool Guard::satisfied_by(const ClockValuation& v) const {
  for (std::size_t c = 0; c < bounds_.size(); ++c)
    if (!bounds_[c].contains(v[c])) return false;
  return true;
}

bool Guard::is_empty() const {
  for (const auto& b : bounds_)
    if (b.is_empty()) return true;
  return false;
}

Guard intersect(const Guard& a, const Guard& b) {
  Guard out(a.clocks());
  for (std::size_t c = 0; c < a.clocks(); ++c) out[c] = intersect(a[c], b[c]);
  return out;
}

std::vector<Guard> subtract(const Guard& a, const Guard& b) {
  std::vector<Guard> out;
  if (a.is_empty()) return out;
  if (intersect(a, b).is_empty()) {
    out.push_back(a);
    return out;
  }
  Guard rest = a;
  for (std::size_t c = 0; c < a.clocks(); ++c) {
    for (const Interval& part : subtract(rest[c], b[c])) {
      Guard piece = rest;
      piece[c] = part;
      out.push_back(piece);
    }
    rest[c] = intersect(rest[c], b[c]);
  }
  return out;
}

std::string to_string(const Interval& iv, std::size_t clock) {
  std::string name = "c" + std::to_string(clock + 1);
  if (iv.upper && *iv.upper == iv.lower && !iv.lower_strict && !iv.upper_strict)
    return name + "=" + std::to_string(iv.lower);
  if (!iv.upper) return name + (iv.lower_strict ? ">" : ">=") + std::to_string(iv.lower);
  if (iv.lower == 0 && !iv.lower_strict)
    return name + (iv.upper_strict ? "<" : "<=") + std::to_string(*iv.upper);
  return std::to_string(iv.lower) + (iv.lower_strict ? "<" : "<=") + name + (iv.upper_strict ? "<" : "<=") +
         std::to_string(*iv.upper);
}

std::string to_string(const Guard& g) {
  std::string out;
  for (std::size_t c = 0; c < g.clocks(); ++c) out += (c ? " & " : "") + to_string(g[c], c);
  return out.empty() ? "true" : out;
}

}  // namespace tal
