#pragma once

#include "tal/automaton.hh"
#include "tal/json_io.hh"
#include "tal/region.hh"
#include "tal/words.hh"

#include <random>
#include <string>
#include <vector>

namespace tal::test {

inline std::string data(const std::string& name) { return std::string(TAL_TEST_DATA) + "/" + name; }
inline TimedAutomaton load(const std::string& name) { return load_automaton(data(name)); }

inline Rational q(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

// Rationals with small denominators, so that ties with integers and equal fractions are common.
inline Rational random_rational(std::mt19937_64& rng, int max_int) {
  static const std::int64_t dens[] = {1, 1, 2, 3, 4, 5, 10};
  std::int64_t d = dens[std::uniform_int_distribution<int>(0, 6)(rng)];
  std::int64_t n = std::uniform_int_distribution<std::int64_t>(0, max_int * d)(rng);
  return Rational(n, d);
}

inline ClockValuation random_valuation(std::mt19937_64& rng, std::size_t clocks, int max_int) {
  ClockValuation v;
  for (std::size_t c = 0; c < clocks; ++c) v.push_back(random_rational(rng, max_int));
  return v;
}

inline DelayTimedWord random_delay_word(std::mt19937_64& rng, const std::vector<std::string>& alphabet,
                                        std::size_t max_len, int max_delay) {
  DelayTimedWord w;
  std::size_t len = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
  for (std::size_t i = 0; i < len; ++i) {
    auto a = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    w.push_back({a, random_rational(rng, max_delay)});
  }
  return w;
}

inline ResetTuple random_resets(std::mt19937_64& rng, std::size_t clocks) {
  ResetTuple r;
  for (std::size_t c = 0; c < clocks; ++c) r.push_back(std::bernoulli_distribution(0.5)(rng));
  return r;
}

// Interval test written out from the bound fields, not via Interval::contains.
inline bool in_interval(const Interval& iv, const Rational& x) {
  Rational lo(iv.lower);
  if (iv.lower_strict ? !(x > lo) : !(x >= lo)) return false;
  if (!iv.upper) return true;
  Rational hi(*iv.upper);
  return iv.upper_strict ? x < hi : x <= hi;
}

// Reference evaluator over interval guards; a missing transition rejects.
inline bool reference_accepts(const TimedAutomaton& a, const DelayTimedWord& w) {
  std::size_t loc = a.initial();
  ClockValuation v = zero_valuation(a.clocks());
  for (const auto& l : w) {
    for (auto& x : v) x += l.delay;
    const Transition* fired = nullptr;
    for (const auto& t : a.transitions()) {
      if (t.source != loc || a.alphabet()[t.action] != l.action) continue;
      const auto& g = std::get<Guard>(t.guard);
      bool ok = true;
      for (std::size_t c = 0; c < a.clocks(); ++c) ok = ok && in_interval(g[c], v[c]);
      if (ok) fired = &t;
    }
    if (!fired) return false;
    for (std::size_t c = 0; c < a.clocks(); ++c)
      if (fired->resets[c]) v[c] = 0;
    loc = fired->target;
  }
  return a.locations()[loc].accepting;
}

}  // namespace tal::test

namespace tal::test {

// Same language, twice the locations: every location gets a twin and edges alternate between copies.
inline TimedAutomaton unfold(const TimedAutomaton& a) {
  TimedAutomaton out(a.alphabet(), a.clocks());
  std::size_t n = a.locations().size();
  for (int copy = 0; copy < 2; ++copy)
    for (const auto& l : a.locations()) out.add_location(l.id + copy * 1000, l.accepting);
  out.set_initial(a.initial());
  std::size_t i = 0;
  for (const auto& t : a.transitions()) {
    for (std::size_t copy = 0; copy < 2; ++copy) {
      Transition u = t;
      u.source = t.source + copy * n;
      u.target = t.target + ((i + copy) % 2) * n;
      out.add_transition(u);
    }
    ++i;
  }
  out.set_ceiling(a.ceiling());
  return out;
}

inline Guard box(std::vector<Interval> bounds) { return Guard(std::move(bounds)); }
inline Interval above(int n, bool strict = true) { return {n, strict, std::nullopt, false}; }
inline Interval upto(int n, bool strict = false) { return {0, false, n, strict}; }
inline Interval any() { return Interval::full(); }

// Hypothesis of the third round on the example target: l- loops except (a, c1>1 & c2>1) to l+.
inline TimedAutomaton third_hypothesis() {
  TimedAutomaton h({"a", "b"}, 2);
  h.add_location(0, false);
  h.add_location(1, true);
  ResetTuple all{true, true};
  h.add_transition({0, 1, box({any(), any()}), all, 0});
  h.add_transition({0, 0, box({above(1), upto(1)}), all, 0});
  h.add_transition({0, 0, box({upto(1), any()}), all, 0});
  h.add_transition({0, 0, box({above(1), above(1)}), {false, true}, 1});
  h.add_transition({1, 0, box({any(), any()}), all, 0});
  h.add_transition({1, 1, box({any(), any()}), all, 0});
  h.set_ceiling(ClockCeiling({3, 3}));
  return h;
}

// One location rejecting everything.
inline TimedAutomaton reject_all(const std::vector<std::string>& alphabet, std::size_t clocks) {
  TimedAutomaton h(alphabet, clocks);
  h.add_location(0, false);
  for (std::size_t a = 0; a < alphabet.size(); ++a) h.add_transition({0, a, Guard(clocks), all_reset(clocks), 0});
  return h;
}

}  // namespace tal::test
