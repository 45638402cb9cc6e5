#include "support.hh"
#include "tal/errors.hh"
#include "tal/region_set.hh"
#include "tal/bench.hh"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

using namespace tal;
using tal::test::q;

namespace {

// Every delay worth trying: the integer crossings of each clock up to ceiling + 1, the midpoints
// between consecutive crossings, and one point past the last.
std::vector<Rational> candidate_delays(const ClockValuation& v, const ClockCeiling& k) {
  std::vector<Rational> cuts{q(0)};
  for (std::size_t c = 0; c < v.size(); ++c)
    for (int n = 0; n <= k[c] + 1; ++n)
      if (Rational(n) >= v[c]) cuts.push_back(Rational(n) - v[c]);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Rational> out = cuts;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.push_back((cuts[i] + cuts[i + 1]) / 2);
  out.push_back(cuts.back() + 1);
  return out;
}

ClockValuation shifted(ClockValuation v, const Rational& d) {
  for (auto& x : v) x += d;
  return v;
}

}  // namespace

TEST_CASE("region of a valuation") {
  ClockCeiling k({3, 3});
  auto zero = region_of({q(0), q(0)}, k);
  CHECK(zero.kind(0) == Region::Kind::point);
  CHECK(zero.integer_part(0) == 0);
  CHECK(zero == Region(2));
  CHECK(to_string(zero, k) == "c1=0 & c2=0");

  auto diag = region_of({q(3, 2), q(3, 2)}, k);
  CHECK(diag.kind(0) == Region::Kind::open);
  CHECK(diag.kind(1) == Region::Kind::open);
  CHECK(diag.integer_part(0) == 1);
  CHECK(diag.integer_part(1) == 1);
  CHECK(diag.frac_rank(0) == diag.frac_rank(1));
  CHECK(to_string(diag, k) == "1<c1<2 & 1<c2<2 & c1-c2=0");

  auto b = region_of({q(11, 10), q(0)}, k);
  CHECK(to_string(b, k) == "1<c1<2 & c2=0");

  CHECK(region_of({q(5), q(1, 2)}, k).kind(0) == Region::Kind::unbounded);
  CHECK(region_of({q(13, 10), q(27, 10)}, k) != region_of({q(17, 10), q(23, 10)}, k));
}

TEST_CASE("region words") {
  ClockCeiling k({3, 3});
  auto w = region_word_of({{"a", {q(0), q(0)}}, {"a", {q(3, 2), q(3, 2)}}}, k);
  REQUIRE(w.size() == 2);
  CHECK(w[0].region == Region(2));
  CHECK(to_string(w[1].region, k) == "1<c1<2 & 1<c2<2 & c1-c2=0");
  CHECK(region_word_of({}, k).empty());
  auto b = region_word_of({{"b", {q(11, 10), q(0)}}}, k);
  CHECK(b[0].action == "b");
  CHECK(to_string(b[0].region, k) == "1<c1<2 & c2=0");
}

TEST_CASE("delay successor chains") {
  ClockCeiling one({1});
  auto chain = delay_successors(region_of({q(0)}, one), one);
  REQUIRE(chain.size() == 4);
  CHECK(chain[0] == region_of({q(0)}, one));
  CHECK(chain[1] == region_of({q(1, 2)}, one));
  CHECK(chain[2] == region_of({q(1)}, one));
  CHECK(chain[3] == region_of({q(2)}, one));

  ClockCeiling k({3, 3});
  auto top = region_of({q(9), q(9)}, k);
  CHECK(delay_successors(top, k).size() == 1);
  CHECK_FALSE(next_delay_region(top, k));

  auto next = next_delay_region(Region(2), k);
  REQUIRE(next);
  CHECK(*next == region_of({q(1, 3), q(1, 3)}, k));
}

TEST_CASE("solve_delay picks the canonical witness") {
  ClockCeiling k({3, 3});
  auto d = solve_delay({q(0), q(0)}, region_of({q(21, 20), q(21, 20)}, k), k);
  REQUIRE(d);
  CHECK(*d == q(3, 2));
  CHECK(solve_delay({q(11, 10), q(0)}, region_of({q(11, 10), q(0)}, k), k) == q(0));
  CHECK_FALSE(solve_delay({q(11, 10), q(0)}, region_of({q(3, 2), q(3, 2)}, k), k));

  ClockCeiling one({1});
  CHECK(solve_delay({q(0)}, region_of({q(1, 3)}, one), one) == q(1, 2));
  CHECK(solve_delay({q(0)}, region_of({q(1)}, one), one) == q(1));
  CHECK(solve_delay({q(0)}, region_of({q(7)}, one), one) == q(2));
  CHECK(solve_delay({q(1, 2)}, region_of({q(7)}, one), one) == q(3, 2));
  CHECK(solve_delay({q(1)}, region_of({q(7)}, one), one) == q(1));
  CHECK(solve_delay({q(2)}, region_of({q(7)}, one), one) == q(0));
  CHECK_FALSE(solve_delay({q(1, 2)}, region_of({q(0)}, one), one));
}

TEST_CASE("region counts against the bound") {
  CHECK(region_count_bound(ClockCeiling({1})) == 8);
  CHECK(enumerate_regions(ClockCeiling({1})).size() == 4);
  CHECK(region_count_bound(ClockCeiling({3})) == 16);
  CHECK(enumerate_regions(ClockCeiling({3})).size() == 8);
  CHECK(region_count_bound(ClockCeiling()) == 1);
  CHECK(enumerate_regions(ClockCeiling()).size() == 1);
  for (int a = 1; a <= 4; ++a) CHECK(enumerate_regions(ClockCeiling({a})).size() == static_cast<std::size_t>(2 * a + 2));
}

TEST_CASE("every enumeration stays under the bound", "[property]") {
  for (std::size_t clocks = 1; clocks <= 3; ++clocks) {
    std::vector<int> k(clocks, 1);
    while (true) {
      ClockCeiling ceiling(k);
      const auto& all = enumerate_regions(ceiling);
      CHECK(all.size() <= region_count_bound(ceiling));
      CHECK(std::set<Region>(all.begin(), all.end()).size() == all.size());
      std::size_t c = 0;
      while (c < clocks && k[c] == 4) k[c++] = 1;
      if (c == clocks) break;
      ++k[c];
    }
  }
}

TEST_CASE("regions partition the valuation space", "[property]") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    std::size_t clocks = 1 + i % 3;
    ClockCeiling k(std::vector<int>(clocks, 1 + i % 4));
    auto v = test::random_valuation(rng, clocks, k[0] + 2);
    int hits = 0;
    for (const auto& r : enumerate_regions(k))
      if (RegionSet::single(r, k).contains(v)) ++hits;
    CHECK(hits == 1);
  }
}

TEST_CASE("sample points lie in their region", "[property]") {
  ClockCeiling k({2, 1, 2});
  for (const auto& r : enumerate_regions(k)) CHECK(region_of(sample_point(r, k), k) == r);
}

TEST_CASE("solve_delay is sound and complete", "[property]") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 1000; ++i) {
    std::size_t clocks = 1 + i % 3;
    ClockCeiling k(std::vector<int>(clocks, 1 + i % 3));
    auto v = test::random_valuation(rng, clocks, k[0] + 1);
    const auto& all = enumerate_regions(k);
    const Region& target = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
    auto d = solve_delay(v, target, k);
    if (d) {
      CHECK(*d >= 0);
      CHECK(region_of(shifted(v, *d), k) == target);
    } else {
      for (const auto& c : candidate_delays(v, k)) CHECK(region_of(shifted(v, c), k) != target);
    }
  }
}

TEST_CASE("time elapse stays on the successor chain", "[property]") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    std::size_t clocks = 1 + i % 3;
    ClockCeiling k(std::vector<int>(clocks, 2));
    auto v = test::random_valuation(rng, clocks, 3);
    auto d = test::random_rational(rng, 4);
    auto chain = delay_successors(region_of(v, k), k);
    CHECK(std::find(chain.begin(), chain.end(), region_of(shifted(v, d), k)) != chain.end());
  }
}

TEST_CASE("region set algebra") {
  ClockCeiling k({3, 3});
  Guard g(2);
  g[0] = {1, true, std::nullopt, false};
  g[1] = {1, true, std::nullopt, false};
  CHECK(RegionSet::from_guard(g, k).contains({q(21, 20), q(21, 20)}));

  auto full = RegionSet::full(k);
  CHECK(full.difference(full).is_empty());
  auto some = RegionSet::from_guard(g, k);
  CHECK(some.unite(RegionSet::empty(k)) == some);

  auto all = RegionSet::from_lower_bounds({{0, 0, false}, {1, 0, false}}, k);
  auto upper = RegionSet::from_lower_bounds({{0, 1, true}, {1, 1, true}}, k);
  auto diff = all.difference(upper);
  CHECK(diff.contains({q(1, 2), q(23, 10)}));
  CHECK_FALSE(diff.contains({q(3, 2), q(3, 2)}));

  CHECK_THROWS_AS(full.unite(RegionSet::full(ClockCeiling({2, 2}))), CeilingMismatch);
}

TEST_CASE("region set operations match pointwise evaluation", "[property]") {
  std::mt19937_64 rng(24);
  ClockCeiling k({2, 2});
  const auto& all = enumerate_regions(k);
  auto random_set = [&] {
    RegionSet s(k);
    for (const auto& r : all)
      if (std::bernoulli_distribution(0.3)(rng)) s.insert(r);
    return s;
  };
  for (int i = 0; i < 100; ++i) {
    auto a = random_set(), b = random_set();
    for (int j = 0; j < 20; ++j) {
      auto v = test::random_valuation(rng, 2, 3);
      bool in_a = a.contains(v), in_b = b.contains(v);
      CHECK(a.unite(b).contains(v) == (in_a || in_b));
      CHECK(a.difference(b).contains(v) == (in_a && !in_b));
      CHECK(a.intersect(b).contains(v) == (in_a && in_b));
      CHECK(a.refine(ClockCeiling({3, 4})).contains(v) == in_a);
    }
    CHECK(same_points(a, a.refine(ClockCeiling({3, 3}))));
  }
}

TEST_CASE("guards are unions of whole regions", "[property]") {
  std::mt19937_64 rng(25);
  ClockCeiling k({3, 3});
  for (int i = 0; i < 200; ++i) {
    Guard g(2);
    for (std::size_t c = 0; c < 2; ++c) {
      int lo = std::uniform_int_distribution<int>(0, 3)(rng);
      g[c].lower = lo;
      g[c].lower_strict = std::bernoulli_distribution(0.5)(rng);
      if (std::bernoulli_distribution(0.5)(rng)) {
        g[c].upper = std::uniform_int_distribution<int>(lo, 3)(rng);
        g[c].upper_strict = std::bernoulli_distribution(0.5)(rng);
      }
    }
    auto s = RegionSet::from_guard(g, k);
    for (int j = 0; j < 20; ++j) {
      auto v = test::random_valuation(rng, 2, 4);
      CHECK(s.contains(v) == (test::in_interval(g[0], v[0]) && test::in_interval(g[1], v[1])));
    }
  }
}

TEST_CASE("equal region words give equal runs", "[property]") {
  std::mt19937_64 rng(26);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CaseSpec spec;
    spec.locations = 3;
    spec.actions = 2;
    spec.clocks = 2;
    spec.max_constant = 2;
    spec.seed = seed;
    auto a = generate(spec);
    std::map<std::string, RunResult> seen;
    for (int i = 0; i < 400; ++i) {
      DelayTimedWord w;
      std::size_t len = 1 + i % 3;
      for (std::size_t j = 0; j < len; ++j)
        w.push_back({a.alphabet()[std::uniform_int_distribution<std::size_t>(0, 1)(rng)],
                     Rational(std::uniform_int_distribution<int>(0, 12)(rng), 4)});
      auto r = run(a, w);
      auto key = to_string(region_word_of(r.clocked_word, a.ceiling()), a.ceiling());
      auto [it, fresh] = seen.emplace(key, r);
      if (fresh) continue;
      CHECK(it->second.accepted == r.accepted);
      for (std::size_t j = 0; j < len; ++j) CHECK(it->second.reset_word[j].resets == r.reset_word[j].resets);
    }
  }
}
