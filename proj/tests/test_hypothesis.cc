#include "support.hh"
#include "tal/equivalence.hh"
#include "tal/errors.hh"
#include "tal/hypothesis.hh"
#include "tal/learner.hh"
#include "tal/observation_table.hh"

#include <catch_amalgamated.hpp>

#include <set>

using namespace tal;
using tal::test::q;

namespace {

const ClockCeiling k33({3, 3});
const Rational d105(21, 20);

ResetClockedLetter letter(const std::string& a, Rational x, Rational y, bool r1, bool r2) {
  return {a, {x, y}, {r1, r2}};
}

// The table after closing the second round on the example target.
ObservationTable third_table(PowerfulTeacher& teacher) {
  ObservationTable t({"a", "b"}, 2, k33);
  t.add_row({letter("a", 0, 0, true, true)}, false);
  t.add_row({letter("b", 0, 0, true, true)}, false);
  t.add_row({letter("a", d105, d105, false, true)}, false);
  fill(t, teacher);
  make_closed(t, teacher);
  return t;
}

void check_partition(const PartitionResult& p, const ClockCeiling& k, std::mt19937_64& rng, int samples) {
  const auto& blocks = p.blocks;
  REQUIRE(blocks.size() == p.trace.valuations.size());
  auto all = RegionSet::empty(blocks.front().ceiling());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    CHECK(blocks[i].contains(p.trace.valuations[i]));
    for (std::size_t j = i + 1; j < blocks.size(); ++j) CHECK(blocks[i].intersect(blocks[j]).is_empty());
    all = all.unite(blocks[i]);
  }
  CHECK(RegionSet::full(all.ceiling()).difference(all).is_empty());
  int top = 0;
  for (auto c : k.values()) top = std::max(top, c);
  for (int s = 0; s < samples; ++s) {
    auto v = test::random_valuation(rng, k.size(), top + 2);
    int hits = 0;
    for (const auto& b : blocks) hits += b.contains(v) ? 1 : 0;
    CHECK(hits == 1);
  }
}

// Valuations in pairwise distinct regions, zero first.
std::vector<ClockValuation> random_psi(std::mt19937_64& rng, const ClockCeiling& k, std::size_t size) {
  std::vector<ClockValuation> psi{zero_valuation(k.size())};
  std::set<Region> seen{region_of(psi[0], k)};
  int top = 0;
  for (auto c : k.values()) top = std::max(top, c);
  for (int tries = 0; psi.size() < size && tries < 100; ++tries) {
    auto v = test::random_valuation(rng, k.size(), top + 1);
    if (seen.insert(region_of(v, k)).second) psi.push_back(v);
  }
  std::shuffle(psi.begin(), psi.end(), rng);
  return psi;
}

}  // namespace

TEST_CASE("abstract automaton of the third table") {
  PowerfulTeacher teacher(test::load("example_cta.json"));
  auto t = third_table(teacher);
  REQUIRE(prepared_status(t, false).prepared(false));
  auto m = build_dfa(t);
  CHECK(m.size() == 2);
  CHECK(m.transitions.size() == 5);
  CHECK_FALSE(m.accepting[m.initial]);
  auto plus = m.step(m.initial, letter("a", d105, d105, false, true));
  REQUIRE(plus);
  CHECK(m.accepting[*plus]);
  CHECK(m.step(m.initial, letter("b", 0, 0, true, true)) == m.initial);
  for (std::size_t r = 0; r < t.rows().size(); ++r) CHECK(m.accepts(t.rows()[r].word) == t.accepting(r));
}

TEST_CASE("abstract automaton of a trivial table") {
  PowerfulTeacher teacher(test::reject_all({"a", "b"}, 2));
  auto t = initial_table(teacher, 2, ClockCeiling({1, 1}));
  auto m = build_dfa(t);
  CHECK(m.size() == 1);
  CHECK_FALSE(m.accepting[0]);
  CHECK(m.transitions.size() == 2);
  for (const auto& tr : m.transitions) CHECK(tr.target == 0);
}

TEST_CASE("build_dfa rejects an unprepared table") {
  PowerfulTeacher teacher(test::load("example_cta.json"));
  ObservationTable t({"a", "b"}, 2, k33);
  t.add_row({letter("a", d105, d105, false, true)}, false);
  t.add_row({letter("a", 0, 0, true, true)}, false);
  t.add_row({letter("b", 0, 0, true, true)}, false);
  fill(t, teacher);
  REQUIRE_FALSE(prepared_status(t, false).closed);
  CHECK_THROWS_AS(build_dfa(t), TableNotPrepared);
}

TEST_CASE("partition examples") {
  std::mt19937_64 rng(7);
  SECTION("zero only") {
    auto p = partition({{0, 0}}, k33);
    REQUIRE(p.blocks.size() == 1);
    CHECK(same_points(p.blocks[0], RegionSet::full(k33)));
  }
  SECTION("zero and a diagonal point") {
    auto p = partition({{d105, d105}, {0, 0}}, k33);
    REQUIRE(p.blocks.size() == 2);
    REQUIRE(p.trace.valuations[0] == ClockValuation{0, 0});
    auto upper = RegionSet::from_guard(test::box({test::above(1), test::above(1)}), k33);
    CHECK(same_points(p.blocks[1], upper));
    CHECK(same_points(p.blocks[0], RegionSet::full(k33).difference(upper)));
    check_partition(p, k33, rng, 500);
  }
  SECTION("four valuations of one location") {
    auto p = partition({{0, 0}, {d105, d105}, {q(21, 10), d105}, {3, q(39, 20)}}, k33);
    REQUIRE(p.blocks.size() == 4);
    check_partition(p, k33, rng, 1000);
  }
  SECTION("valuations beyond the ceiling") {
    auto p = partition({{0, 0}, {5, q(1, 2)}, {q(7, 2), 4}}, k33);
    CHECK(p.trace.refined.values() == std::vector<int>{5, 4});
    CHECK_FALSE(p.trace.a[1].is_empty());
    check_partition(p, k33, rng, 1000);
  }
  CHECK_THROWS_AS(partition({{1, 1}}, k33), MissingZeroValuation);
  CHECK_THROWS_AS(partition({{0, 0}, {1, 1}, {1, 1}}, k33), DuplicateValuation);
}

TEST_CASE("partition blocks are disjoint, cover everything and hold their valuation", "[property]") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t clocks = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::vector<int> ceil;
    for (std::size_t c = 0; c < clocks; ++c) ceil.push_back(std::uniform_int_distribution<int>(1, 4)(rng));
    ClockCeiling k(ceil);
    auto psi = random_psi(rng, k, std::uniform_int_distribution<std::size_t>(1, 6)(rng));
    CAPTURE(trial, to_string(k));
    auto p = partition(psi, k);
    check_partition(p, k, rng, 200);
  }
}

TEST_CASE("hypothesis of the third table") {
  PowerfulTeacher teacher(test::load("example_cta.json"));
  auto t = third_table(teacher);
  auto h = build_hypothesis(build_dfa(t));
  CHECK(h.locations().size() == 2);
  CHECK(is_complete(h));
  CHECK(is_deterministic(h));
  CHECK_FALSE(equivalent(test::third_hypothesis(), h));
  bool found = false;
  for (const auto& tr : h.transitions()) {
    if (h.alphabet()[tr.action] != "a" || !h.locations()[tr.target].accepting) continue;
    found = true;
    CHECK(tr.resets == ResetTuple{false, true});
    CHECK(render_guard(std::get<RegionSet>(tr.guard)) == std::vector<std::string>{"c1>1 & c2>1"});
  }
  CHECK(found);
}

TEST_CASE("hypothesis of a reject-all table") {
  PowerfulTeacher teacher(test::reject_all({"a", "b"}, 2));
  auto h = build_hypothesis(build_dfa(initial_table(teacher, 2, ClockCeiling({1, 1}))));
  REQUIRE(h.locations().size() == 1);
  CHECK(h.transitions().size() == 2);
  for (const auto& tr : h.transitions()) {
    const auto& g = std::get<RegionSet>(tr.guard);
    CHECK(same_points(g, RegionSet::full(g.ceiling())));
  }
}

TEST_CASE("rendered guards") {
  CHECK(render_guard(RegionSet::full(k33)) == std::vector<std::string>{"c1>=0 & c2>=0"});
  auto upper = RegionSet::from_guard(test::box({test::above(1), test::above(1)}), k33);
  CHECK(render_guard(upper) == std::vector<std::string>{"c1>1 & c2>1"});
  auto one = RegionSet::single(region_of({q(3, 2), 0}, k33), k33);
  CHECK(render_guard(one) == std::vector<std::string>{"1<c1<2 & c2=0"});
  auto diag = RegionSet::single(region_of({q(3, 2), q(3, 2)}, k33), k33);
  REQUIRE(render_guard(diag).size() == 1);
  CHECK(render_guard(diag)[0].find("c1-c2") != std::string::npos);
}

TEST_CASE("learned hypotheses agree with every table cell", "[property]") {
  std::mt19937_64 rng(99);
  auto target = test::load("example_cta.json");
  PowerfulTeacher teacher(target);
  auto out = learn_powerful(teacher, 2, k33);
  const auto& t = out.final_table;
  auto h = out.hypothesis;
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    for (std::size_t e = 0; e < t.suffixes().size(); ++e) {
      const Cell* c = t.cell(r, e);
      REQUIRE(c);
      if (!c->successor) {
        // Unreachable region shape.
        CHECK_FALSE(c->accepted);
        continue;
      }
      auto full = t.rows()[r].word;
      full.insert(full.end(), c->successor->begin(), c->successor->end());
      auto dw = delay_from_reset_clocked(full);
      REQUIRE(dw);
      CHECK(run(h, *dw).accepted == c->accepted);
      // Other clocked words with the same region word.
      auto regions = region_word_of(vw(full), t.ceiling());
      auto resets = resets_of(full);
      for (int rep = 0; rep < 3; ++rep) {
        ClockValuation v = zero_valuation(t.clocks());
        DelayTimedWord alt;
        bool ok = true;
        for (std::size_t i = 0; i < regions.size() && ok; ++i) {
          std::optional<Rational> d;
          for (int tries = 0; tries < 40 && !d; ++tries) {
            auto guess = test::random_rational(rng, 5);
            ClockValuation moved = v;
            for (auto& x : moved) x += guess;
            if (region_of(moved, t.ceiling()) == regions[i].region) d = guess;
          }
          if (!d) d = solve_delay(v, regions[i].region, t.ceiling());
          if (!d) {
            ok = false;
            break;
          }
          alt.push_back({regions[i].action, *d});
          for (std::size_t x = 0; x < v.size(); ++x) v[x] = resets[i][x] ? Rational(0) : v[x] + *d;
        }
        REQUIRE(ok);
        CHECK(run(h, alt).accepted == c->accepted);
        CHECK(accepts_partial(target, alt) == c->accepted);
      }
    }
  }
}
