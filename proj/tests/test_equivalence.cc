#include "support.hh"
#include "tal/bench.hh"
#include "tal/equivalence.hh"
#include "tal/errors.hh"

#include <catch_amalgamated.hpp>

using namespace tal;
using tal::test::q;

namespace {

TimedAutomaton random_target(std::uint64_t seed) {
  CaseSpec spec;
  spec.locations = 1 + seed % 4;
  spec.actions = 1 + seed % 2;
  spec.clocks = 1 + (seed / 2) % 2;
  spec.max_constant = 1 + static_cast<int>(seed % 3);
  spec.seed = seed;
  return generate(spec);
}

}  // namespace

TEST_CASE("complement flips acceptance") {
  auto a = test::load("example_cta.json");
  auto c = complement(a);
  CHECK(run(c, {}).accepted);
  CHECK_FALSE(run(c, {{"a", q(11, 10)}}).accepted);
  CHECK(run(a, {{"a", q(11, 10)}}).accepted);
  CHECK_THROWS_AS(complement(test::load("example_dta.json")), IncompleteAutomaton);

  std::mt19937_64 rng(31);
  auto cc = complement(c);
  for (int i = 0; i < 1000; ++i) {
    auto w = test::random_delay_word(rng, a.alphabet(), 5, 3);
    CHECK(run(cc, w).accepted == run(a, w).accepted);
  }
}

TEST_CASE("products and emptiness") {
  auto a = test::load("example_cta.json");
  CHECK_FALSE(find_accepted_word(intersect(a, complement(a))));

  auto self = find_accepted_word(intersect(a, a));
  REQUIRE(self);
  CHECK(run(a, *self).accepted);

  // L(A) minus L(H1) is L(A); the shortest witness is one a with both clocks in (1,2).
  auto w = find_accepted_word(intersect(a, complement(test::reject_all(a.alphabet(), 2))));
  REQUIRE(w);
  REQUIRE(w->size() == 1);
  CHECK((*w)[0].action == "a");
  CHECK((*w)[0].delay > 1);
  CHECK((*w)[0].delay < 2);

  TimedAutomaton other({"x"}, 2);
  other.add_location(0, true);
  CHECK_THROWS_AS(intersect(a, other), AlphabetMismatch);
}

TEST_CASE("witnesses of a universal product are words of the other side", "[property]") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto a = random_target(seed);
    TimedAutomaton all(a.alphabet(), a.clocks());
    all.add_location(0, true);
    for (std::size_t x = 0; x < a.alphabet().size(); ++x)
      all.add_transition({0, x, Guard(a.clocks()), no_reset(a.clocks()), 0});
    auto w = find_accepted_word(intersect(a, all));
    if (w) {
      CHECK(run(a, *w).accepted);
    } else {
      std::mt19937_64 rng(seed);
      for (int i = 0; i < 300; ++i) CHECK_FALSE(run(a, test::random_delay_word(rng, a.alphabet(), 5, 4)).accepted);
    }
  }
}

TEST_CASE("shortest witness") {
  // Accepts exactly words of at least three letters.
  TimedAutomaton chain({"a"}, 1);
  for (int i = 0; i < 4; ++i) chain.add_location(i, i == 3);
  for (std::size_t i = 0; i < 4; ++i) chain.add_transition({i, 0, Guard(1), {false}, std::min<std::size_t>(i + 1, 3)});
  auto w = find_accepted_word(intersect(chain, chain));
  REQUIRE(w);
  CHECK(w->size() == 3);
}

TEST_CASE("equivalence verdicts on the example") {
  auto a = test::load("example_cta.json");
  CHECK_FALSE(equivalent(a, a));
  CHECK_FALSE(equivalent(a, complete(test::load("example_dta.json"))));
  CHECK_FALSE(equivalent(a, test::unfold(a)));

  auto h3 = test::third_hypothesis();
  REQUIRE(is_complete(h3));
  // H3 is not contained in A ((b,0)(a,3/2) is accepted by H3 only), and that direction is checked first.
  auto v = equivalent(a, h3);
  REQUIRE(v);
  CHECK_FALSE(v->positive);
  CHECK_FALSE(run(a, v->word).accepted);
  CHECK(run(h3, v->word).accepted);
  CHECK(v->target_resets == run(a, v->word).reset_word);

  // The converse direction yields the positive a.b witness with b at delay 0.
  auto w = find_accepted_word(intersect(a, complement(h3)));
  REQUIRE(w);
  REQUIRE(w->size() == 2);
  CHECK((*w)[0].action == "a");
  CHECK((*w)[1] == DelayLetter{"b", q(0)});
  CHECK(run(a, *w).accepted);
  CHECK_FALSE(run(h3, *w).accepted);
}

TEST_CASE("counterexamples replay and carry target resets", "[property]") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto a = random_target(seed);
    auto b = random_target(seed + 1000);
    if (b.alphabet() != a.alphabet() || b.clocks() != a.clocks()) continue;
    auto v = equivalent(a, b);
    if (!v) continue;
    bool in_a = run(a, v->word).accepted, in_b = run(b, v->word).accepted;
    CHECK(in_a != in_b);
    CHECK(v->positive == in_a);
    CHECK(v->target_resets == run(a, v->word).reset_word);
  }
}

TEST_CASE("equivalent verdicts survive sampling", "[property]") {
  std::mt19937_64 rng(32);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto a = random_target(seed);
    for (const auto& b : {test::unfold(a), complement(complement(a))}) {
      REQUIRE_FALSE(equivalent(a, b));
      for (int i = 0; i < 200; ++i) {
        auto w = test::random_delay_word(rng, a.alphabet(), 6, 4);
        CHECK(run(a, w).accepted == run(b, w).accepted);
      }
    }
  }
}
