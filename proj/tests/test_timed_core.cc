#include "support.hh"
#include "tal/bench.hh"
#include "tal/errors.hh"

#include <catch_amalgamated.hpp>

using namespace tal;
using tal::test::q;

namespace {

ResetTuple rt(std::initializer_list<int> bits) {
  ResetTuple r;
  for (int b : bits) r.push_back(b != 0);
  return r;
}

ResetClockedLetter rcl(const std::string& a, ClockValuation v, ResetTuple b) { return {a, std::move(v), std::move(b)}; }

}  // namespace

TEST_CASE("rationals stay in lowest terms and parse decimals") {
  Rational x = parse_rational("1.05");
  CHECK(x == q(21, 20));
  CHECK(parse_rational("6/4") == q(3, 2));
  CHECK(parse_rational("-0") == q(0));
  CHECK(to_string(q(4, 2)) == "2");
  CHECK(to_string(q(21, 20)) == "21/20");
  CHECK(floor_of(q(7, 2)) == 3);
  CHECK(ceil_of(q(7, 2)) == 4);
  CHECK(frac_of(q(7, 2)) == q(1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}

TEST_CASE("run on the completed example automaton") {
  auto cta = test::load("example_cta.json");
  REQUIRE(is_complete(cta));

  auto r = run(cta, {{"a", q(11, 10)}, {"b", q(0)}});
  CHECK(r.accepted);
  REQUIRE(r.trace.size() == 3);
  CHECK(r.trace[0].valuation == ClockValuation{q(0), q(0)});
  CHECK(r.trace[1].valuation == ClockValuation{q(11, 10), q(0)});
  CHECK(r.trace[2].valuation == ClockValuation{q(11, 10), q(0)});
  CHECK(r.trace[1].location == r.trace[2].location);
  REQUIRE(r.reset_word.size() == 2);
  CHECK(r.reset_word[0].resets == rt({0, 1}));
  CHECK(r.reset_word[1].resets == rt({0, 1}));
  CHECK(r.clocked_word[0].values == ClockValuation{q(11, 10), q(11, 10)});
  CHECK(r.clocked_word[1].values == ClockValuation{q(11, 10), q(0)});

  auto empty = run(cta, {});
  CHECK(empty.accepted == cta.locations()[cta.initial()].accepting);
  REQUIRE(empty.trace.size() == 1);
  CHECK(empty.trace[0].valuation == zero_valuation(2));

  // (a,0): c1 > 1 fails, so the completion edge to the sink fires.
  auto sink = run(cta, {{"a", q(0)}});
  CHECK_FALSE(sink.accepted);
  std::size_t at = sink.trace[1].location;
  CHECK_FALSE(cta.locations()[at].accepting);
  bool reaches_accepting = false;
  for (const auto& t : cta.transitions())
    if (t.source == at && t.target != at) reaches_accepting = true;
  CHECK_FALSE(reaches_accepting);
}

TEST_CASE("run rejects partial and nondeterministic automata") {
  auto dta = test::load("example_dta.json");
  CHECK_THROWS_AS(run(dta, {{"a", q(0)}}), IncompleteAutomaton);

  TimedAutomaton n({"a"}, 1);
  n.add_location(0, true);
  n.add_transition({0, 0, Guard(1), {false}, 0});
  n.add_transition({0, 0, Guard(std::vector<Interval>{{1, false, std::nullopt, false}}), {true}, 0});
  CHECK_FALSE(is_deterministic(n));
  CHECK_THROWS_AS(run(n, {{"a", q(2)}}), NondeterministicAutomaton);
}

TEST_CASE("completion of the example automaton") {
  auto dta = test::load("example_dta.json");
  auto cta = complete(dta);
  CHECK(is_complete(cta));
  CHECK(cta.locations().size() == dta.locations().size() + 1);
  CHECK(cta.transitions().size() == dta.transitions().size() + 8);
  std::size_t sink = cta.locations().size() - 1;
  CHECK_FALSE(cta.locations()[sink].accepting);
  for (const auto& t : cta.transitions())
    if (t.target == sink) CHECK(t.resets == all_reset(2));

  CHECK(complete(cta).transitions().size() == cta.transitions().size());
  CHECK(complete(cta).locations().size() == cta.locations().size());
}

TEST_CASE("completion of a single lower-bounded edge") {
  TimedAutomaton a({"a"}, 1);
  a.add_location(0, true);
  a.add_transition({0, 0, Guard(std::vector<Interval>{{1, true, std::nullopt, false}}), {false}, 0});
  auto c = complete(a);
  REQUIRE(c.locations().size() == 2);
  const Transition* to_sink = nullptr;
  for (const auto& t : c.transitions())
    if (t.source == 0 && t.target == 1) to_sink = &t;
  REQUIRE(to_sink);
  // The complement of (1, inf) in the non-negative reals is [0, 1].
  CHECK(std::get<Guard>(to_sink->guard)[0] == Interval{0, false, 1, false});
}

TEST_CASE("clocked words from delay words") {
  auto c = clocked_from_delay({{"a", q(21, 20)}, {"b", q(0)}}, {rt({0, 1}), rt({0, 1})});
  REQUIRE(c.size() == 2);
  CHECK(c[0].values == ClockValuation{q(21, 20), q(21, 20)});
  CHECK(c[1].values == ClockValuation{q(21, 20), q(0)});

  auto d = clocked_from_delay({{"a", q(21, 20)}, {"a", q(21, 20)}, {"a", q(21, 20)}},
                              {rt({0, 1}), rt({1, 1}), rt({0, 1})});
  CHECK(d[0].values == ClockValuation{q(21, 20), q(21, 20)});
  CHECK(d[1].values == ClockValuation{q(21, 10), q(21, 20)});
  CHECK(d[2].values == ClockValuation{q(21, 20), q(21, 20)});

  CHECK(clocked_from_delay({}, {}).empty());
  CHECK_THROWS_AS(clocked_from_delay({{"a", q(1)}}, {}), LengthMismatch);
}

TEST_CASE("delay words from reset-clocked words and doomedness") {
  ResetClockedWord w{rcl("a", {q(21, 20), q(21, 20)}, rt({0, 1})), rcl("b", {q(21, 20), q(0)}, rt({0, 1}))};
  auto d = delay_from_reset_clocked(w);
  REQUIRE(d);
  CHECK(*d == DelayTimedWord{{"a", q(21, 20)}, {"b", q(0)}});

  CHECK(is_doomed({rcl("a", {q(1), q(2)}, rt({1, 1}))}));
  CHECK(is_doomed({rcl("a", {q(2), q(2)}, rt({0, 0})), rcl("a", {q(1), q(1)}, rt({1, 1}))}));
  CHECK_FALSE(is_doomed({}));
}

TEST_CASE("projections and the lexicographic order") {
  ResetClockedWord w{rcl("a", {q(21, 20), q(21, 20)}, rt({0, 1}))};
  CHECK(vw(w) == ClockedWord{{"a", {q(21, 20), q(21, 20)}}});
  ResetClockedWord z{rcl("a", {q(0), q(0)}, rt({1, 1})), rcl("b", {q(0), q(0)}, rt({1, 1}))};
  CHECK(resets_of(z) == std::vector<ResetTuple>{rt({1, 1}), rt({1, 1})});
  CHECK(lex_leq({q(0), q(0)}, {q(21, 20), q(21, 20)}));
  CHECK_FALSE(lex_leq({q(1), q(2)}, {q(1), q(1)}));
}

TEST_CASE("membership of reset-clocked words on the example") {
  auto cta = test::load("example_cta.json");
  CHECK(accepts_reset_clocked(cta, {rcl("a", {q(21, 20), q(21, 20)}, rt({0, 1}))}));
  CHECK_FALSE(accepts_reset_clocked(cta, {rcl("a", {q(0), q(0)}, rt({1, 1}))}));
  // The transition resets only c2, so claiming both resets makes the word invalid.
  CHECK_FALSE(accepts_reset_clocked(cta, {rcl("a", {q(21, 20), q(21, 20)}, rt({1, 1}))}));
}

TEST_CASE("word round trip through both transforms", "[property]") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    std::size_t clocks = 1 + i % 3;
    auto delays = test::random_delay_word(rng, {"a", "b"}, 6, 4);
    std::vector<ResetTuple> resets;
    for (std::size_t k = 0; k < delays.size(); ++k) resets.push_back(test::random_resets(rng, clocks));
    auto word = attach_resets(clocked_from_delay(delays, resets), resets);
    auto back = delay_from_reset_clocked(word);
    REQUIRE(back);
    CHECK(*back == delays);
    CHECK(clocked_from_delay(*back, resets_of(word)) == vw(word));
  }
}

TEST_CASE("completion preserves the language", "[property]") {
  std::mt19937_64 rng(12);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    // A random complete automaton with some edges removed is a random partial DTA.
    CaseSpec spec;
    spec.locations = 3;
    spec.actions = 2;
    spec.clocks = 1 + seed % 2;
    spec.max_constant = 3;
    spec.seed = seed;
    auto full = generate(spec);
    TimedAutomaton partial(full.alphabet(), full.clocks());
    for (const auto& l : full.locations()) partial.add_location(l.id, l.accepting);
    partial.set_initial(full.initial());
    for (std::size_t t = 0; t < full.transitions().size(); ++t)
      if (t % 3 != 1) partial.add_transition(full.transitions()[t]);
    auto completed = complete(partial);
    REQUIRE(is_complete(completed));
    for (int i = 0; i < 50; ++i) {
      auto w = test::random_delay_word(rng, full.alphabet(), 5, 4);
      auto r = run(completed, w);
      CHECK(r.accepted == test::reference_accepts(partial, w));
      CHECK(r.trace.size() == w.size() + 1);
      if (!r.clocked_word.empty())
        for (const auto& x : r.clocked_word[0].values) CHECK(x == r.clocked_word[0].values[0]);
    }
  }
}

TEST_CASE("lexicographic order is total", "[property]") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    auto a = test::random_valuation(rng, 2, 2);
    auto b = test::random_valuation(rng, 2, 2);
    auto c = test::random_valuation(rng, 2, 2);
    CHECK((lex_leq(a, b) || lex_leq(b, a)));
    if (lex_leq(a, b) && lex_leq(b, a)) CHECK(a == b);
    if (lex_leq(a, b) && lex_leq(b, c)) CHECK(lex_leq(a, c));
  }
}
