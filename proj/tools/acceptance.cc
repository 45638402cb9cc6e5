// One PASS/FAIL line per acceptance criterion. Exit status 0 only when every selected criterion passes.
#include "tal/bench.hh"
#include "tal/equivalence.hh"
#include "tal/errors.hh"
#include "tal/hypothesis.hh"
#include "tal/json_io.hh"
#include "tal/learner.hh"
#include "tal/observation_table.hh"
#include "tal/region_set.hh"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <new>
#include <random>
#include <set>
#include <sstream>

using namespace tal;

namespace {

struct Config {
  std::string data_dir = TAL_DATA_DIR;
  double normal_budget_s = 3600;
  double cross_budget_s = 300;
  std::vector<int> only;
};

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail.str("");
    if (!pass) detail << "; ";
    pass = false;
    detail << why;
  }
  void note(const std::string& s) {
    if (!pass) return;
    if (!detail.str().empty()) detail << "; ";
    detail << s;
  }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double x, int digits = 1) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

Rational random_rational(std::mt19937_64& rng, int max_int) {
  static const std::int64_t dens[] = {1, 1, 2, 3, 4, 5, 10};
  std::int64_t d = dens[std::uniform_int_distribution<int>(0, 6)(rng)];
  return Rational(std::uniform_int_distribution<std::int64_t>(0, max_int * d)(rng), d);
}

ClockValuation random_valuation(std::mt19937_64& rng, std::size_t clocks, int max_int) {
  ClockValuation v;
  for (std::size_t c = 0; c < clocks; ++c) v.push_back(random_rational(rng, max_int));
  return v;
}

DelayTimedWord random_word(std::mt19937_64& rng, const std::vector<std::string>& alphabet, std::size_t max_len,
                           int max_delay) {
  DelayTimedWord w(std::uniform_int_distribution<std::size_t>(0, max_len)(rng));
  for (auto& l : w)
    l = {alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)],
         random_rational(rng, max_delay)};
  return w;
}

ResetTuple random_resets(std::mt19937_64& rng, std::size_t clocks) {
  ResetTuple r(clocks);
  for (std::size_t c = 0; c < clocks; ++c) r[c] = std::bernoulli_distribution(0.5)(rng);
  return r;
}

// Interval-guard evaluator written from the bound fields; independent of the library's run().
bool reference_accepts(const TimedAutomaton& a, const DelayTimedWord& w) {
  auto inside = [](const Interval& iv, const Rational& x) {
    Rational lo(iv.lower);
    if (iv.lower_strict ? !(x > lo) : !(x >= lo)) return false;
    if (!iv.upper) return true;
    return iv.upper_strict ? x < Rational(*iv.upper) : x <= Rational(*iv.upper);
  };
  std::size_t loc = a.initial();
  ClockValuation v(a.clocks(), Rational(0));
  for (const auto& l : w) {
    for (auto& x : v) x += l.delay;
    const Transition* fired = nullptr;
    for (const auto& t : a.transitions()) {
      if (t.source != loc || a.alphabet()[t.action] != l.action) continue;
      const auto& g = std::get<Guard>(t.guard);
      bool ok = true;
      for (std::size_t c = 0; c < a.clocks(); ++c) ok = ok && inside(g[c], v[c]);
      if (ok) fired = &t;
    }
    if (!fired) return false;
    for (std::size_t c = 0; c < a.clocks(); ++c)
      if (fired->resets[c]) v[c] = 0;
    loc = fired->target;
  }
  return a.locations()[loc].accepting;
}

// Same language with every location duplicated; edges alternate between the copies.
TimedAutomaton unfold(const TimedAutomaton& a) {
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

// Reference targets may be partial; the learners expect complete automata.
TimedAutomaton load_target(const Config& cfg, const std::string& name) {
  return complete(load_automaton(cfg.data_dir + "/" + name + ".json"));
}

void learn_check(Verdict& v, const std::string& name, const TimedAutomaton& target, LearnMode mode,
                 double budget_s, std::size_t want_locations, bool at_most) {
  LearnOptions o;
  o.time_budget_ms = budget_s * 1000;
  o.max_instances = std::numeric_limits<std::uint64_t>::max();
  auto start = Clock::now();
  LearnOutcome out;
  try {
    out = learn_target(target, mode, o);
  } catch (const Error& e) {
    v.fail(name + ": " + e.what() + " after " + fmt(seconds_since(start)) + " s");
    return;
  } catch (const std::bad_alloc&) {
    v.fail(name + ": out of memory after " + fmt(seconds_since(start)) + " s");
    return;
  }
  double took = seconds_since(start);
  std::size_t n = out.hypothesis.locations().size();
  if (equivalent(target, out.hypothesis)) v.fail(name + ": learned model not equivalent");
  if (at_most ? n > want_locations : n != want_locations)
    v.fail(name + ": " + std::to_string(n) + " locations");
  if (took > budget_s) v.fail(name + ": took " + fmt(took) + " s");
  auto report = query_bound_report(out, target.locations().size(), target.alphabet().size(),
                                   target.ceiling());
  if (!report.within()) v.fail(name + ": query bound exceeded (" + to_string(report) + ")");
  v.note(name + " n=" + std::to_string(n) + " " + fmt(took, 2) + " s mq=" + std::to_string(out.stats.membership) +
         " eq=" + std::to_string(out.stats.equivalence) + " tables=" + std::to_string(out.tables_explored));
}

Verdict example_run(const Config& cfg) {
  Verdict v;
  learn_check(v, "example", load_target(cfg, "example_cta"), LearnMode::powerful, 10, 3, false);
  return v;
}

Verdict unbalanced(const Config& cfg) {
  Verdict v;
  learn_check(v, "unbalanced2", load_target(cfg, "unbalanced2"), LearnMode::powerful, 120, 8,
              true);
  return v;
}

Verdict normal_mode(const Config& cfg) {
  Verdict v;
  for (const char* name : {"normal_a", "normal_c"})
    learn_check(v, name, load_target(cfg, name), LearnMode::normal,
                cfg.normal_budget_s, 3, false);
  return v;
}

Verdict partition_suite(const Config&) {
  Verdict v;
  std::mt19937_64 rng(4);
  std::size_t failures = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t clocks = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::vector<int> bounds(clocks);
    for (auto& b : bounds) b = std::uniform_int_distribution<int>(1, 4)(rng);
    ClockCeiling k(bounds);
    int top = *std::max_element(bounds.begin(), bounds.end());
    std::size_t size = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    std::vector<ClockValuation> psi{ClockValuation(clocks, Rational(0))};
    std::set<Region> seen{region_of(psi[0], k)};
    for (int tries = 0; psi.size() < size && tries < 100; ++tries) {
      auto x = random_valuation(rng, clocks, top + 1);
      if (seen.insert(region_of(x, k)).second) psi.push_back(x);
    }
    std::shuffle(psi.begin(), psi.end(), rng);
    auto p = partition(psi, k);
    const auto& blocks = p.blocks;
    bool ok = blocks.size() == psi.size();
    auto all = RegionSet::empty(blocks.front().ceiling());
    for (std::size_t i = 0; ok && i < blocks.size(); ++i) {
      ok = blocks[i].contains(p.trace.valuations[i]);
      for (std::size_t j = i + 1; ok && j < blocks.size(); ++j) ok = blocks[i].intersect(blocks[j]).is_empty();
      all = all.unite(blocks[i]);
    }
    ok = ok && RegionSet::full(all.ceiling()).difference(all).is_empty();
    for (int s = 0; ok && s < 1000; ++s) {
      auto x = random_valuation(rng, clocks, top + 2);
      int hits = 0;
      for (const auto& b : blocks) hits += b.contains(x) ? 1 : 0;
      ok = hits == 1;
    }
    if (!ok) ++failures;
  }
  if (failures) v.fail(std::to_string(failures) + " of 500 sets failed");
  v.note("500 sets, 1000 valuations each");
  return v;
}

Verdict region_suite(const Config&) {
  Verdict v;
  for (std::size_t clocks = 1; clocks <= 3; ++clocks) {
    std::vector<int> k(clocks, 1);
    while (true) {
      ClockCeiling ceiling(k);
      if (enumerate_regions(ceiling).size() > region_count_bound(ceiling))
        v.fail("count over bound at " + to_string(ceiling));
      std::size_t c = 0;
      while (c < clocks && k[c] == 4) k[c++] = 1;
      if (c == clocks) break;
      ++k[c];
    }
  }
  std::mt19937_64 rng(5);
  std::size_t bad_membership = 0, unsound = 0, incomplete = 0;
  for (int i = 0; i < 1000; ++i) {
    std::size_t clocks = 1 + i % 3;
    ClockCeiling k(std::vector<int>(clocks, 1 + i % 4));
    auto x = random_valuation(rng, clocks, k[0] + 2);
    int hits = 0;
    for (const auto& r : enumerate_regions(k))
      if (RegionSet::single(r, k).contains(x)) ++hits;
    if (hits != 1) ++bad_membership;
  }
  for (int i = 0; i < 1000; ++i) {
    std::size_t clocks = 1 + i % 3;
    ClockCeiling k(std::vector<int>(clocks, 1 + i % 3));
    auto x = random_valuation(rng, clocks, k[0] + 1);
    const auto& all = enumerate_regions(k);
    const Region& target = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
    auto shifted = [&](const Rational& d) {
      auto y = x;
      for (auto& c : y) c += d;
      return region_of(y, k);
    };
    auto d = solve_delay(x, target, k);
    if (d) {
      if (*d < 0 || shifted(*d) != target) ++unsound;
      continue;
    }
    // Brute force over integer crossings and the midpoints between them.
    std::vector<Rational> cuts{Rational(0)};
    for (std::size_t c = 0; c < clocks; ++c)
      for (int n = 0; n <= k[c] + 1; ++n)
        if (Rational(n) >= x[c]) cuts.push_back(Rational(n) - x[c]);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Rational> tries = cuts;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) tries.push_back((cuts[j] + cuts[j + 1]) / 2);
    tries.push_back(cuts.back() + 1);
    for (const auto& t : tries)
      if (shifted(t) == target) {
        ++incomplete;
        break;
      }
  }
  if (bad_membership) v.fail(std::to_string(bad_membership) + " valuations not in exactly one region");
  if (unsound) v.fail(std::to_string(unsound) + " unsound delays");
  if (incomplete) v.fail(std::to_string(incomplete) + " missed delays");
  v.note("bounds for ceilings up to 4 and 3 clocks, 1000 valuations, 1000 delay problems");
  return v;
}

TimedAutomaton random_cta(std::mt19937_64& rng, std::size_t clocks, std::uint64_t seed) {
  CaseSpec spec;
  spec.locations = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
  spec.actions = 2;
  spec.clocks = clocks;
  spec.max_constant = std::uniform_int_distribution<int>(1, 3)(rng);
  spec.seed = seed;
  return generate(spec);
}

Verdict equivalence_suite(const Config&) {
  Verdict v;
  std::mt19937_64 rng(6);
  std::size_t contradicted = 0, bad_witness = 0, eq_verdicts = 0, ce_verdicts = 0;
  for (int pair = 0; pair < 100; ++pair) {
    std::size_t clocks = 1 + pair % 2;
    auto a = random_cta(rng, clocks, 100 + pair);
    // Every third pair is a known-equal restructuring; the rest are independent draws.
    TimedAutomaton b = pair % 3 == 0 ? unfold(a) : random_cta(rng, clocks, 5000 + pair);
    int top = std::max(a.ceiling().values().empty() ? 1 : *std::max_element(a.ceiling().values().begin(),
                                                                             a.ceiling().values().end()),
                       b.ceiling().values().empty() ? 1 : *std::max_element(b.ceiling().values().begin(),
                                                                             b.ceiling().values().end()));
    auto verdict = equivalent(a, b);
    if (!verdict) {
      ++eq_verdicts;
      for (int i = 0; i < 10000; ++i) {
        auto w = random_word(rng, a.alphabet(), 6, top + 1);
        if (reference_accepts(a, w) != reference_accepts(b, w)) {
          ++contradicted;
          break;
        }
      }
    } else {
      ++ce_verdicts;
      bool in_a = reference_accepts(a, verdict->word), in_b = reference_accepts(b, verdict->word);
      if (in_a == in_b || verdict->positive != in_a) ++bad_witness;
    }
  }
  if (contradicted) v.fail(std::to_string(contradicted) + " equivalent verdicts contradicted by sampling");
  if (bad_witness) v.fail(std::to_string(bad_witness) + " counterexamples do not replay");
  v.note(std::to_string(eq_verdicts) + " equivalent, " + std::to_string(ce_verdicts) + " counterexamples");
  return v;
}

Verdict round_trip(const Config&) {
  Verdict v;
  std::mt19937_64 rng(7);
  std::size_t broken = 0, missed = 0, witnesses = 0;
  for (int i = 0; i < 1000; ++i) {
    std::size_t clocks = 1 + i % 3;
    auto delays = random_word(rng, {"a", "b"}, 6, 4);
    if (delays.empty()) delays.push_back({"a", random_rational(rng, 4)});
    std::vector<ResetTuple> resets;
    for (std::size_t k = 0; k < delays.size(); ++k) resets.push_back(random_resets(rng, clocks));
    auto word = attach_resets(clocked_from_delay(delays, resets), resets);
    auto back = delay_from_reset_clocked(word);
    if (!back || *back != delays || is_doomed(word) || clocked_from_delay(*back, resets) != vw(word)) ++broken;

    // Unequal first letter: the clocks start together, so their first values must agree.
    if (clocks >= 2) {
      auto bad = word;
      bad[0].values[1] += Rational(1, 3);
      ++witnesses;
      if (!is_doomed(bad)) ++missed;
    }
    // Negative derived delay: after a letter that resets nothing, every clock steps back by the same amount.
    for (std::size_t j = 1; j < word.size(); ++j) {
      if (word[j - 1].resets != ResetTuple(clocks, false)) continue;
      auto bad = word;
      bool ok = true;
      for (std::size_t c = 0; c < clocks; ++c) {
        bad[j].values[c] = word[j - 1].values[c] - Rational(1, 7);
        ok = ok && bad[j].values[c] >= 0;
      }
      if (!ok) continue;
      ++witnesses;
      if (!is_doomed(bad)) ++missed;
      break;
    }
  }
  if (broken) v.fail(std::to_string(broken) + " words do not round-trip");
  if (missed) v.fail(std::to_string(missed) + " doomed witnesses not detected");
  v.note("1000 words, " + std::to_string(witnesses) + " doomed witnesses");
  return v;
}

ResetTuple bits(const std::string& s) {
  ResetTuple r;
  for (char c : s) r.push_back(c == '1');
  return r;
}

Verdict pins(const Config& cfg) {
  Verdict v;
  auto target = load_automaton(cfg.data_dir + "/example_cta.json");
  PowerfulTeacher teacher(target);
  ClockCeiling k({3, 3});
  Rational d(21, 20);
  auto L = [](const std::string& a, Rational x, Rational y, const std::string& b) {
    return ResetClockedLetter{a, {x, y}, bits(b)};
  };
  auto a105 = L("a", d, d, "01"), a0 = L("a", 0, 0, "11"), b0 = L("b", 0, 0, "11");
  RegionWord diagonal{{"a", region_of({Rational(3, 2), Rational(3, 2)}, k)}};

  auto succ = find_valid_successor({a0}, diagonal, k, std::ref<PowerfulOracle>(teacher));
  if (!succ || region_word_of(vw(*succ), k) != diagonal || (*succ)[0].resets != bits("11"))
    v.fail("valid successor query");

  struct Row {
    ResetClockedWord word;
    bool in_s, f_eps, f_e;
    std::string g;
  };
  std::vector<Row> rows{
      {{}, true, false, true, "01"},
      {{a105}, true, true, false, "11"},
      {{a0}, true, false, false, "11"},
      {{b0}, false, false, false, "11"},
      {{a105, a0}, false, false, false, "11"},
      {{a105, b0}, false, false, false, "11"},
      {{a105, L("b", d, 0, "01")}, false, true, false, "11"},
      {{a105, L("b", Rational(41, 20), 1, "11")}, false, false, false, "11"},
      {{a0, L("a", d, d, "11")}, false, false, false, "11"},
      {{a0, a0}, false, false, false, "11"},
      {{a0, b0}, false, false, false, "11"},
  };
  auto table = [&](std::size_t count, bool a0_in_s, bool with_suffix) {
    ObservationTable t({"a", "b"}, 2, k);
    for (std::size_t i = 1; i < count; ++i) t.add_row(rows[i].word, i == 2 ? a0_in_s : rows[i].in_s);
    if (with_suffix) t.add_suffix(diagonal);
    fill(t, teacher);
    return t;
  };

  auto t2 = table(rows.size(), true, true);
  std::size_t wrong = 0;
  for (const auto& r : rows) {
    auto i = t2.find_row(r.word);
    if (!i || t2.cell(*i, 0)->accepted != r.f_eps || t2.cell(*i, 1)->accepted != r.f_e ||
        t2.cell(*i, 1)->resets != std::vector<ResetTuple>{bits(r.g)})
      ++wrong;
  }
  if (wrong) v.fail(std::to_string(wrong) + " worked-example rows differ");

  auto t4 = table(9, false, false);
  auto st = prepared_status(t4, false);
  if (!st.inconsistency || st.inconsistency->new_suffix != diagonal) v.fail("consistency witness");
  make_consistent(t4, teacher);
  if (t4.suffixes().size() != 2 || t4.suffixes()[1] != diagonal) v.fail("consistency repair suffix");
  v.note("successor resets ⊤⊤, repair suffix " + to_string(diagonal, k) + ", 11 rows");
  return v;
}

Verdict cross_mode(const Config& cfg) {
  Verdict v;
  std::mt19937_64 rng(9);
  std::size_t agreed = 0;
  for (int i = 0; i < 20; ++i) {
    CaseSpec spec;
    spec.locations = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    spec.actions = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    spec.clocks = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    spec.max_constant = std::uniform_int_distribution<int>(1, 2)(rng);
    spec.seed = 900 + i;
    auto target = generate(spec);
    LearnOptions o;
    o.time_budget_ms = cfg.cross_budget_s * 1000;
    o.max_instances = std::numeric_limits<std::uint64_t>::max();
    auto start = Clock::now();
    try {
      auto p = learn_target(target, LearnMode::powerful, o);
      auto n = learn_target(target, LearnMode::normal, o);
      if (equivalent(p.hypothesis, n.hypothesis) || equivalent(target, n.hypothesis) ||
          equivalent(target, p.hypothesis))
        v.fail(spec.id() + ": results differ");
      else
        ++agreed;
    } catch (const Error& e) {
      v.fail(spec.id() + ": " + e.what() + " after " + fmt(seconds_since(start)) + " s");
    } catch (const std::bad_alloc&) {
      v.fail(spec.id() + ": out of memory after " + fmt(seconds_since(start)) + " s");
    }
  }
  v.note(std::to_string(agreed) + " of 20 targets agree");
  if (!v.pass) v.detail << " (" << agreed << " of 20 agree)";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app("Acceptance checks");
  app.add_option("--data", cfg.data_dir, "Directory with the reference automata");
  app.add_option("--normal-budget", cfg.normal_budget_s, "Seconds per normal-mode target in check 3");
  app.add_option("--cross-budget", cfg.cross_budget_s, "Seconds per learn call in check 9");
  app.add_option("--only", cfg.only, "Run only these checks (1-9)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict(const Config&)>>> checks{
      {"example powerful end-to-end", example_run},
      {"unbalanced2 powerful", unbalanced},
      {"normal mode normal_a/normal_c", normal_mode},
      {"partition properties", partition_suite},
      {"region suite", region_suite},
      {"equivalence vs sampling", equivalence_suite},
      {"word round trip and doomedness", round_trip},
      {"worked-example pins", pins},
      {"cross-mode agreement", cross_mode},
  };
  bool all = true;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    int id = static_cast<int>(i + 1);
    if (!cfg.only.empty() && std::find(cfg.only.begin(), cfg.only.end(), id) == cfg.only.end()) continue;
    auto start = Clock::now();
    Verdict v;
    try {
      v = checks[i].second(cfg);
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    all = all && v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << id << " " << checks[i].first << " [" << v.detail.str() << "] ("
              << fmt(seconds_since(start)) << " s)" << std::endl;
  }
  return all ? 0 : 1;
}
