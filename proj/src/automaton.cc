#include "tal/automaton.hh"

#include "tal/errors.hh"

#include <algorithm>

namespace tal {

bool guard_holds(const GuardForm& g, const ClockValuation& v) {
  if (const auto* box = std::get_if<Guard>(&g)) return box->satisfied_by(v);
  return std::get<RegionSet>(g).contains(v);
}

bool guard_holds(const GuardForm& g, const Region& r, const ClockCeiling& k, std::size_t offset) {
  if (const auto* box = std::get_if<Guard>(&g)) return region_satisfies(r, *box, k, offset);
  const auto& set = std::get<RegionSet>(g);
  std::size_t n = set.ceiling().size();
  if (offset == 0 && n == r.clocks()) return set.contains_refined(r);
  return set.contains_refined(restrict_clocks(r, offset, n));
}

TimedAutomaton::TimedAutomaton(std::vector<std::string> alphabet, std::size_t clocks)
    : alphabet_(std::move(alphabet)), clocks_(clocks), ceiling_(std::vector<int>(clocks, 1)) {}

std::size_t TimedAutomaton::add_location(int id, bool accepting) {
  locations_.push_back({id, accepting});
  rebuild_index();
  return locations_.size() - 1;
}

void TimedAutomaton::add_transition(Transition t) {
  if (t.source >= locations_.size() || t.target >= locations_.size())
    throw std::out_of_range("transition refers to an unknown location");
  if (t.action >= alphabet_.size()) throw AlphabetMismatch("transition action index out of range");
  if (t.resets.size() != clocks_) throw LengthMismatch("reset tuple length differs from clock count");
  std::vector<int> need(clocks_, 1);
  if (const auto* box = std::get_if<Guard>(&t.guard)) {
    if (box->clocks() != clocks_) throw LengthMismatch("guard clock count differs from automaton");
    for (std::size_t c = 0; c < clocks_; ++c) need[c] = std::max(need[c], box->max_constant(c));
  } else {
    const auto& set = std::get<RegionSet>(t.guard);
    if (set.ceiling().size() != clocks_) throw LengthMismatch("guard clock count differs from automaton");
    need = set.ceiling().values();
  }
  for (std::size_t c = 0; c < clocks_; ++c) {
    if (need[c] > ceiling_[c]) {
      if (explicit_ceiling_)
        throw CeilingMismatch("guard constant " + std::to_string(need[c]) + " exceeds declared ceiling of c" +
                              std::to_string(c + 1));
      std::vector<int> k = ceiling_.values();
      k[c] = need[c];
      ceiling_ = ClockCeiling(k);
    }
  }
  outgoing_[t.source * alphabet_.size() + t.action].push_back(transitions_.size());
  transitions_.push_back(std::move(t));
}

void TimedAutomaton::set_ceiling(ClockCeiling k) {
  if (k.size() != clocks_) throw CeilingMismatch("ceiling clock count differs from automaton");
  for (std::size_t c = 0; c < clocks_; ++c)
    if (k[c] < ceiling_[c])
      throw CeilingMismatch("declared ceiling " + std::to_string(k[c]) + " of c" + std::to_string(c + 1) +
                            " is below a guard constant " + std::to_string(ceiling_[c]));
  ceiling_ = std::move(k);
  explicit_ceiling_ = true;
}

std::optional<std::size_t> TimedAutomaton::action_index(const std::string& action) const {
  auto it = std::find(alphabet_.begin(), alphabet_.end(), action);
  if (it == alphabet_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - alphabet_.begin());
}

std::optional<std::size_t> TimedAutomaton::location_index(int id) const {
  for (std::size_t i = 0; i < locations_.size(); ++i)
    if (locations_[i].id == id) return i;
  return std::nullopt;
}

bool TimedAutomaton::uses_region_guards() const {
  return std::any_of(transitions_.begin(), transitions_.end(),
                     [](const Transition& t) { return std::holds_alternative<RegionSet>(t.guard); });
}

void TimedAutomaton::rebuild_index() {
  outgoing_.assign(locations_.size() * alphabet_.size(), {});
  for (std::size_t i = 0; i < transitions_.size(); ++i)
    outgoing_[transitions_[i].source * alphabet_.size() + transitions_[i].action].push_back(i);
}

namespace {

std::size_t require_action(const TimedAutomaton& a, const std::string& action) {
  auto idx = a.action_index(action);
  if (!idx) throw AlphabetMismatch("action '" + action + "' is not in the alphabet");
  return *idx;
}

// Index of the unique enabled transition, nullopt if none.
std::optional<std::size_t> enabled(const TimedAutomaton& a, std::size_t loc, std::size_t action,
                                   const ClockValuation& v) {
  std::optional<std::size_t> found;
  for (std::size_t t : a.outgoing(loc, action)) {
    if (!guard_holds(a.transitions()[t].guard, v)) continue;
    if (found)
      throw NondeterministicAutomaton("two transitions enabled at location " +
                                      std::to_string(a.locations()[loc].id) + " on '" + a.alphabet()[action] +
                                      "' for " + format_valuation(v));
    found = t;
  }
  return found;
}

}  // namespace

RunResult run(const TimedAutomaton& a, const DelayTimedWord& word) {
  RunResult out;
  RunState state{a.initial(), zero_valuation(a.clocks())};
  out.trace.push_back(state);
  for (const auto& letter : word) {
    std::size_t action = require_action(a, letter.action);
    for (auto& x : state.valuation) x += letter.delay;
    auto t = enabled(a, state.location, action, state.valuation);
    if (!t)
      throw IncompleteAutomaton("no transition enabled at location " + std::to_string(a.locations()[state.location].id) +
                                " on '" + letter.action + "' for " + format_valuation(state.valuation));
    const Transition& tr = a.transitions()[*t];
    out.clocked_word.push_back({letter.action, state.valuation});
    out.reset_word.push_back({letter.action, letter.delay, tr.resets});
    for (std::size_t c = 0; c < a.clocks(); ++c)
      if (tr.resets[c]) state.valuation[c] = 0;
    state.location = tr.target;
    out.trace.push_back(state);
  }
  out.accepted = a.locations()[state.location].accepting;
  return out;
}

bool accepts_partial(const TimedAutomaton& a, const DelayTimedWord& word) {
  std::size_t loc = a.initial();
  ClockValuation v = zero_valuation(a.clocks());
  for (const auto& letter : word) {
    auto action = a.action_index(letter.action);
    if (!action) return false;
    for (auto& x : v) x += letter.delay;
    auto t = enabled(a, loc, *action, v);
    if (!t) return false;
    const Transition& tr = a.transitions()[*t];
    for (std::size_t c = 0; c < a.clocks(); ++c)
      if (tr.resets[c]) v[c] = 0;
    loc = tr.target;
  }
  return a.locations()[loc].accepting;
}

bool accepts_reset_clocked(const TimedAutomaton& a, const ResetClockedWord& word) {
  auto delays = delay_from_reset_clocked(word);
  if (!delays) return false;
  RunResult r = run(a, *delays);
  for (std::size_t i = 0; i < word.size(); ++i)
    if (r.reset_word[i].resets != word[i].resets) return false;
  return r.accepted;
}

namespace {

// Number of enabled transitions per (location, action, region) must be <= 1 (or == 1).
bool check_regions(const TimedAutomaton& a, bool require_total) {
  const auto& regions = enumerate_regions(a.ceiling());
  for (std::size_t l = 0; l < a.locations().size(); ++l) {
    for (std::size_t s = 0; s < a.alphabet().size(); ++s) {
      const auto& out = a.outgoing(l, s);
      for (const Region& r : regions) {
        int count = 0;
        for (std::size_t t : out)
          if (guard_holds(a.transitions()[t].guard, r, a.ceiling(), 0)) ++count;
        if (count > 1 || (require_total && count == 0)) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool is_deterministic(const TimedAutomaton& a) { return check_regions(a, false); }
bool is_complete(const TimedAutomaton& a) { return check_regions(a, true); }

TimedAutomaton complete(const TimedAutomaton& a) {
  if (!is_deterministic(a)) throw NondeterministicAutomaton("completion requires a deterministic automaton");
  struct Piece {
    std::size_t source, action;
    GuardForm guard;
  };
  std::vector<Piece> pieces;
  for (std::size_t l = 0; l < a.locations().size(); ++l) {
    for (std::size_t s = 0; s < a.alphabet().size(); ++s) {
      const auto& out = a.outgoing(l, s);
      bool regional = std::any_of(out.begin(), out.end(), [&](std::size_t t) {
        return std::holds_alternative<RegionSet>(a.transitions()[t].guard);
      });
      if (regional) {
        RegionSet rest = RegionSet::full(a.ceiling());
        for (std::size_t t : out) {
          const auto& g = a.transitions()[t].guard;
          RegionSet covered = std::holds_alternative<Guard>(g) ? RegionSet::from_guard(std::get<Guard>(g), a.ceiling())
                                                               : std::get<RegionSet>(g).refine(a.ceiling());
          rest = rest.difference(covered);
        }
        if (!rest.is_empty()) pieces.push_back({l, s, rest});
        continue;
      }
      std::vector<Guard> rest{Guard::full(a.clocks())};
      for (std::size_t t : out) {
        std::vector<Guard> next;
        for (const Guard& box : rest)
          for (Guard& part : subtract(box, std::get<Guard>(a.transitions()[t].guard))) next.push_back(std::move(part));
        rest = std::move(next);
      }
      for (Guard& box : rest) pieces.push_back({l, s, std::move(box)});
    }
  }
  if (pieces.empty()) return a;

  TimedAutomaton out = a;
  int sink_id = 0;
  for (const auto& loc : a.locations()) sink_id = std::max(sink_id, loc.id + 1);
  std::size_t sink = out.add_location(sink_id, false);
  for (auto& p : pieces) out.add_transition({p.source, p.action, std::move(p.guard), all_reset(a.clocks()), sink});
  for (std::size_t s = 0; s < a.alphabet().size(); ++s)
    out.add_transition({sink, s, Guard::full(a.clocks()), all_reset(a.clocks()), sink});
  return out;
}

}  // namespace tal
