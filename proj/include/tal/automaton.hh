#pragma once

#include "tal/guard.hh"
#include "tal/region.hh"
#include "tal/region_set.hh"
#include "tal/words.hh"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tal {

// Target automata use interval guards; learned hypotheses use region sets.
using GuardForm = std::variant<Guard, RegionSet>;

bool guard_holds(const GuardForm& g, const ClockValuation& v);
// `r` is a region over `k` covering clocks [offset, offset + clocks of g).
bool guard_holds(const GuardForm& g, const Region& r, const ClockCeiling& k, std::size_t offset);

struct Location {
  int id = 0;
  bool accepting = false;
};

struct Transition {
  std::size_t source = 0;  // location index
  std::size_t action = 0;  // alphabet index
  GuardForm guard;
  ResetTuple resets;
  std::size_t target = 0;
};

class TimedAutomaton {
 public:
  TimedAutomaton() = default;
  TimedAutomaton(std::vector<std::string> alphabet, std::size_t clocks);

  std::size_t add_location(int id, bool accepting);
  void set_initial(std::size_t location) { initial_ = location; }
  void add_transition(Transition t);
  // Explicit ceiling; must dominate every guard constant.
  void set_ceiling(ClockCeiling k);
  void set_accepting(std::size_t location, bool accepting) { locations_[location].accepting = accepting; }

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  std::size_t clocks() const { return clocks_; }
  const std::vector<Location>& locations() const { return locations_; }
  std::size_t initial() const { return initial_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<std::size_t>& outgoing(std::size_t location, std::size_t action) const {
    return outgoing_[location * alphabet_.size() + action];
  }
  const ClockCeiling& ceiling() const { return ceiling_; }

  std::optional<std::size_t> action_index(const std::string& action) const;
  std::optional<std::size_t> location_index(int id) const;
  bool uses_region_guards() const;

 private:
  void rebuild_index();

  std::vector<std::string> alphabet_;
  std::size_t clocks_ = 0;
  std::vector<Location> locations_;
  std::size_t initial_ = 0;
  std::vector<Transition> transitions_;
  std::vector<std::vector<std::size_t>> outgoing_;
  ClockCeiling ceiling_;
  bool explicit_ceiling_ = false;
};

struct RunState {
  std::size_t location = 0;
  ClockValuation valuation;
};

struct RunResult {
  bool accepted = false;
  std::vector<RunState> trace;
  ResetDelayTimedWord reset_word;
  ClockedWord clocked_word;
};

// Unique run on a complete deterministic automaton.
RunResult run(const TimedAutomaton& a, const DelayTimedWord& word);
// Partial semantics: a missing transition rejects. Still requires determinism.
bool accepts_partial(const TimedAutomaton& a, const DelayTimedWord& word);
bool accepts_reset_clocked(const TimedAutomaton& a, const ResetClockedWord& word);

bool is_deterministic(const TimedAutomaton& a);
bool is_complete(const TimedAutomaton& a);  // deterministic and total

// Adds a non-accepting sink covering every guard complement. Unchanged if already complete.
TimedAutomaton complete(const TimedAutomaton& a);

}  // namespace tal
