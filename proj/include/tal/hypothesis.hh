#pragma once

#include "tal/automaton.hh"
#include "tal/observation_table.hh"
#include "tal/region_set.hh"

#include <optional>
#include <string>
#include <vector>

namespace tal {

struct AbstractTransition {
  std::size_t source = 0;
  ResetClockedLetter letter;
  std::size_t target = 0;
};

// Finite automaton over the reset-clocked letters seen in a prepared table.
struct AbstractDFA {
  std::vector<std::string> alphabet;
  std::size_t clocks = 0;
  ClockCeiling kappa;
  std::size_t initial = 0;
  std::vector<bool> accepting;                // per location
  std::vector<std::size_t> representative;   // S row of each location
  std::vector<std::size_t> location_of_row;  // for every table row
  std::vector<AbstractTransition> transitions;

  std::size_t size() const { return accepting.size(); }
  std::optional<std::size_t> step(std::size_t location, const ResetClockedLetter& letter) const;
  // nullopt when some letter has no abstract transition.
  std::optional<bool> accepts(const ResetClockedWord& word) const;
};

AbstractDFA build_dfa(const ObservationTable& t, bool check_evidence = false);

struct PartitionTrace {
  std::vector<ClockValuation> valuations;  // sorted, zero first
  ClockCeiling refined;
  std::vector<RegionSet> a, u, w;
  RegionSet u0;
  std::vector<std::vector<std::size_t>> regrouped;  // groups split by the last step
  std::vector<std::size_t> repaired;                // indices whose own region had to be carved out
};

struct PartitionResult {
  std::vector<RegionSet> blocks;  // blocks[i] contains trace.valuations[i]
  PartitionTrace trace;
};

// Valuations must contain zero and lie in pairwise distinct regions under `kappa`.
PartitionResult partition(std::vector<ClockValuation> psi, const ClockCeiling& kappa);

TimedAutomaton build_hypothesis(const AbstractDFA& m);

std::vector<std::string> render_guard(const RegionSet& guard);

}  // namespace tal
