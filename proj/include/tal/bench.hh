#pragma once

#include "tal/automaton.hh"
#include "tal/learner.hh"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tal {

struct CaseSpec {
  std::size_t locations = 2;
  std::size_t actions = 1;
  std::size_t clocks = 1;
  int max_constant = 2;
  std::uint64_t seed = 1;
  double accept_prob = 0.5;
  std::size_t max_intervals = 3;  // boxes per (location, action)
  bool always_reset = false;

  // "<locations>_<actions>_<clocks>_<max constant>_s<seed>"
  std::string id() const;
};

// Random complete deterministic target. Location 0 is initial.
TimedAutomaton generate(const CaseSpec& spec);

enum class LearnMode { powerful, normal, rta };
std::optional<LearnMode> parse_mode(const std::string& text);
std::string to_string(LearnMode mode);

struct BenchCase {
  std::string id;
  TimedAutomaton target;
};

struct BenchRow {
  std::string case_id;
  LearnMode mode = LearnMode::powerful;
  bool timeout = false;
  QueryStats stats;
  std::uint64_t tables_explored = 0;
  std::size_t learned_locations = 0;
  double time_ms = 0;
};

// Learns `target` in the given mode with its own ceiling.
LearnOutcome learn_target(const TimedAutomaton& target, LearnMode mode, const LearnOptions& options);

// One row per (case, mode). Budget exhaustion gives a TIMEOUT row; a learned model that fails the
// independent equivalence re-check throws.
std::vector<BenchRow> bench(const std::vector<BenchCase>& cases, const std::vector<LearnMode>& modes,
                            const LearnOptions& options);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const BenchRow& row);

}  // namespace tal
