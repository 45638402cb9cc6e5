#pragma once

#include "tal/automaton.hh"
#include "tal/observation_table.hh"
#include "tal/teacher.hh"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tal {

enum class QueueOrder { guessed_resets, table_size };

struct LearnOptions {
  bool evidence_closed = false;
  std::uint64_t max_rounds = 0;  // equivalence queries; 0 = unlimited
  std::uint64_t max_instances = 1'000'000;
  double time_budget_ms = 0;  // 0 = unlimited
  QueueOrder queue_order = QueueOrder::guessed_resets;
  std::optional<std::string> dump_dir;  // numbered table dumps
  // Normal mode: called every `progress_every` explored instances with (instances, key, rounds).
  std::uint64_t progress_every = 100'000;
  std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)> progress;
};

struct LearnOutcome {
  TimedAutomaton hypothesis;
  QueryStats stats;
  std::uint64_t tables_explored = 0;
  std::uint64_t rounds = 0;  // hypotheses submitted
  std::size_t prefixes = 0, boundary = 0, suffixes = 0;
  std::size_t longest_counterexample = 0;
  std::size_t longest_suffix = 0;
  // Powerful mode: (|S|, hypothesis transition count) at each equivalence query.
  std::vector<std::pair<std::size_t, std::size_t>> progress;
  // Normal mode: frontier key of every popped instance, in pop order.
  std::vector<std::uint64_t> popped_keys;
  ObservationTable final_table;
};

LearnOutcome learn_powerful(PowerfulOracle& oracle, std::size_t clocks, const ClockCeiling& kappa,
                            const LearnOptions& options = {});
LearnOutcome learn_normal(NormalOracle& oracle, std::size_t clocks, const ClockCeiling& kappa,
                          const LearnOptions& options = {});
// Reset queries answered with all clocks reset; for targets with one always-reset clock.
LearnOutcome learn_rta(PowerfulOracle& oracle, const ClockCeiling& kappa, const LearnOptions& options = {},
                       bool count_resets = true);

// Every guessed instance produced by one repair step, filled.
std::vector<ObservationTable> branch_initial(NormalOracle& oracle, std::size_t clocks, const ClockCeiling& kappa);
std::vector<ObservationTable> branch_make_closed(const ObservationTable& t, NormalOracle& oracle);
std::vector<ObservationTable> branch_make_consistent(const ObservationTable& t, NormalOracle& oracle);
std::vector<ObservationTable> branch_counterexample(const ObservationTable& t, const DelayTimedWord& ctx,
                                                    NormalOracle& oracle);

// Cell values under a fixed reset guess, one entry per distinct outcome.
std::vector<Cell> guessed_outcomes(const ResetClockedWord& prefix, const RegionWord& suffix, const ClockCeiling& k,
                                   NormalOracle& oracle);

struct QueryBoundReport {
  double lambda = 0;
  double eq_bound = 0, mq_bound = 0, rq_bound = 0;
  std::uint64_t eq = 0, mq = 0, rq = 0;
  bool within() const { return eq <= eq_bound && mq <= mq_bound && rq <= rq_bound; }
};

double region_bound(const ClockCeiling& k);
// n: target locations, m: alphabet size.
QueryBoundReport query_bound_report(const LearnOutcome& outcome, std::size_t n, std::size_t m, const ClockCeiling& k);
std::string to_string(const QueryBoundReport& r);

}  // namespace tal
