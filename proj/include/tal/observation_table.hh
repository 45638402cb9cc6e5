#pragma once

#include "tal/region.hh"
#include "tal/teacher.hh"
#include "tal/words.hh"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace tal {

struct ResetClockedWordHash {
  std::size_t operator()(const ResetClockedWord& w) const noexcept;
};

struct Cell {
  bool accepted = false;
  std::vector<ResetTuple> resets;  // g; empty for the empty suffix
  std::optional<ResetClockedWord> successor;

  // Row comparison only looks at the observable part.
  bool same_observation(const Cell& o) const { return accepted == o.accepted && resets == o.resets; }
};

struct TableRow {
  ResetClockedWord word;
  bool in_prefixes = false;  // S when true, R otherwise
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
};

// Where the reset tuples of a successor come from.
struct FixedGuess {
  std::vector<ResetTuple> resets;
};
using ResetSource = std::variant<std::reference_wrapper<PowerfulOracle>, FixedGuess>;

// Builds the successor letter by letter, or nullopt when the prefix is doomed or a region is unreachable.
std::optional<ResetClockedWord> find_valid_successor(const ResetClockedWord& prefix, const RegionWord& suffix,
                                                     const ClockCeiling& k, const ResetSource& source);

class ObservationTable {
 public:
  ObservationTable() = default;
  ObservationTable(std::vector<std::string> alphabet, std::size_t clocks, ClockCeiling kappa);

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  std::size_t clocks() const { return clocks_; }
  const ClockCeiling& ceiling() const { return kappa_; }

  const std::vector<TableRow>& rows() const { return rows_; }
  const std::vector<RegionWord>& suffixes() const { return suffixes_; }
  std::size_t prefix_count() const;   // |S|
  std::size_t boundary_count() const;  // |R|

  std::optional<std::size_t> find_row(const ResetClockedWord& word) const;
  std::optional<std::size_t> find_suffix(const RegionWord& e) const;
  // Adds a row whose parent (the word minus its last letter) must already exist.
  // Returns the existing index when the word is present.
  std::size_t add_row(const ResetClockedWord& word, bool in_prefixes);
  std::size_t add_suffix(const RegionWord& e);
  void promote(std::size_t row);

  const Cell* cell(std::size_t row, std::size_t suffix) const { return cells_[row][suffix].get(); }
  void set_cell(std::size_t row, std::size_t suffix, Cell c);
  std::vector<std::pair<std::size_t, std::size_t>> empty_cells() const;
  bool is_filled() const { return empty_cells().empty(); }

  // Cells equal in every column (observable part). Requires both rows filled.
  bool same_row(std::size_t a, std::size_t b) const;
  std::optional<std::size_t> first_difference(std::size_t a, std::size_t b) const;
  bool accepting(std::size_t row) const;  // f(row, eps)

  std::uint64_t guessed_resets = 0;

 private:
  std::vector<std::string> alphabet_;
  std::size_t clocks_ = 0;
  ClockCeiling kappa_;
  std::vector<TableRow> rows_;
  std::vector<RegionWord> suffixes_;
  std::vector<std::vector<std::shared_ptr<const Cell>>> cells_;
  std::unordered_map<ResetClockedWord, std::size_t, ResetClockedWordHash> index_;
};

struct ConsistencyWitness {
  std::size_t left = 0, right = 0;                 // rows with equal content
  std::size_t left_ext = 0, right_ext = 0;         // their one-letter extensions
  std::optional<std::size_t> differing_suffix;     // nullopt: only the resets differ
  RegionWord new_suffix;
};

struct EvidenceWitness {
  std::size_t row = 0;
  std::size_t suffix = 0;
};

struct PreparedStatus {
  bool reduced = true;
  bool closed = true;
  bool consistent = true;
  bool evidence_closed = true;
  std::optional<std::pair<std::size_t, std::size_t>> duplicate_prefixes;
  std::optional<std::size_t> unclosed_row;
  std::optional<ConsistencyWitness> inconsistency;
  // Inconsistency found, but every repair suffix is already in E.
  bool inconsistency_unrepairable = false;
  std::optional<EvidenceWitness> missing_evidence;

  bool prepared(bool check_evidence) const {
    return reduced && closed && consistent && !inconsistency_unrepairable && (!check_evidence || evidence_closed);
  }
};

PreparedStatus prepared_status(const ObservationTable& t, bool check_evidence);

// The clocked word r.(action, 0) with values zero; resets still to be decided.
ClockedWord zero_extension(const ObservationTable& t, std::size_t row, const std::string& action);
// True when r.(action, 0, b) is doomed whatever b is.
bool zero_extension_doomed(const ObservationTable& t, std::size_t row);

// Powerful-teacher operations; they refill the table before returning.
Cell compute_cell(const ResetClockedWord& prefix, const RegionWord& suffix, const ClockCeiling& k,
                  PowerfulOracle& oracle);
void fill(ObservationTable& t, PowerfulOracle& oracle);
ObservationTable initial_table(PowerfulOracle& oracle, std::size_t clocks, const ClockCeiling& k);
void make_closed(ObservationTable& t, PowerfulOracle& oracle);
void make_consistent(ObservationTable& t, PowerfulOracle& oracle);
void make_evidence_closed(ObservationTable& t, PowerfulOracle& oracle);
// Returns the number of rows added.
std::size_t add_counterexample(ObservationTable& t, const ResetDelayTimedWord& ctx, PowerfulOracle& oracle);

std::string dump(const ObservationTable& t);

}  // namespace tal
