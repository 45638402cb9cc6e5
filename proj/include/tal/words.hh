#pragma once

#include "tal/rational.hh"

#include <optional>
#include <string>
#include <vector>

namespace tal {

// Clock values indexed by clock, 0-based internally (clock c_k is index k-1).
using ClockValuation = std::vector<Rational>;
// One flag per clock: true means the clock was reset.
using ResetTuple = std::vector<bool>;

struct DelayLetter {
  std::string action;
  Rational delay;
  bool operator==(const DelayLetter&) const = default;
};

struct ResetDelayLetter {
  std::string action;
  Rational delay;
  ResetTuple resets;
  bool operator==(const ResetDelayLetter&) const = default;
};

struct ClockedLetter {
  std::string action;
  ClockValuation values;
  bool operator==(const ClockedLetter&) const = default;
};

struct ResetClockedLetter {
  std::string action;
  ClockValuation values;
  ResetTuple resets;
  bool operator==(const ResetClockedLetter&) const = default;
};

using DelayTimedWord = std::vector<DelayLetter>;
using ResetDelayTimedWord = std::vector<ResetDelayLetter>;
using ClockedWord = std::vector<ClockedLetter>;
using ResetClockedWord = std::vector<ResetClockedLetter>;

ClockValuation zero_valuation(std::size_t clocks);
ResetTuple all_reset(std::size_t clocks);
ResetTuple no_reset(std::size_t clocks);

// Clock values seen at each step when `word` is read with the given resets.
ClockedWord clocked_from_delay(const DelayTimedWord& word, const std::vector<ResetTuple>& resets);

// Pairs values and resets (the map from reset-delay words to reset-clocked words).
ResetClockedWord reset_clocked_from(const ResetDelayTimedWord& word);

// Inverts the clocked transform. nullopt means the word is doomed.
std::optional<DelayTimedWord> delay_from_reset_clocked(const ResetClockedWord& word);
bool is_doomed(const ResetClockedWord& word);

ClockedWord vw(const ResetClockedWord& word);
std::vector<ResetTuple> resets_of(const ResetClockedWord& word);
DelayTimedWord strip_resets(const ResetDelayTimedWord& word);
ResetDelayTimedWord attach_resets(const DelayTimedWord& word, const std::vector<ResetTuple>& resets);
ResetClockedWord attach_resets(const ClockedWord& word, const std::vector<ResetTuple>& resets);

// Lexicographic order on valuations.
bool lex_leq(const ClockValuation& a, const ClockValuation& b);

// Formatting helpers used by the CLI and table dumps.
std::string format_resets(const ResetTuple& resets);  // e.g. "⊥⊤"
std::string format_valuation(const ClockValuation& v);  // "{21/20,21/20}"
std::string format_word(const DelayTimedWord& word);  // "(a,21/20)(b,0)"
std::string format_word(const ResetClockedWord& word);  // "(a,{..},{⊥,⊤})"

// Parses the CLI mini-syntax "a:11/10;b:0". Throws std::invalid_argument.
DelayTimedWord parse_delay_word(const std::string& text);

}  // namespace tal
