#include "tal/words.hh"

#include "tal/errors.hh"

#include <sstream>
#include <stdexcept>

namespace tal {

ClockValuation zero_valuation(std::size_t clocks) { return ClockValuation(clocks, Rational(0)); }
ResetTuple all_reset(std::size_t clocks) { return ResetTuple(clocks, true); }
ResetTuple no_reset(std::size_t clocks) { return ResetTuple(clocks, false); }

ClockedWord clocked_from_delay(const DelayTimedWord& word, const std::vector<ResetTuple>& resets) {
  if (word.size() != resets.size())
    throw LengthMismatch("word has " + std::to_string(word.size()) + " letters but " +
                         std::to_string(resets.size()) + " reset tuples were given");
  ClockedWord out;
  out.reserve(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    std::size_t clocks = resets[i].size();
    ClockValuation v(clocks);
    for (std::size_t j = 0; j < clocks; ++j) {
      if (i == 0 || resets[i - 1][j])
        v[j] = word[i].delay;
      else
        v[j] = out[i - 1].values[j] + word[i].delay;
    }
    out.push_back({word[i].action, std::move(v)});
  }
  return out;
}

ResetClockedWord reset_clocked_from(const ResetDelayTimedWord& word) {
  std::vector<ResetTuple> resets;
  resets.reserve(word.size());
  for (const auto& l : word) resets.push_back(l.resets);
  return attach_resets(clocked_from_delay(strip_resets(word), resets), resets);
}

std::optional<DelayTimedWord> delay_from_reset_clocked(const ResetClockedWord& word) {
  DelayTimedWord out;
  out.reserve(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    const auto& values = word[i].values;
    std::optional<Rational> t;
    for (std::size_t j = 0; j < values.size(); ++j) {
      Rational candidate = (i == 0 || word[i - 1].resets[j]) ? values[j] : values[j] - word[i - 1].values[j];
      if (t && *t != candidate) return std::nullopt;
      t = candidate;
    }
    if (!t) t = Rational(0);  // no clocks: any delay, pick 0
    if (*t < 0) return std::nullopt;
    out.push_back({word[i].action, *t});
  }
  return out;
}

bool is_doomed(const ResetClockedWord& word) { return !delay_from_reset_clocked(word).has_value(); }

ClockedWord vw(const ResetClockedWord& word) {
  ClockedWord out;
  out.reserve(word.size());
  for (const auto& l : word) out.push_back({l.action, l.values});
  return out;
}

std::vector<ResetTuple> resets_of(const ResetClockedWord& word) {
  std::vector<ResetTuple> out;
  out.reserve(word.size());
  for (const auto& l : word) out.push_back(l.resets);
  return out;
}

DelayTimedWord strip_resets(const ResetDelayTimedWord& word) {
  DelayTimedWord out;
  out.reserve(word.size());
  for (const auto& l : word) out.push_back({l.action, l.delay});
  return out;
}

ResetDelayTimedWord attach_resets(const DelayTimedWord& word, const std::vector<ResetTuple>& resets) {
  if (word.size() != resets.size()) throw LengthMismatch("reset sequence length differs from word length");
  ResetDelayTimedWord out;
  out.reserve(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) out.push_back({word[i].action, word[i].delay, resets[i]});
  return out;
}

ResetClockedWord attach_resets(const ClockedWord& word, const std::vector<ResetTuple>& resets) {
  if (word.size() != resets.size()) throw LengthMismatch("reset sequence length differs from word length");
  ResetClockedWord out;
  out.reserve(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) out.push_back({word[i].action, word[i].values, resets[i]});
  return out;
}

bool lex_leq(const ClockValuation& a, const ClockValuation& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() <= b.size();
}

std::string format_resets(const ResetTuple& resets) {
  std::string out;
  for (bool b : resets) out += b ? "⊤" : "⊥";
  return out;
}

std::string format_valuation(const ClockValuation& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += to_string(v[i]);
  }
  return out + "}";
}

std::string format_word(const DelayTimedWord& word) {
  if (word.empty()) return "ε";
  std::string out;
  for (const auto& l : word) out += "(" + l.action + "," + to_string(l.delay) + ")";
  return out;
}

std::string format_word(const ResetClockedWord& word) {
  if (word.empty()) return "ε";
  std::string out;
  for (const auto& l : word) {
    out += "(" + l.action + "," + format_valuation(l.values) + ",{";
    for (std::size_t j = 0; j < l.resets.size(); ++j) {
      if (j) out += ",";
      out += l.resets[j] ? "⊤" : "⊥";
    }
    out += "})";
  }
  return out;
}

DelayTimedWord parse_delay_word(const std::string& text) {
  DelayTimedWord out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (item.find_first_not_of(' ') == std::string::npos) continue;
    auto colon = item.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("expected 'action:delay', got '" + item + "'");
    std::string action = item.substr(0, colon);
    action.erase(0, action.find_first_not_of(' '));
    action.erase(action.find_last_not_of(' ') + 1);
    Rational delay = parse_rational(item.substr(colon + 1));
    if (delay < 0) throw std::invalid_argument("negative delay in '" + item + "'");
    out.push_back({action, delay});
  }
  return out;
}

}  // namespace tal
