#include "tal/teacher.hh"

#include "tal/errors.hh"

#include <chrono>

namespace tal {

namespace {

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

QueryStats StatsKeeper::snapshot() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return stats_;
}

void StatsKeeper::count_membership(double ms) {
  std::lock_guard<std::mutex> lock(mutex_);
  ++stats_.membership;
  stats_.wall_ms += ms;
}

void StatsKeeper::count_equivalence(double ms) {
  std::lock_guard<std::mutex> lock(mutex_);
  ++stats_.equivalence;
  stats_.wall_ms += ms;
}

void StatsKeeper::count_reset(double ms) {
  std::lock_guard<std::mutex> lock(mutex_);
  ++stats_.reset;
  stats_.wall_ms += ms;
}

ResetTuple last_resets(const TimedAutomaton& target, const ClockedWord& word) {
  if (word.empty()) throw InvalidClockedWord("reset information asked for the empty word");
  std::size_t loc = target.initial();
  ClockValuation v = zero_valuation(target.clocks());
  ResetTuple last;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const auto& values = word[i].values;
    if (values.size() != target.clocks()) throw InvalidClockedWord("clock count mismatch at letter " + std::to_string(i + 1));
    std::optional<Rational> t;
    for (std::size_t c = 0; c < values.size(); ++c) {
      Rational d = values[c] - v[c];
      if ((t && *t != d) || d < 0)
        throw InvalidClockedWord("no run realizes the clock values of letter " + std::to_string(i + 1));
      t = d;
    }
    auto action = target.action_index(word[i].action);
    if (!action) throw AlphabetMismatch("action '" + word[i].action + "' is not in the alphabet");
    std::optional<std::size_t> fired;
    for (std::size_t tr : target.outgoing(loc, *action))
      if (guard_holds(target.transitions()[tr].guard, values)) fired = tr;
    if (!fired) throw IncompleteAutomaton("target has no enabled transition");
    const Transition& tr = target.transitions()[*fired];
    v = values;
    for (std::size_t c = 0; c < v.size(); ++c)
      if (tr.resets[c]) v[c] = 0;
    loc = tr.target;
    last = tr.resets;
  }
  return last;
}

PowerfulTeacher::PowerfulTeacher(TimedAutomaton target) : target_(std::move(target)) {}

bool PowerfulTeacher::membership(const ResetClockedWord& word) {
  Stopwatch w;
  bool answer = accepts_reset_clocked(target_, word);
  stats_.count_membership(w.ms());
  return answer;
}

ResetTuple PowerfulTeacher::reset_information(const ClockedWord& word) {
  Stopwatch w;
  ResetTuple answer = last_resets(target_, word);
  stats_.count_reset(w.ms());
  return answer;
}

std::optional<ResetCounterexample> PowerfulTeacher::equivalence(const TimedAutomaton& hypothesis) {
  Stopwatch w;
  auto verdict = equivalent(target_, hypothesis);
  stats_.count_equivalence(w.ms());
  if (!verdict) return std::nullopt;
  return ResetCounterexample{verdict->target_resets, verdict->positive};
}

NormalTeacher::NormalTeacher(TimedAutomaton target) : target_(std::move(target)) {}

bool NormalTeacher::membership(const DelayTimedWord& word) {
  Stopwatch w;
  bool answer = run(target_, word).accepted;
  stats_.count_membership(w.ms());
  return answer;
}

std::optional<DelayTimedWord> NormalTeacher::equivalence(const TimedAutomaton& hypothesis) {
  Stopwatch w;
  auto verdict = equivalent(target_, hypothesis);
  stats_.count_equivalence(w.ms());
  if (!verdict) return std::nullopt;
  return verdict->word;
}

ResetTuple AlwaysResetOracle::reset_information(const ClockedWord&) {
  if (count_resets_) ++resets_;
  return all_reset(clocks_);
}

QueryStats AlwaysResetOracle::stats() const {
  QueryStats s = inner_.stats();
  s.reset += resets_;
  return s;
}

}  // namespace tal
