#pragma once

#include "tal/automaton.hh"
#include "tal/equivalence.hh"

#include <cstdint>
#include <mutex>
#include <optional>

namespace tal {

struct QueryStats {
  std::uint64_t membership = 0;
  std::uint64_t equivalence = 0;
  std::uint64_t reset = 0;
  double wall_ms = 0;  // time spent answering queries
};

struct ResetCounterexample {
  ResetDelayTimedWord word;
  bool positive = false;
};

// Oracle interface used by the learner when reset information is available.
class PowerfulOracle {
 public:
  virtual ~PowerfulOracle() = default;
  virtual const std::vector<std::string>& alphabet() const = 0;
  virtual bool membership(const ResetClockedWord& word) = 0;
  // Resets of the last transition taken along `word`.
  virtual ResetTuple reset_information(const ClockedWord& word) = 0;
  virtual std::optional<ResetCounterexample> equivalence(const TimedAutomaton& hypothesis) = 0;
  virtual QueryStats stats() const = 0;
};

// Oracle interface for the plain setting: delay words only.
class NormalOracle {
 public:
  virtual ~NormalOracle() = default;
  virtual const std::vector<std::string>& alphabet() const = 0;
  virtual bool membership(const DelayTimedWord& word) = 0;
  virtual std::optional<DelayTimedWord> equivalence(const TimedAutomaton& hypothesis) = 0;
  virtual QueryStats stats() const = 0;
};

class StatsKeeper {
 public:
  QueryStats snapshot() const;
  void count_membership(double ms);
  void count_equivalence(double ms);
  void count_reset(double ms);

 private:
  mutable std::mutex mutex_;
  QueryStats stats_;
};

class PowerfulTeacher final : public PowerfulOracle {
 public:
  explicit PowerfulTeacher(TimedAutomaton target);
  const std::vector<std::string>& alphabet() const override { return target_.alphabet(); }
  bool membership(const ResetClockedWord& word) override;
  ResetTuple reset_information(const ClockedWord& word) override;
  std::optional<ResetCounterexample> equivalence(const TimedAutomaton& hypothesis) override;
  QueryStats stats() const override { return stats_.snapshot(); }

 private:
  TimedAutomaton target_;
  StatsKeeper stats_;
};

class NormalTeacher final : public NormalOracle {
 public:
  explicit NormalTeacher(TimedAutomaton target);
  const std::vector<std::string>& alphabet() const override { return target_.alphabet(); }
  bool membership(const DelayTimedWord& word) override;
  std::optional<DelayTimedWord> equivalence(const TimedAutomaton& hypothesis) override;
  QueryStats stats() const override { return stats_.snapshot(); }

 private:
  TimedAutomaton target_;
  StatsKeeper stats_;
};

// Reset queries answered with "all clocks reset" without asking the wrapped oracle.
class AlwaysResetOracle final : public PowerfulOracle {
 public:
  AlwaysResetOracle(PowerfulOracle& inner, std::size_t clocks, bool count_resets = true)
      : inner_(inner), clocks_(clocks), count_resets_(count_resets) {}
  const std::vector<std::string>& alphabet() const override { return inner_.alphabet(); }
  bool membership(const ResetClockedWord& word) override { return inner_.membership(word); }
  ResetTuple reset_information(const ClockedWord& word) override;
  std::optional<ResetCounterexample> equivalence(const TimedAutomaton& h) override { return inner_.equivalence(h); }
  QueryStats stats() const override;

 private:
  PowerfulOracle& inner_;
  std::size_t clocks_;
  bool count_resets_;
  std::uint64_t resets_ = 0;
};

// Reset tuple of the last transition of the target run realizing `word` exactly.
// Throws InvalidClockedWord when no run realizes the given clock values.
ResetTuple last_resets(const TimedAutomaton& target, const ClockedWord& word);

}  // namespace tal
