#pragma once

#include "tal/automaton.hh"

#include <memory>
#include <optional>

namespace tal {

struct Counterexample {
  DelayTimedWord word;
  // true: the target accepts and the hypothesis rejects.
  bool positive = false;
  // Resets along the target's run over `word`.
  ResetDelayTimedWord target_resets;
};

// nullopt means the two languages are equal.
using EquivalenceVerdict = std::optional<Counterexample>;

TimedAutomaton complement(const TimedAutomaton& a);

// Synchronous product; clocks of `right` follow those of `left`.
class ProductAutomaton {
 public:
  ProductAutomaton(TimedAutomaton left, TimedAutomaton right);

  const TimedAutomaton& left() const { return *left_; }
  const TimedAutomaton& right() const { return *right_; }
  std::size_t clocks() const { return left_->clocks() + right_->clocks(); }
  ClockCeiling ceiling() const { return concat(left_->ceiling(), right_->ceiling()); }
  bool accepting(std::size_t l, std::size_t r) const {
    return left_->locations()[l].accepting && right_->locations()[r].accepting;
  }

 private:
  std::shared_ptr<const TimedAutomaton> left_;
  std::shared_ptr<const TimedAutomaton> right_;
};

ProductAutomaton intersect(const TimedAutomaton& a, const TimedAutomaton& b);

// Shortest (symbolic) accepted word of the product, or nullopt if its language is empty.
std::optional<DelayTimedWord> find_accepted_word(const ProductAutomaton& p);

// Checks hypothesis inclusion in target first, then the converse.
EquivalenceVerdict equivalent(const TimedAutomaton& target, const TimedAutomaton& hypothesis);

}  // namespace tal
