#pragma once

#include <stdexcept>
#include <string>

namespace tal {

// Base for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TAL_DEFINE_ERROR(Name)              \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  };

TAL_DEFINE_ERROR(LengthMismatch)
TAL_DEFINE_ERROR(IncompleteAutomaton)
TAL_DEFINE_ERROR(NondeterministicAutomaton)
TAL_DEFINE_ERROR(CeilingMismatch)
TAL_DEFINE_ERROR(AlphabetMismatch)
TAL_DEFINE_ERROR(InvalidClockedWord)
TAL_DEFINE_ERROR(GuessLengthMismatch)
TAL_DEFINE_ERROR(UnfilledTable)
TAL_DEFINE_ERROR(ConditionNotViolated)
TAL_DEFINE_ERROR(TableNotPrepared)
TAL_DEFINE_ERROR(MissingZeroValuation)
TAL_DEFINE_ERROR(DuplicateValuation)
TAL_DEFINE_ERROR(ConflictingAbstractTransitions)
TAL_DEFINE_ERROR(RoundBudgetExhausted)
TAL_DEFINE_ERROR(InstanceBudgetExhausted)
TAL_DEFINE_ERROR(TimeBudgetExhausted)
TAL_DEFINE_ERROR(ParseError)

#undef TAL_DEFINE_ERROR

}  // namespace tal
