#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dw
{
  enum class ErrorCode
  {
    EmptyWord,
    NotAPartition,
    UnknownLetter,
    PositionOutOfRange,
    ForeignValuation,
    SyntaxError,
    UnknownAtom,
    NotASentence,
    UnboundVariable,
    NotSimpleFragment,
    NotTwoVariable,
    WrongFreeVariable,
    ClassMismatch,
    UnsupportedClassCombination,
    StateSpaceBudgetExceeded,
    CapExceeded,
    PreconditionViolation,
    InvalidAutomaton,
  };

  const char* error_code_name(ErrorCode code);

  /// Single exception type for the library; \a code tells callers what
  /// went wrong, \a position is a character offset for parse errors.
  class Error : public std::runtime_error
  {
  public:
    Error(ErrorCode code, const std::string& what, std::size_t position = npos)
      : std::runtime_error(what), code_(code), position_(position)
    {
    }

    ErrorCode code() const { return code_; }
    std::size_t position() const { return position_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  private:
    ErrorCode code_;
    std::size_t position_;
  };

  [[noreturn]] inline void fail(ErrorCode code, const std::string& what,
                                std::size_t position = Error::npos)
  {
    throw Error(code, what, position);
  }
}
