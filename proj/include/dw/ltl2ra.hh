#pragma once

#include <dw/ltl.hh>
#include <dw/ra.hh>

#include <vector>

namespace dw
{
  struct LtlAutomaton
  {
    RegisterAutomaton automaton;
    /// Formula (in negation normal form) of every location.
    std::vector<Ltl> formulas;
  };

  /// Alternating register automaton accepting exactly the models of the
  /// sentence \a phi at position 0.  One-way when phi has no past
  /// operators.  Throws NotASentence.
  LtlAutomaton ltl_to_ara_detailed(const Ltl& phi, const Alphabet& sigma);
  RegisterAutomaton ltl_to_ara(const Ltl& phi, const Alphabet& sigma);
}
