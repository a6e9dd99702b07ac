#pragma once

#include <dw/ra.hh>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dw
{
  /// Abstraction of a state of a one-way nondeterministic automaton: the
  /// letter and end flag of the position, the location, which registers
  /// hold equal classes, and which of those classes is the current one.
  struct AbstractState
  {
    Letter letter = 0;
    bool ee = false;
    Location location = 0;
    /// Per register: -1 when undefined, else a class label.  Labels are
    /// numbered by first occurrence in register order.
    std::vector<std::int8_t> cls;
    /// Label of the current position's class, -1 when no register holds it.
    std::int8_t cur = -1;

    /// 1-based registers holding the current class.
    std::vector<unsigned> current_registers() const;
    /// Pairs (r, r') of defined registers with equal classes (1-based).
    std::vector<std::pair<unsigned, unsigned>> equalities() const;

    bool operator==(const AbstractState&) const = default;
    auto operator<=>(const AbstractState&) const = default;
  };

  AbstractState abstract_state(const RegisterAutomaton& a, const DataWord& w, const RaState& s);

  /// Successors in the abstract graph; requires a one-way nondeterministic
  /// automaton (ClassMismatch otherwise).
  std::vector<AbstractState> abs_successors(const RegisterAutomaton& a, const AbstractState& h);
  bool abs_initial(const RegisterAutomaton& a, const AbstractState& h);
  /// No successors and owned by the second player.
  bool abs_winning(const RegisterAutomaton& a, const AbstractState& h);

  std::string format_abstract_state(const RegisterAutomaton& a, const AbstractState& h);

  struct NraVerdict
  {
    bool nonempty = false;
    /// Finite case only: an accepted word, already re-checked.
    std::optional<DataWord> witness;
    /// Infinite case only: which condition held.
    std::string reason;
    std::size_t explored = 0;
  };

  NraVerdict nonempty_finite(const RegisterAutomaton& a);
  NraVerdict nonempty_infinite(const RegisterAutomaton& a);

  /// Reachable abstract graph, for DOT export.
  std::string abstract_graph_dot(const RegisterAutomaton& a);
}
