#pragma once

#include <dw/ca.hh>
#include <dw/ltl.hh>
#include <dw/ra.hh>

#include <optional>
#include <string>
#include <vector>

namespace dw
{
  /// Letters standing for whole transitions of a counter automaton, written
  /// `from.letter.op<counter>.to` (`eps` for silent transitions), possibly
  /// followed by the block markers `hi<c>` and `lo<c>`.
  struct TransitionAlphabet
  {
    Alphabet alphabet;
    /// Index into delta for transition letters, nullopt for markers.
    std::vector<std::optional<std::size_t>> transition;
    /// Letter of the source automaton read by each letter, nullopt when
    /// nothing is read.
    std::vector<std::optional<Letter>> projection;

    /// Letter encoding transition \a t.
    Letter letter_of(std::size_t t) const { return transition_letter.at(t); }
    /// Letter \a role (0 for hi, 1 for lo) of counter \a c.
    Letter marker(unsigned role, unsigned c) const { return markers.at(2 * (c - 1) + role); }

    std::vector<Letter> transition_letter;
    std::vector<Letter> markers;
  };

  TransitionAlphabet transition_alphabet(const CounterAutomaton& c, bool with_markers = false);

  /// String read by the source automaton along the transitions of \a w.
  std::vector<Letter> project(const TransitionAlphabet& t, const DataWord& w);

  /// Data word over the transition alphabet encoding a minimal-error run
  /// (transition indices from the initial location).  Each decrement shares
  /// its class with the oldest unmatched increment of its counter, if any;
  /// every other position gets a class of its own.
  DataWord encode_run(const TransitionAlphabet& t, const CounterAutomaton& c,
                      const std::vector<std::size_t>& run);

  struct Condition
  {
    std::string label;
    Ltl formula;
  };

  struct Reduction
  {
    TransitionAlphabet sigma;
    /// Conjuncts in the order they are conjoined.
    std::vector<Condition> conditions;
    Ltl formula;
  };

  /// Sentence with one register, X and F whose models project onto the
  /// finite words accepted by \a c under incrementing semantics.
  Reduction ca_to_ltl_finite(const CounterAutomaton& c);
  /// Same conjuncts, acceptance replaced by G F over transitions leaving
  /// an accepting location.
  Reduction ca_to_ltl_infinite(const CounterAutomaton& c);

  /// Adds the requirement that every decrement is matched by an earlier
  /// increment in its class, so models project onto the Minsky language.
  Reduction minsky_to_ltl_xffp(const CounterAutomaton& c, bool infinite = false);

  /// Two-register sentence over transitions and markers: each transition
  /// is preceded by hi/lo markers for every counter, whose classes encode
  /// the counter values.
  Reduction minsky_to_ltl_2reg(const CounterAutomaton& c, bool infinite = false);

  /// One-way nondeterministic one-register automaton accepting the finite
  /// words over the transition alphabet that are not encodings of runs.
  RegisterAutomaton ca_violations_1nra(const CounterAutomaton& c);
  /// Universal automaton accepting exactly the encodings of runs; the dual
  /// of ca_violations_1nra.
  RegisterAutomaton ca_to_ura1(const CounterAutomaton& c);

  /// Incrementing automaton with counters C1, C2, C', D, D' (1..5) that
  /// repeatedly simulates \a c for a growing budget.  It has an infinite
  /// accepting run iff the run of \a c never reaches an accepting location.
  /// \a c must be deterministic: every location has no transition, one inc,
  /// or a dec and an ifz on the same counter; two counters, no epsilon.
  CounterAutomaton minsky_to_incrementing_fig4(const CounterAutomaton& c);
}
