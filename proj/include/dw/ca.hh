#pragma once

#include <dw/word.hh>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dw
{
  using CaLocation = std::uint32_t;

  enum class CounterOp
  {
    Inc,
    Dec,
    Ifz,
  };

  struct Instruction
  {
    CounterOp op = CounterOp::Inc;
    /// 1-based.
    unsigned counter = 1;

    bool operator==(const Instruction&) const = default;
  };

  struct CaTransition
  {
    CaLocation from = 0;
    /// nullopt for an epsilon transition.
    std::optional<Letter> letter;
    Instruction instruction;
    CaLocation to = 0;

    bool operator==(const CaTransition&) const = default;
  };

  struct CounterAutomaton
  {
    Alphabet alphabet;
    std::vector<std::string> names;
    std::vector<bool> accepting;
    CaLocation init = 0;
    unsigned counters = 0;
    std::vector<CaTransition> delta;

    std::size_t size() const { return names.size(); }
    CaLocation add_location(std::string name, bool is_accepting = false);
    std::size_t add(CaLocation from, std::optional<Letter> letter, Instruction ins, CaLocation to);
    std::optional<CaLocation> find(std::string_view name) const;
    /// Indices into delta of the transitions leaving each location.
    std::vector<std::vector<std::size_t>> outgoing() const;
  };

  /// Empty when well formed: targets in range, counters in range, no epsilon
  /// transition into an accepting location.
  std::vector<std::string> validate(const CounterAutomaton& c);
  void require_valid(const CounterAutomaton& c);

  using Valuation = std::vector<std::uint32_t>;

  /// Componentwise order.
  bool leq(const Valuation& a, const Valuation& b);

  struct CaState
  {
    CaLocation location = 0;
    Valuation values;

    bool operator==(const CaState&) const = default;
    auto operator<=>(const CaState&) const = default;
  };

  CaState initial_state(const CounterAutomaton& c);

  struct CaStep
  {
    std::size_t transition;
    CaState target;
  };

  /// Exact semantics: dec needs a positive counter, ifz a zero one.
  std::vector<CaStep> step_minsky(const CounterAutomaton& c, const CaState& s);
  /// Least successors under incrementing errors: dec is truncated at zero,
  /// ifz still needs zero, nothing grows spontaneously.  Every successor of
  /// the error semantics lies above one of these.
  std::vector<CaStep> step_incrementing(const CounterAutomaton& c, const CaState& s);

  /// Applies one transition; nullopt when it is not enabled.
  std::optional<CaState> apply(const CounterAutomaton& c, const CaState& s, std::size_t t,
                               bool incrementing);

  enum class Semantics
  {
    Minsky,
    Incrementing,
  };

  enum class Verdict
  {
    Empty,
    Nonempty,
    Unknown,
  };

  const char* verdict_name(Verdict v);

  /// Answer of a search that may give up.  For Empty, \a certificate names
  /// the argument; for Unknown, the budget that ran out.  A finite witness
  /// is \a stem alone; a lasso repeats \a cycle forever after \a stem.
  struct TriState
  {
    Verdict verdict = Verdict::Unknown;
    std::string certificate;
    /// Transition indices.
    std::vector<std::size_t> stem;
    std::vector<std::size_t> cycle;
    std::size_t explored = 0;

    bool nonempty() const { return verdict == Verdict::Nonempty; }
    bool empty() const { return verdict == Verdict::Empty; }
  };

  /// Letters read along transitions, epsilon dropped.
  std::vector<Letter> letters_of(const CounterAutomaton& c, const std::vector<std::size_t>& run);

  inline constexpr std::size_t default_ca_budget = 1'000'000;

  /// Membership of a finite word.  Nonempty means accepted.  Under
  /// incrementing semantics the search prunes states dominated by one
  /// already seen at the same position and location, so it is complete;
  /// under exact semantics it explores states as they are and answers
  /// Unknown when counters run away.  The empty word is never accepted.
  TriState accepts_word(const CounterAutomaton& c, const std::vector<Letter>& w, Semantics sem,
                        std::size_t budget = default_ca_budget);

  enum class Pruning
  {
    /// Per-location antichain of minimal valuations seen so far.
    Antichain,
    /// Only against ancestors on the same branch (reference variant).
    Ancestors,
  };

  /// Whether some finite word is accepted under incrementing semantics.
  /// Empty is definitive; Unknown only when \a budget states were expanded.
  TriState nonempty_finite_incrementing(const CounterAutomaton& c,
                                        std::size_t budget = default_ca_budget,
                                        Pruning pruning = Pruning::Antichain);

  /// Buechi nonemptiness under incrementing semantics.  Explores the tree
  /// of minimal-error runs, cutting a branch at an accepting location
  /// (which restarts the cut bookkeeping) or at a state dominating an
  /// earlier one since the last restart.  If the tree is finite the
  /// language is empty.  A branch returning to a location with a smaller
  /// or equal valuation after visiting an accepting location gives a lasso.
  TriState nonempty_infinite_incrementing(const CounterAutomaton& c,
                                          std::size_t budget = default_ca_budget);

  enum class Words
  {
    Finite,
    Infinite,
  };

  /// Iterative deepening over exact runs.  Never answers Empty.  Infinite
  /// words need a cycle returning to exactly the same state.
  TriState nonempty_minsky_bounded(const CounterAutomaton& c, Words over,
                                   std::size_t budget = default_ca_budget);

  /// Replays a witness from the initial state.  Finite: the run ends in an
  /// accepting location after at least one letter.  Lasso: the cycle reads
  /// a letter, visits an accepting location and ends at the location where
  /// it started with no larger counters (exact equality for Minsky).
  bool check_witness(const CounterAutomaton& c, const TriState& t, Semantics sem);

  CounterAutomaton parse_ca(std::string_view text);
  std::string format_ca(const CounterAutomaton& c);
  std::string to_dot(const CounterAutomaton& c);
  std::string format_instruction(const Instruction& ins);
  std::string format_ca_state(const CounterAutomaton& c, const CaState& s);
}
