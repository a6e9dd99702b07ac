#pragma once

#include <dw/ca.hh>
#include <dw/ra.hh>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace dw
{
  /// Bit q set for location q; at most 128 locations.
  __extension__ using LocationSet = unsigned __int128;
  inline constexpr std::size_t max_locations = 128;

  /// Locations reached at the next position: those whose register keeps
  /// a class other than the current one, and those whose register holds
  /// the current class.
  struct SuccPair
  {
    LocationSet keep = 0;
    LocationSet current = 0;

    auto operator<=>(const SuccPair&) const = default;
  };

  /// Big steps of the automaton from location \a q at a position carrying
  /// letter \a a, with \a at_end telling whether it is the last one and
  /// \a holds_current whether the register holds the current class.
  /// Requires a one-way automaton with at most one register.
  class SuccTable
  {
  public:
    explicit SuccTable(const RegisterAutomaton& a);

    const std::set<SuccPair>& operator()(Letter a, bool at_end, bool holds_current,
                                         Location q) const;
    const RegisterAutomaton& automaton() const { return *a_; }
    std::size_t entries() const { return memo_.size(); }

  private:
    const RegisterAutomaton* a_;
    mutable std::map<std::tuple<Letter, bool, bool, Location>, std::set<SuccPair>> memo_;
  };

  std::set<SuccPair> succ_table(const RegisterAutomaton& a, Letter letter, bool at_end,
                                bool holds_current, Location q);

  /// Abstraction of a set of states at one position.  \a none is the empty
  /// abstract set.  \a counts maps a nonempty location set to the number
  /// of classes, other than the current one, whose register holders are
  /// exactly those locations.
  struct AbstractSet
  {
    bool none = true;
    Letter letter = 0;
    bool at_end = false;
    LocationSet with_current = 0;
    LocationSet undefined = 0;
    std::map<LocationSet, unsigned> counts;

    static AbstractSet empty() { return {}; }
    /// Drops zero counts.
    void normalise();
    unsigned max_count() const;

    bool operator==(const AbstractSet&) const = default;
    auto operator<=>(const AbstractSet&) const = default;
  };

  /// Abstraction of a set of states all at position \a i of \a w.
  AbstractSet abstract_set(const RegisterAutomaton& a, const DataWord& w, std::size_t i,
                           const std::vector<RaState>& states);

  /// One big step between abstract sets.  \a from must not be empty.
  bool big_step(const RegisterAutomaton& a, const AbstractSet& from, const AbstractSet& to);

  /// All big-step successors whose counts stay within \a cap.  Throws
  /// CapExceeded when a count of \a from exceeds it.
  std::vector<AbstractSet> big_step_successors(const RegisterAutomaton& a,
                                               const AbstractSet& from, unsigned cap);

  /// Embedding of abstract sets: same letter and end flag, location sets
  /// included, and an injection of counted classes into counted classes of
  /// larger location sets.  The empty set is below everything.
  bool subsumed(const AbstractSet& lower, const AbstractSet& upper);

  struct Ra2CaReport
  {
    std::size_t locations = 0;
    std::size_t counters = 0;
    std::size_t set_counters = 0;
    std::size_t aux_counters = 0;
    std::size_t headers = 0;
    std::size_t transitions = 0;
    std::size_t succ_entries = 0;
  };

  struct Ra2Ca
  {
    CounterAutomaton automaton;
    Ra2CaReport report;
  };

  /// Incrementing counter automaton accepting the string projections of
  /// the finite words accepted by \a a.  Throws ClassMismatch unless \a a
  /// is one-way with at most one register and no beg tests.
  Ra2Ca build_ca_finite_detailed(const RegisterAutomaton& a);
  CounterAutomaton build_ca_finite(const RegisterAutomaton& a);

  /// Buechi counterpart for infinite words.  Accepting locations mark
  /// positions where the set of pending odd-rank obligations starts over.
  Ra2Ca build_ca_infinite_detailed(const RegisterAutomaton& a);
  CounterAutomaton build_ca_infinite(const RegisterAutomaton& a);

  std::string format_report(const Ra2CaReport& r);
  std::string format_abstract_set(const RegisterAutomaton& a, const AbstractSet& h);
}
