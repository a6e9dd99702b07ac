#pragma once

#include <dw/game.hh>
#include <dw/ltl.hh>
#include <dw/word.hh>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dw
{
  using Location = std::uint32_t;

  enum class TestKind : std::uint8_t
  {
    Letter,
    Beg,
    End,
    Reg,
  };

  enum class TfKind : std::uint8_t
  {
    Test,   ///< if beta then q1 else q2
    Store,  ///< store_r q1
    And,
    Or,
    Top,
    Bottom,
    X,
    WX,   ///< weak next: accepting when there is no next position
    Xp,
    WXp,
  };

  struct TransitionFormula
  {
    TfKind kind = TfKind::Top;
    TestKind test = TestKind::Letter;
    /// Letter for Letter tests, register for Reg tests and Store.
    std::uint32_t arg = 0;
    Location q1 = 0;
    Location q2 = 0;

    static TransitionFormula top() { return {TfKind::Top}; }
    static TransitionFormula bottom() { return {TfKind::Bottom}; }
    static TransitionFormula ite(TestKind t, std::uint32_t arg, Location yes, Location no)
    {
      return {TfKind::Test, t, arg, yes, no};
    }
    static TransitionFormula store(unsigned r, Location q)
    {
      return {TfKind::Store, TestKind::Letter, r, q, q};
    }
    static TransitionFormula conj(Location a, Location b) { return {TfKind::And, TestKind::Letter, 0, a, b}; }
    static TransitionFormula disj(Location a, Location b) { return {TfKind::Or, TestKind::Letter, 0, a, b}; }
    static TransitionFormula move(TfKind k, Location q) { return {k, TestKind::Letter, 0, q, q}; }

    /// Locations occurring in the formula (0, 1 or 2 of them).
    std::vector<Location> targets() const;
    bool moves() const;
    bool operator==(const TransitionFormula&) const = default;
  };

  TransitionFormula dual(const TransitionFormula& f);

  struct RegisterAutomaton
  {
    Alphabet alphabet;
    std::vector<std::string> names;
    Location init = 0;
    unsigned registers = 0;
    std::vector<TransitionFormula> delta;
    std::vector<unsigned> rank;
    std::vector<unsigned> height;

    std::size_t size() const { return delta.size(); }
    Location add(std::string name, TransitionFormula f = TransitionFormula::top(),
                 unsigned rank = 0, unsigned height = 0);
    std::optional<Location> find(std::string_view name) const;
  };

  struct RaViolation
  {
    enum Kind
    {
      Rank,
      Height,
      Register,
      Target,
      Init,
      Letter,
    } kind;
    Location from;
    Location to;
    std::string message;
  };

  std::vector<RaViolation> validate(const RegisterAutomaton& a);
  /// Throws InvalidAutomaton with the first violation.
  void require_valid(const RegisterAutomaton& a);

  struct RaClass
  {
    bool one_way = true;
    bool nondeterministic = true;
    bool universal = true;
    bool deterministic() const { return nondeterministic && universal; }
  };

  RaClass classify(const RegisterAutomaton& a);

  /// Heights as the longest chain of non-moving transitions below each
  /// location.  Throws InvalidAutomaton on a non-moving cycle.
  void recompute_heights(RegisterAutomaton& a);

  RegisterAutomaton dual(const RegisterAutomaton& a);

  struct RaState
  {
    std::size_t position;
    Location location;
    RegisterValuation valuation;
  };

  struct AcceptanceGame
  {
    WeakGame game;
    std::vector<RaState> states;
    std::size_t initial = 0;
  };

  constexpr std::size_t default_state_budget = 2'000'000;

  /// Reachable part of the acceptance game.  Throws
  /// StateSpaceBudgetExceeded past \a budget positions.
  AcceptanceGame acceptance_game(const RegisterAutomaton& a, const DataWord& w,
                                 std::size_t budget = default_state_budget);
  bool accepts(const RegisterAutomaton& a, const DataWord& w,
               std::size_t budget = default_state_budget);

  /// Synchronous product of two one-way nondeterministic automata.
  RegisterAutomaton product_1nra(const RegisterAutomaton& a1, const RegisterAutomaton& a2);

  /// With \a preserve_class the result stays in the least class containing
  /// both inputs (throwing UnsupportedClassCombination when that is not
  /// possible); otherwise a fresh and/or root is used whenever the product
  /// is not required.
  RegisterAutomaton intersect(const RegisterAutomaton& a1, const RegisterAutomaton& a2,
                              bool preserve_class = true);
  RegisterAutomaton unite(const RegisterAutomaton& a1, const RegisterAutomaton& a2,
                          bool preserve_class = true);
  RegisterAutomaton complement(const RegisterAutomaton& a);

  RegisterAutomaton parse_ra(std::string_view text);
  std::string format_ra(const RegisterAutomaton& a);
  std::string to_dot(const RegisterAutomaton& a);
  std::string format_state(const RegisterAutomaton& a, const RaState& s);
}
