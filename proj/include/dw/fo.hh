#pragma once

#include <dw/ltl.hh>
#include <dw/word.hh>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dw
{
  enum class FoOp : std::uint8_t
  {
    True,
    False,
    Letter,  ///< P_a(x)
    Sim,     ///< x ~ y
    Less,    ///< x < y
    EqPlus,  ///< x = y + k
    Not,
    And,
    Or,
    Implies,
    Exists,
    Forall,
  };

  struct FoNode;
  using Fo = std::shared_ptr<const FoNode>;

  struct FoNode
  {
    FoOp op;
    std::uint32_t letter = 0;
    /// Variable indices; Exists/Forall bind \a x.
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    std::uint32_t k = 0;
    Fo left;
    Fo right;
    /// Bit i set iff x_i occurs free (variables beyond 63 are not tracked).
    std::uint64_t free = 0;
    /// Bit i set iff x_i occurs at all.
    std::uint64_t vars = 0;
  };

  namespace fo
  {
    Fo top();
    Fo bottom();
    Fo letter(Letter a, unsigned x);
    Fo sim(unsigned x, unsigned y);
    Fo less(unsigned x, unsigned y);
    Fo eq_plus(unsigned x, unsigned y, unsigned k);
    Fo neg(Fo f);
    Fo conj(Fo a, Fo b);
    Fo disj(Fo a, Fo b);
    Fo implies(Fo a, Fo b);
    Fo exists(unsigned x, Fo f);
    Fo forall(unsigned x, Fo f);
    Fo conj_all(const std::vector<Fo>& fs);
  }

  /// Partial assignment of variables to positions.
  using FoAssignment = std::vector<std::optional<std::size_t>>;

  Fo parse_fo(std::string_view text, const Alphabet& sigma);
  std::string to_string(const Fo& f, const Alphabet& sigma);

  bool is_two_variable(const Fo& f);
  /// Largest k used in an x = y + k atom.
  unsigned max_offset(const Fo& f);
  unsigned quantifier_depth(const Fo& f);

  bool eval_fo(const DataWord& w, const FoAssignment& asg, const Fo& f);

  /// The formula fixing the offset of x_{1-j} relative to x_j: exact
  /// distance k when |k| <= m, strictly further than m when |k| = m+1.
  Fo chi(unsigned j, int k, unsigned m);

  /// Simple LTL sentence (one register) to two-variable FO with x_j free.
  Fo simple_ltl_to_fo2(const Ltl& f, unsigned j);
  /// Two-variable FO with free variables within {x_j} to a simple LTL
  /// sentence over O_m, where m is max_offset(f) unless given larger.
  Ltl fo2_to_simple_ltl(const Fo& f, unsigned j, std::optional<unsigned> m = std::nullopt);
}
