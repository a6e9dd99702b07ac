#pragma once

#include <dw/word.hh>

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dw
{
  /// Operators of freeze LTL.  The Weak* and Dual* forms and NotAtom /
  /// NotReg only arise from negation normal form; Future, Past, Globally,
  /// PastGlobally and Implies are surface sugar.
  enum class LtlOp : std::uint8_t
  {
    True,
    False,
    Atom,
    NotAtom,
    Reg,
    NotReg,
    Not,
    And,
    Or,
    Implies,
    Next,
    Prev,
    WeakNext,
    WeakPrev,
    Future,
    Past,
    Globally,
    PastGlobally,
    Until,
    PastUntil,
    DualUntil,
    PastDualUntil,
    Store,
  };

  struct LtlNode;
  using Ltl = std::shared_ptr<const LtlNode>;

  struct LtlNode
  {
    LtlOp op;
    /// Letter for Atom/NotAtom, register (1-based) for Reg/NotReg/Store.
    std::uint32_t value = 0;
    Ltl left;
    Ltl right;
    /// Offset in the parsed text, npos for constructed nodes.
    std::size_t pos = static_cast<std::size_t>(-1);
  };

  const char* op_name(LtlOp op);
  bool is_temporal(LtlOp op);
  bool is_binary(LtlOp op);
  bool is_unary(LtlOp op);

  namespace ltl
  {
    Ltl make(LtlOp op, Ltl left = nullptr, Ltl right = nullptr, std::uint32_t value = 0);
    Ltl top();
    Ltl bottom();
    Ltl atom(Letter a);
    Ltl natom(Letter a);
    Ltl reg(unsigned r);
    Ltl nreg(unsigned r);
    Ltl neg(Ltl f);
    Ltl conj(Ltl a, Ltl b);
    Ltl disj(Ltl a, Ltl b);
    Ltl implies(Ltl a, Ltl b);
    Ltl iff(Ltl a, Ltl b);
    Ltl next(Ltl f);
    Ltl prev(Ltl f);
    Ltl wnext(Ltl f);
    Ltl wprev(Ltl f);
    Ltl future(Ltl f);
    Ltl past(Ltl f);
    Ltl globally(Ltl f);
    Ltl pglobally(Ltl f);
    Ltl until(Ltl a, Ltl b);
    Ltl puntil(Ltl a, Ltl b);
    Ltl duntil(Ltl a, Ltl b);
    Ltl pduntil(Ltl a, Ltl b);
    Ltl store(unsigned r, Ltl f);
    /// k-fold Next (k may be 0).
    Ltl next_n(unsigned k, Ltl f);
    Ltl prev_n(unsigned k, Ltl f);
    /// Right-nested; empty conjunction is true, empty disjunction false.
    Ltl conj_all(const std::vector<Ltl>& fs);
    Ltl disj_all(const std::vector<Ltl>& fs);

    /// Constant-folding variants.
    Ltl s_neg(Ltl f);
    Ltl s_conj(Ltl a, Ltl b);
    Ltl s_disj(Ltl a, Ltl b);
    Ltl s_iff(Ltl a, Ltl b);
  }

  /// Partial map from registers (1-based) to classes of one data word.
  class RegisterValuation
  {
  public:
    RegisterValuation() = default;
    explicit RegisterValuation(unsigned registers) : v_(registers, -1) {}

    bool defined(unsigned r) const { return r >= 1 && r <= v_.size() && v_[r - 1] >= 0; }
    std::optional<ClassId> get(unsigned r) const;
    void set(unsigned r, ClassId c);
    void clear(unsigned r);
    unsigned size() const { return static_cast<unsigned>(v_.size()); }
    const std::vector<std::int32_t>& raw() const { return v_; }

    bool operator==(const RegisterValuation& o) const = default;
    auto operator<=>(const RegisterValuation& o) const = default;

  private:
    std::vector<std::int32_t> v_;
  };

  struct FragmentInfo
  {
    std::set<LtlOp> operators;
    unsigned max_register = 0;
    bool is_sentence = true;
    /// Least m with the formula simple over O_m.  O_0 is read as
    /// {X F, Xp Fp}; a bare X needs m >= 1.
    std::optional<unsigned> simple_m;
  };

  Ltl parse_ltl(std::string_view text, const Alphabet& sigma);
  /// Infers the alphabet from the atoms (sorted).
  std::pair<Alphabet, Ltl> parse_ltl_infer(std::string_view text);
  std::string to_string(const Ltl& f, const Alphabet& sigma);

  /// Tree size (node count), saturating.
  std::uint64_t formula_size(const Ltl& f);
  bool structurally_equal(const Ltl& a, const Ltl& b);

  bool eval(const DataWord& w, std::size_t i, const RegisterValuation& v, const Ltl& f);

  /// Repeated evaluation on one word, memoised on (node, position,
  /// valuation).  Suited to formulas with heavy sharing.
  class LtlEvaluator
  {
  public:
    explicit LtlEvaluator(const DataWord& w);
    ~LtlEvaluator();
    bool eval(std::size_t i, const RegisterValuation& v, const Ltl& f);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
  };

  /// Removes F, Fp, G, Gp and implication.
  Ltl desugar(const Ltl& f);
  /// Negations pushed to literals using the dual operators; also desugars.
  Ltl nnf(const Ltl& f);
  FragmentInfo classify(const Ltl& f);

  /// First enumerated data word (length <= max_len) satisfying \a f at 0.
  std::optional<DataWord> sat_bounded(const Ltl& f, std::size_t alphabet_size,
                                      std::size_t max_len);
}
