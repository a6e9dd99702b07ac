#include <dw/error.hh>
#include <dw/ltl2ra.hh>

#include <limits>
#include <map>

namespace dw
{
  namespace
  {
    /// Total order on formulas by structure, so equal subformulas share a
    /// location regardless of node identity.
    int compare(const LtlNode* a, const LtlNode* b)
    {
      if (a == b)
        return 0;
      if (!a || !b)
        return a ? 1 : -1;
      if (a->op != b->op)
        return a->op < b->op ? -1 : 1;
      if (a->value != b->value)
        return a->value < b->value ? -1 : 1;
      if (int c = compare(a->left.get(), b->left.get()))
        return c;
      return compare(a->right.get(), b->right.get());
    }

    struct Less
    {
      bool operator()(const Ltl& a, const Ltl& b) const { return compare(a.get(), b.get()) < 0; }
    };

    unsigned size_of(const Ltl& f)
    {
      auto s = formula_size(f);
      const auto cap = static_cast<std::uint64_t>(std::numeric_limits<unsigned>::max() / 4);
      return static_cast<unsigned>(s > cap ? cap : s);
    }

    class Builder
    {
    public:
      explicit Builder(const Alphabet& sigma) { out_.automaton.alphabet = sigma; }

      Location loc(const Ltl& f)
      {
        auto it = index_.find(f);
        if (it != index_.end())
          return it->second;
        Location q = out_.automaton.add("q" + std::to_string(out_.formulas.size()));
        index_.emplace(f, q);
        out_.formulas.push_back(f);
        work_.push_back(q);
        return q;
      }

      LtlAutomaton run(const Ltl& phi, unsigned registers)
      {
        auto& a = out_.automaton;
        a.registers = registers;
        a.init = loc(phi);
        loc(ltl::top());
        loc(ltl::bottom());
        while (!work_.empty())
          {
            Location q = work_.back();
            work_.pop_back();
            Ltl f = out_.formulas[q];
            a.delta[q] = transition(f);
          }
        assign_ranks();
        recompute_heights(a);
        return std::move(out_);
      }

    private:
      TransitionFormula test(TestKind t, std::uint32_t arg, bool positive)
      {
        Location yes = loc(ltl::top()), no = loc(ltl::bottom());
        return positive ? TransitionFormula::ite(t, arg, yes, no)
                        : TransitionFormula::ite(t, arg, no, yes);
      }

      TransitionFormula transition(const Ltl& f)
      {
        switch (f->op)
          {
          case LtlOp::True: return TransitionFormula::top();
          case LtlOp::False: return TransitionFormula::bottom();
          case LtlOp::Atom: return test(TestKind::Letter, f->value, true);
          case LtlOp::NotAtom: return test(TestKind::Letter, f->value, false);
          case LtlOp::Reg: return test(TestKind::Reg, f->value, true);
          case LtlOp::NotReg: return test(TestKind::Reg, f->value, false);
          case LtlOp::And: return TransitionFormula::conj(loc(f->left), loc(f->right));
          case LtlOp::Or: return TransitionFormula::disj(loc(f->left), loc(f->right));
          case LtlOp::Next: return TransitionFormula::move(TfKind::X, loc(f->left));
          case LtlOp::WeakNext: return TransitionFormula::move(TfKind::WX, loc(f->left));
          case LtlOp::Prev: return TransitionFormula::move(TfKind::Xp, loc(f->left));
          case LtlOp::WeakPrev: return TransitionFormula::move(TfKind::WXp, loc(f->left));
          case LtlOp::Store: return TransitionFormula::store(f->value, loc(f->left));
          case LtlOp::Until:
          case LtlOp::PastUntil:
          case LtlOp::DualUntil:
          case LtlOp::PastDualUntil:
            {
              const bool dual = f->op == LtlOp::DualUntil || f->op == LtlOp::PastDualUntil;
              const bool past = f->op == LtlOp::PastUntil || f->op == LtlOp::PastDualUntil;
              Ltl step = dual ? (past ? ltl::wprev(f) : ltl::wnext(f))
                              : (past ? ltl::prev(f) : ltl::next(f));
              Ltl unfold = dual ? ltl::disj(f->left, step) : ltl::conj(f->left, step);
              Location qs = loc(step), qu = loc(unfold);
              unfoldings_.push_back({loc(f), qs});
              unfoldings_.push_back({loc(f), qu});
              return dual ? TransitionFormula::conj(loc(f->right), qu)
                          : TransitionFormula::disj(loc(f->right), qu);
            }
          default:
            fail(ErrorCode::PreconditionViolation,
                 std::string("operator ") + op_name(f->op) + " left after normalisation");
          }
      }

      // Twice the size, plus one for (past) until.  Unfolding locations
      // sit on the until's loop and take its rank.
      void assign_ranks()
      {
        auto& a = out_.automaton;
        for (Location q = 0; q < a.size(); ++q)
          {
            const auto& f = out_.formulas[q];
            a.rank[q] = 2 * size_of(f)
                        + (f->op == LtlOp::Until || f->op == LtlOp::PastUntil ? 1 : 0);
          }
        std::vector<bool> fixed(a.size(), false);
        for (auto [u, q] : unfoldings_)
          {
            if (!fixed[q] || a.rank[u] < a.rank[q])
              a.rank[q] = a.rank[u];
            fixed[q] = true;
          }
      }

      LtlAutomaton out_;
      std::map<Ltl, Location, Less> index_;
      std::vector<Location> work_;
      std::vector<std::pair<Location, Location>> unfoldings_;
    };
  }

  LtlAutomaton ltl_to_ara_detailed(const Ltl& phi, const Alphabet& sigma)
  {
    auto info = classify(phi);
    if (!info.is_sentence)
      fail(ErrorCode::NotASentence, "formula has a free register occurrence");
    Builder b(sigma);
    return b.run(nnf(phi), info.max_register);
  }

  RegisterAutomaton ltl_to_ara(const Ltl& phi, const Alphabet& sigma)
  {
    return ltl_to_ara_detailed(phi, sigma).automaton;
  }
}
