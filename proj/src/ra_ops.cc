#include <dw/error.hh>
#include <dw/ra.hh>

#include <algorithm>

namespace dw
{
  namespace
  {
    enum class Shape
    {
      Inner,  // test, store or disjunction: stays at the position
      Top,
      Bottom,
      Next,
      WeakNext,
    };

    Shape shape_of(const TransitionFormula& f)
    {
      switch (f.kind)
        {
        case TfKind::Top: return Shape::Top;
        case TfKind::Bottom: return Shape::Bottom;
        case TfKind::X: return Shape::Next;
        case TfKind::WX: return Shape::WeakNext;
        case TfKind::Test:
        case TfKind::Store:
        case TfKind::Or:
          return Shape::Inner;
        default:
          fail(ErrorCode::ClassMismatch, "product needs one-way nondeterministic automata");
        }
    }

    void require_1nra(const RegisterAutomaton& a)
    {
      require_valid(a);
      auto c = classify(a);
      if (!c.one_way || !c.nondeterministic)
        fail(ErrorCode::ClassMismatch, "automaton is not one-way nondeterministic");
    }

    RegisterAutomaton with_root(const RegisterAutomaton& a1, const RegisterAutomaton& a2,
                                TfKind root_kind)
    {
      RegisterAutomaton out;
      out.alphabet = a1.alphabet;
      out.registers = std::max(a1.registers, a2.registers);
      const auto off1 = static_cast<Location>(1);
      const auto off2 = static_cast<Location>(1 + a1.size());
      out.add("root");
      auto copy = [&](const RegisterAutomaton& a, Location off, const std::string& prefix) {
        for (Location q = 0; q < a.size(); ++q)
          {
            TransitionFormula f = a.delta[q];
            f.q1 += off;
            f.q2 += off;
            out.add(prefix + a.names[q], f, a.rank[q], a.height[q]);
          }
      };
      copy(a1, off1, "1.");
      copy(a2, off2, "2.");
      const Location i1 = a1.init + off1, i2 = a2.init + off2;
      out.delta[0] = {root_kind, TestKind::Letter, 0, i1, i2};
      out.rank[0] = std::max(out.rank[i1], out.rank[i2]);
      out.height[0] = std::max(out.height[i1], out.height[i2]) + 1;
      out.init = 0;
      return out;
    }

    void same_alphabet(const RegisterAutomaton& a1, const RegisterAutomaton& a2)
    {
      if (!(a1.alphabet == a2.alphabet))
        fail(ErrorCode::PreconditionViolation, "automata over different alphabets");
    }

    RaClass join(RaClass a, RaClass b)
    {
      return {a.one_way && b.one_way, a.nondeterministic && b.nondeterministic,
              a.universal && b.universal};
    }
  }

  RegisterAutomaton product_1nra(const RegisterAutomaton& a1, const RegisterAutomaton& a2)
  {
    require_1nra(a1);
    require_1nra(a2);
    same_alphabet(a1, a2);
    const auto n2 = static_cast<Location>(a2.size());
    auto pair = [&](Location p, Location q) { return p * n2 + q; };

    RegisterAutomaton out;
    out.alphabet = a1.alphabet;
    out.registers = a1.registers + a2.registers;
    for (Location p = 0; p < a1.size(); ++p)
      for (Location q = 0; q < a2.size(); ++q)
        {
          const auto& f1 = a1.delta[p];
          const auto& f2 = a2.delta[q];
          auto left = [&] {
            TransitionFormula f = f1;
            f.q1 = pair(f1.q1, q);
            f.q2 = pair(f1.q2, q);
            return f;
          };
          auto right = [&] {
            TransitionFormula f = f2;
            f.q1 = pair(p, f2.q1);
            f.q2 = pair(p, f2.q2);
            if (f.kind == TfKind::Store || (f.kind == TfKind::Test && f.test == TestKind::Reg))
              f.arg += a1.registers;
            return f;
          };
          auto step = [&](TfKind k) {
            return TransitionFormula::move(k, pair(f1.q1, f2.q1));
          };
          Shape s1 = shape_of(f1), s2 = shape_of(f2);
          TransitionFormula f;
          if (s1 == Shape::Bottom || s2 == Shape::Bottom)
            f = TransitionFormula::bottom();
          else if (s1 == Shape::Inner)
            f = left();
          else if (s2 == Shape::Inner)
            f = right();
          else if (s1 == Shape::Top)
            f = s2 == Shape::Top ? TransitionFormula::top() : right();
          else if (s2 == Shape::Top)
            f = left();
          else
            f = step(s1 == Shape::WeakNext && s2 == Shape::WeakNext ? TfKind::WX : TfKind::X);
          out.add("(" + a1.names[p] + "," + a2.names[q] + ")", f,
                  (a1.rank[p] + 1) * (a2.rank[q] + 1) + 1, a1.height[p] + a2.height[q]);
        }
    out.init = pair(a1.init, a2.init);
    return out;
  }

  RegisterAutomaton intersect(const RegisterAutomaton& a1, const RegisterAutomaton& a2,
                              bool preserve_class)
  {
    require_valid(a1);
    require_valid(a2);
    same_alphabet(a1, a2);
    RaClass c = join(classify(a1), classify(a2));
    bool needs_product = preserve_class && c.nondeterministic;
    if (needs_product)
      {
        if (!c.one_way)
          fail(ErrorCode::UnsupportedClassCombination,
               "two-way nondeterministic automata are not closed under intersection");
        return product_1nra(a1, a2);
      }
    return with_root(a1, a2, TfKind::And);
  }

  RegisterAutomaton unite(const RegisterAutomaton& a1, const RegisterAutomaton& a2,
                          bool preserve_class)
  {
    require_valid(a1);
    require_valid(a2);
    same_alphabet(a1, a2);
    RaClass c = join(classify(a1), classify(a2));
    bool needs_product = preserve_class && c.universal;
    if (needs_product)
      {
        if (!c.one_way)
          fail(ErrorCode::UnsupportedClassCombination,
               "two-way universal automata are not closed under union");
        return dual(product_1nra(dual(a1), dual(a2)));
      }
    return with_root(a1, a2, TfKind::Or);
  }
}
