#include <dw/error.hh>
#include <dw/fo.hh>

#include <cctype>
#include <functional>
#include <map>

namespace dw
{
  namespace fo
  {
    namespace
    {
      std::uint64_t bit(unsigned x) { return x < 64 ? std::uint64_t(1) << x : 0; }

      Fo make(FoOp op, Fo l = nullptr, Fo r = nullptr)
      {
        auto n = std::make_shared<FoNode>();
        n->op = op;
        n->left = std::move(l);
        n->right = std::move(r);
        if (n->left)
          {
            n->free |= n->left->free;
            n->vars |= n->left->vars;
          }
        if (n->right)
          {
            n->free |= n->right->free;
            n->vars |= n->right->vars;
          }
        return n;
      }

      Fo atom(FoOp op, unsigned x, unsigned y, unsigned k, Letter a)
      {
        auto n = std::make_shared<FoNode>();
        n->op = op;
        n->x = x;
        n->y = y;
        n->k = k;
        n->letter = a;
        n->free = n->vars = bit(x) | (op == FoOp::Letter ? 0 : bit(y));
        return n;
      }

      Fo quant(FoOp op, unsigned x, Fo f)
      {
        auto n = std::make_shared<FoNode>();
        n->op = op;
        n->x = x;
        n->free = f->free & ~bit(x);
        n->vars = f->vars | bit(x);
        n->left = std::move(f);
        return n;
      }
    }

    Fo top()
    {
      static const Fo t = make(FoOp::True);
      return t;
    }

    Fo bottom()
    {
      static const Fo f = make(FoOp::False);
      return f;
    }

    Fo letter(Letter a, unsigned x) { return atom(FoOp::Letter, x, x, 0, a); }
    Fo sim(unsigned x, unsigned y) { return atom(FoOp::Sim, x, y, 0, 0); }
    Fo less(unsigned x, unsigned y) { return atom(FoOp::Less, x, y, 0, 0); }
    Fo eq_plus(unsigned x, unsigned y, unsigned k) { return atom(FoOp::EqPlus, x, y, k, 0); }
    Fo neg(Fo f) { return make(FoOp::Not, std::move(f)); }
    Fo conj(Fo a, Fo b) { return make(FoOp::And, std::move(a), std::move(b)); }
    Fo disj(Fo a, Fo b) { return make(FoOp::Or, std::move(a), std::move(b)); }
    Fo implies(Fo a, Fo b) { return make(FoOp::Implies, std::move(a), std::move(b)); }
    Fo exists(unsigned x, Fo f) { return quant(FoOp::Exists, x, std::move(f)); }
    Fo forall(unsigned x, Fo f) { return quant(FoOp::Forall, x, std::move(f)); }

    Fo conj_all(const std::vector<Fo>& fs)
    {
      if (fs.empty())
        return top();
      Fo acc = fs.back();
      for (std::size_t i = fs.size() - 1; i-- > 0;)
        acc = conj(fs[i], acc);
      return acc;
    }
  }

  // ---------------------------------------------------------------- parser

  namespace
  {
    struct FoToken
    {
      std::string text;
      std::size_t pos;
      bool ident;
    };

    std::vector<FoToken> fo_tokenize(std::string_view s)
    {
      std::vector<FoToken> out;
      std::size_t i = 0;
      while (i < s.size())
        {
          char c = s[i];
          if (std::isspace(static_cast<unsigned char>(c)))
            {
              ++i;
              continue;
            }
          std::size_t start = i;
          if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')
            {
              while (i < s.size()
                     && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'
                         || s[i] == '.'))
                ++i;
              out.push_back({std::string(s.substr(start, i - start)), start, true});
              continue;
            }
          if (c == '-' && i + 1 < s.size() && s[i + 1] == '>')
            {
              out.push_back({"->", start, false});
              i += 2;
              continue;
            }
          if (std::string("()!&|~<=+").find(c) == std::string::npos)
            fail(ErrorCode::SyntaxError, std::string("unexpected character '") + c + "'", start);
          out.push_back({std::string(1, c), start, false});
          ++i;
        }
      out.push_back({"", s.size(), false});
      return out;
    }

    class FoParser
    {
    public:
      FoParser(std::string_view text, const Alphabet& sigma)
        : toks_(fo_tokenize(text)), sigma_(sigma)
      {
      }

      Fo parse()
      {
        Fo f = implication();
        if (!at_end())
          fail(ErrorCode::SyntaxError, "unexpected '" + peek().text + "'", peek().pos);
        return f;
      }

    private:
      const FoToken& peek() const { return toks_[i_]; }
      bool at_end() const { return i_ + 1 >= toks_.size(); }
      bool accept(const char* s)
      {
        if (!at_end() && peek().text == s)
          {
            ++i_;
            return true;
          }
        return false;
      }
      void expect(const char* s)
      {
        if (!accept(s))
          fail(ErrorCode::SyntaxError, std::string("expected '") + s + "'", peek().pos);
      }

      unsigned variable()
      {
        const FoToken& t = peek();
        if (!t.ident || t.text.size() < 2 || t.text[0] != 'x')
          fail(ErrorCode::SyntaxError, "expected a variable", t.pos);
        unsigned v = 0;
        for (std::size_t i = 1; i < t.text.size(); ++i)
          {
            if (!std::isdigit(static_cast<unsigned char>(t.text[i])))
              fail(ErrorCode::SyntaxError, "expected a variable", t.pos);
            v = v * 10 + static_cast<unsigned>(t.text[i] - '0');
          }
        if (v >= 64)
          fail(ErrorCode::SyntaxError, "variable index too large", t.pos);
        ++i_;
        return v;
      }

      Fo implication()
      {
        Fo l = disjunction();
        if (accept("->"))
          return fo::implies(l, implication());
        return l;
      }

      Fo disjunction()
      {
        Fo l = conjunction();
        while (accept("|"))
          l = fo::disj(l, conjunction());
        return l;
      }

      Fo conjunction()
      {
        Fo l = unary();
        while (accept("&"))
          l = fo::conj(l, unary());
        return l;
      }

      Fo unary()
      {
        if (accept("!"))
          return fo::neg(unary());
        if (accept("exists"))
          {
            unsigned x = variable();
            return fo::exists(x, unary());
          }
        if (accept("forall"))
          {
            unsigned x = variable();
            return fo::forall(x, unary());
          }
        return primary();
      }

      Fo primary()
      {
        if (at_end())
          fail(ErrorCode::SyntaxError, "unexpected end of formula", peek().pos);
        if (accept("("))
          {
            Fo f = implication();
            expect(")");
            return f;
          }
        if (accept("true"))
          return fo::top();
        if (accept("false"))
          return fo::bottom();
        const FoToken& t = peek();
        if (t.ident && t.text.size() > 1 && t.text[0] == 'P' && toks_[i_ + 1].text == "(")
          {
            auto a = sigma_.find(t.text.substr(1));
            if (!a)
              fail(ErrorCode::UnknownAtom, "unknown letter in '" + t.text + "'", t.pos);
            i_ += 2;
            unsigned x = variable();
            expect(")");
            return fo::letter(*a, x);
          }
        unsigned x = variable();
        if (accept("~"))
          return fo::sim(x, variable());
        if (accept("<"))
          return fo::less(x, variable());
        if (accept("="))
          {
            unsigned y = variable();
            unsigned k = 0;
            if (accept("+"))
              {
                const FoToken& n = peek();
                std::size_t used = 0;
                try
                  {
                    k = static_cast<unsigned>(std::stoul(n.text, &used));
                  }
                catch (const std::exception&)
                  {
                    used = 0;
                  }
                if (!n.ident || used != n.text.size())
                  fail(ErrorCode::SyntaxError, "expected a number", n.pos);
                ++i_;
              }
            return fo::eq_plus(x, y, k);
          }
        fail(ErrorCode::SyntaxError, "expected '~', '<' or '='", peek().pos);
      }

      std::vector<FoToken> toks_;
      std::size_t i_ = 0;
      const Alphabet& sigma_;
    };

    void fo_print(const FoNode* n, const Alphabet& sigma, std::string& out)
    {
      auto var = [](unsigned x) { return "x" + std::to_string(x); };
      auto sub = [&](const Fo& f) {
        bool atomic = f->op == FoOp::True || f->op == FoOp::False || f->op == FoOp::Letter
                      || f->op == FoOp::Sim || f->op == FoOp::Less || f->op == FoOp::EqPlus;
        if (!atomic)
          out += '(';
        fo_print(f.get(), sigma, out);
        if (!atomic)
          out += ')';
      };
      switch (n->op)
        {
        case FoOp::True: out += "true"; break;
        case FoOp::False: out += "false"; break;
        case FoOp::Letter: out += "P" + sigma.symbol(n->letter) + "(" + var(n->x) + ")"; break;
        case FoOp::Sim: out += var(n->x) + " ~ " + var(n->y); break;
        case FoOp::Less: out += var(n->x) + " < " + var(n->y); break;
        case FoOp::EqPlus:
          out += var(n->x) + " = " + var(n->y);
          if (n->k)
            out += " + " + std::to_string(n->k);
          break;
        case FoOp::Not: out += "!"; sub(n->left); break;
        case FoOp::And: sub(n->left); out += " & "; sub(n->right); break;
        case FoOp::Or: sub(n->left); out += " | "; sub(n->right); break;
        case FoOp::Implies: sub(n->left); out += " -> "; sub(n->right); break;
        case FoOp::Exists: out += "exists " + var(n->x) + " "; sub(n->left); break;
        case FoOp::Forall: out += "forall " + var(n->x) + " "; sub(n->left); break;
        }
    }
  }

  Fo parse_fo(std::string_view text, const Alphabet& sigma)
  {
    return FoParser(text, sigma).parse();
  }

  std::string to_string(const Fo& f, const Alphabet& sigma)
  {
    std::string out;
    fo_print(f.get(), sigma, out);
    return out;
  }

  bool is_two_variable(const Fo& f) { return (f->vars & ~std::uint64_t(3)) == 0; }

  unsigned max_offset(const Fo& f)
  {
    unsigned m = f->op == FoOp::EqPlus ? f->k : 0;
    if (f->left)
      m = std::max(m, max_offset(f->left));
    if (f->right)
      m = std::max(m, max_offset(f->right));
    return m;
  }

  unsigned quantifier_depth(const Fo& f)
  {
    unsigned d = 0;
    if (f->left)
      d = std::max(d, quantifier_depth(f->left));
    if (f->right)
      d = std::max(d, quantifier_depth(f->right));
    return d + (f->op == FoOp::Exists || f->op == FoOp::Forall ? 1 : 0);
  }

  // ------------------------------------------------------------- semantics

  namespace
  {
    bool fo_eval(const DataWord& w, FoAssignment& asg, const FoNode* n)
    {
      auto pos = [&](unsigned x) -> std::size_t {
        if (x >= asg.size() || !asg[x])
          fail(ErrorCode::UnboundVariable, "x" + std::to_string(x) + " is unbound");
        return *asg[x];
      };
      switch (n->op)
        {
        case FoOp::True: return true;
        case FoOp::False: return false;
        case FoOp::Letter: return w.letter(pos(n->x)) == n->letter;
        case FoOp::Sim: return w.same_class(pos(n->x), pos(n->y));
        case FoOp::Less: return pos(n->x) < pos(n->y);
        case FoOp::EqPlus: return pos(n->x) == pos(n->y) + n->k;
        case FoOp::Not: return !fo_eval(w, asg, n->left.get());
        case FoOp::And: return fo_eval(w, asg, n->left.get()) && fo_eval(w, asg, n->right.get());
        case FoOp::Or: return fo_eval(w, asg, n->left.get()) || fo_eval(w, asg, n->right.get());
        case FoOp::Implies:
          return !fo_eval(w, asg, n->left.get()) || fo_eval(w, asg, n->right.get());
        case FoOp::Exists:
        case FoOp::Forall:
          {
            if (asg.size() <= n->x)
              asg.resize(n->x + 1);
            auto saved = asg[n->x];
            bool want = n->op == FoOp::Exists;
            bool result = !want;
            for (std::size_t p = 0; p < w.length(); ++p)
              {
                asg[n->x] = p;
                if (fo_eval(w, asg, n->left.get()) == want)
                  {
                    result = want;
                    break;
                  }
              }
            asg[n->x] = saved;
            return result;
          }
        }
      return false;
    }
  }

  bool eval_fo(const DataWord& w, const FoAssignment& asg, const Fo& f)
  {
    for (unsigned x = 0; x < 64; ++x)
      if ((f->free >> x) & 1)
        if (x >= asg.size() || !asg[x])
          fail(ErrorCode::UnboundVariable, "x" + std::to_string(x) + " is unbound");
    for (auto& p : asg)
      if (p && *p >= w.length())
        fail(ErrorCode::PositionOutOfRange, "assignment outside the word");
    FoAssignment copy = asg;
    return fo_eval(w, copy, f.get());
  }

  // ---------------------------------------------------------- translations

  Fo chi(unsigned j, int k, unsigned m)
  {
    if (j > 1)
      fail(ErrorCode::PreconditionViolation, "j must be 0 or 1");
    const int bound = static_cast<int>(m) + 1;
    if (k > bound || k < -bound)
      fail(ErrorCode::PreconditionViolation, "offset out of range");
    const unsigned cur = j, other = 1 - j;
    if (k >= 0 && k < bound)
      return fo::eq_plus(other, cur, static_cast<unsigned>(k));
    if (k < 0 && k > -bound)
      return fo::eq_plus(cur, other, static_cast<unsigned>(-k));
    std::vector<Fo> parts;
    if (k > 0)
      {
        parts.push_back(fo::less(cur, other));
        for (unsigned d = 1; d <= m; ++d)
          parts.push_back(fo::neg(fo::eq_plus(other, cur, d)));
      }
    else
      {
        parts.push_back(fo::less(other, cur));
        for (unsigned d = 1; d <= m; ++d)
          parts.push_back(fo::neg(fo::eq_plus(cur, other, d)));
      }
    return fo::conj_all(parts);
  }

  namespace
  {
    /// Offset encoded by the chain directly under a store1 node; \a tail
    /// receives the chain's operand.
    int chain_offset(const LtlNode* store, unsigned m, const LtlNode*& tail)
    {
      const LtlNode* c = store->left.get();
      int k = 0;
      while (c->op == LtlOp::Next || c->op == LtlOp::Prev)
        {
          k += c->op == LtlOp::Next ? 1 : -1;
          c = c->left.get();
        }
      if (c->op == LtlOp::Future || c->op == LtlOp::Past)
        {
          if (static_cast<unsigned>(k < 0 ? -k : k) != m + 1)
            fail(ErrorCode::NotSimpleFragment, "eventuality chain does not match m");
          c = c->left.get();
        }
      tail = c;
      return k;
    }

    Fo ltl_to_fo(const LtlNode* n, unsigned j, unsigned m)
    {
      const unsigned other = 1 - j;
      switch (n->op)
        {
        case LtlOp::True: return fo::top();
        case LtlOp::False: return fo::bottom();
        case LtlOp::Atom: return fo::letter(n->value, j);
        case LtlOp::NotAtom: return fo::neg(fo::letter(n->value, j));
        case LtlOp::Reg: return fo::sim(other, j);
        case LtlOp::NotReg: return fo::neg(fo::sim(other, j));
        case LtlOp::Not: return fo::neg(ltl_to_fo(n->left.get(), j, m));
        case LtlOp::And:
          return fo::conj(ltl_to_fo(n->left.get(), j, m), ltl_to_fo(n->right.get(), j, m));
        case LtlOp::Or:
          return fo::disj(ltl_to_fo(n->left.get(), j, m), ltl_to_fo(n->right.get(), j, m));
        case LtlOp::Implies:
          return fo::implies(ltl_to_fo(n->left.get(), j, m), ltl_to_fo(n->right.get(), j, m));
        case LtlOp::Store:
          {
            const LtlNode* tail = nullptr;
            int k = chain_offset(n, m, tail);
            return fo::exists(other, fo::conj(chi(j, k, m), ltl_to_fo(tail, other, m)));
          }
        default:
          fail(ErrorCode::NotSimpleFragment, "temporal operator outside a store1 chain");
        }
    }
  }

  Fo simple_ltl_to_fo2(const Ltl& f, unsigned j)
  {
    if (j > 1)
      fail(ErrorCode::PreconditionViolation, "j must be 0 or 1");
    auto info = classify(f);
    if (!info.is_sentence)
      fail(ErrorCode::NotASentence, "formula has free registers");
    if (!info.simple_m)
      fail(ErrorCode::NotSimpleFragment, "formula is not in the simple fragment");
    return ltl_to_fo(f.get(), j, *info.simple_m);
  }

  namespace
  {
    Fo swap_vars(const Fo& f)
    {
      switch (f->op)
        {
        case FoOp::True: case FoOp::False: return f;
        case FoOp::Letter: return fo::letter(f->letter, 1 - f->x);
        case FoOp::Sim: return fo::sim(1 - f->x, 1 - f->y);
        case FoOp::Less: return fo::less(1 - f->x, 1 - f->y);
        case FoOp::EqPlus: return fo::eq_plus(1 - f->x, 1 - f->y, f->k);
        case FoOp::Not: return fo::neg(swap_vars(f->left));
        case FoOp::And: return fo::conj(swap_vars(f->left), swap_vars(f->right));
        case FoOp::Or: return fo::disj(swap_vars(f->left), swap_vars(f->right));
        case FoOp::Implies: return fo::implies(swap_vars(f->left), swap_vars(f->right));
        case FoOp::Exists: return fo::exists(1 - f->x, swap_vars(f->left));
        case FoOp::Forall: return fo::forall(1 - f->x, swap_vars(f->left));
        }
      return f;
    }

    class ToLtl
    {
    public:
      explicit ToLtl(unsigned m) : m_(m) {}

      Ltl run(const Fo& f, unsigned j)
      {
        auto key = std::make_pair(f.get(), j);
        auto it = memo_.find(key);
        if (it != memo_.end())
          return it->second;
        Ltl out = compute(f, j);
        memo_.emplace(key, out);
        keep_.push_back(f);
        return out;
      }

    private:
      enum class Leaf
      {
        Alpha,
        Xi,
        Zeta
      };

      Ltl compute(const Fo& f, unsigned j)
      {
        switch (f->op)
          {
          case FoOp::True: return ltl::top();
          case FoOp::False: return ltl::bottom();
          case FoOp::Letter: return ltl::atom(f->letter);
          case FoOp::Sim: return ltl::top();
          case FoOp::Less: return ltl::bottom();
          case FoOp::EqPlus: return f->k == 0 ? ltl::top() : ltl::bottom();
          case FoOp::Not: return ltl::s_neg(run(f->left, j));
          case FoOp::And: return ltl::s_conj(run(f->left, j), run(f->right, j));
          case FoOp::Or: return ltl::s_disj(run(f->left, j), run(f->right, j));
          case FoOp::Implies:
            return ltl::s_disj(ltl::s_neg(run(f->left, j)), run(f->right, j));
          case FoOp::Forall:
            return ltl::s_neg(run(fo::exists(f->x, fo::neg(f->left)), j));
          case FoOp::Exists:
            if (f->x == j)
              return run(fo::exists(1 - j, swap_vars(f->left)), j);
            return existential(f->left, j);
          }
        return ltl::bottom();
      }

      void collect(const Fo& f, unsigned j, std::vector<std::pair<Fo, Leaf>>& leaves)
      {
        const std::uint64_t cur = std::uint64_t(1) << j;
        const std::uint64_t oth = std::uint64_t(1) << (1 - j);
        Leaf kind;
        if ((f->free & ~cur) == 0)
          kind = Leaf::Xi;
        else if ((f->free & ~oth) == 0)
          kind = Leaf::Zeta;
        else if (f->op == FoOp::Not || f->op == FoOp::And || f->op == FoOp::Or
                 || f->op == FoOp::Implies)
          {
            collect(f->left, j, leaves);
            if (f->right)
              collect(f->right, j, leaves);
            return;
          }
        else
          kind = Leaf::Alpha;
        for (auto& [g, k] : leaves)
          if (g.get() == f.get())
            return;
        leaves.emplace_back(f, kind);
      }

      /// Truth of a two-variable atom given the offset class k of x_{1-j}
      /// relative to x_j and whether the two positions share a class.
      bool alpha_value(const FoNode* a, unsigned j, int k, bool same) const
      {
        const int bound = static_cast<int>(m_) + 1;
        switch (a->op)
          {
          case FoOp::Sim: return same;
          case FoOp::Less: return a->x == j ? k > 0 : k < 0;
          case FoOp::EqPlus:
            {
              if (k >= bound || k <= -bound)
                return false;
              int want = a->x == j ? -static_cast<int>(a->k) : static_cast<int>(a->k);
              return k == want;
            }
          default:
            fail(ErrorCode::NotTwoVariable, "unexpected atom in two-variable position");
          }
      }

      Ltl substitute(const Fo& f, const std::map<const FoNode*, Ltl>& leafval)
      {
        auto it = leafval.find(f.get());
        if (it != leafval.end())
          return it->second;
        switch (f->op)
          {
          case FoOp::Not: return ltl::s_neg(substitute(f->left, leafval));
          case FoOp::And:
            return ltl::s_conj(substitute(f->left, leafval), substitute(f->right, leafval));
          case FoOp::Or:
            return ltl::s_disj(substitute(f->left, leafval), substitute(f->right, leafval));
          case FoOp::Implies:
            return ltl::s_disj(ltl::s_neg(substitute(f->left, leafval)),
                               substitute(f->right, leafval));
          default:
            fail(ErrorCode::NotTwoVariable, "unclassified subformula");
          }
      }

      Ltl offset_op(int k, Ltl body) const
      {
        const int bound = static_cast<int>(m_) + 1;
        Ltl c;
        if (k == bound)
          c = ltl::next_n(m_ + 1, ltl::future(body));
        else if (k == -bound)
          c = ltl::prev_n(m_ + 1, ltl::past(body));
        else if (k >= 0)
          c = ltl::next_n(static_cast<unsigned>(k), body);
        else
          c = ltl::prev_n(static_cast<unsigned>(-k), body);
        return ltl::store(1, c);
      }

      Ltl existential(const Fo& body, unsigned j)
      {
        std::vector<std::pair<Fo, Leaf>> leaves;
        collect(body, j, leaves);
        std::vector<const FoNode*> alphas;
        std::vector<Fo> xis, zetas;
        for (auto& [g, kind] : leaves)
          {
            if (kind == Leaf::Alpha)
              alphas.push_back(g.get());
            else if (kind == Leaf::Xi)
              xis.push_back(g);
            else
              zetas.push_back(g);
          }
        if (xis.size() > 20)
          fail(ErrorCode::PreconditionViolation, "too many single-variable subformulas");
        std::vector<Ltl> xi_t, zeta_t;
        for (auto& x : xis)
          xi_t.push_back(run(x, j));
        for (auto& z : zetas)
          zeta_t.push_back(run(z, 1 - j));

        std::vector<Ltl> disjuncts;
        const int bound = static_cast<int>(m_) + 1;
        for (int k = -bound; k <= bound; ++k)
          for (int b = 1; b >= 0; --b)
            {
              if (k == 0 && !b)
                continue;  // same position, same class
              std::map<const FoNode*, Ltl> leafval;
              for (auto* a : alphas)
                leafval[a] = alpha_value(a, j, k, b) ? ltl::top() : ltl::bottom();
              for (std::size_t z = 0; z < zetas.size(); ++z)
                leafval[zetas[z].get()] = zeta_t[z];
              const std::uint64_t subsets = std::uint64_t(1) << xis.size();
              for (std::uint64_t set = 0; set < subsets; ++set)
                {
                  Ltl guard = ltl::top();
                  for (std::size_t x = 0; x < xis.size(); ++x)
                    {
                      bool in = (set >> x) & 1;
                      leafval[xis[x].get()] = in ? ltl::top() : ltl::bottom();
                      guard = ltl::s_conj(guard, in ? xi_t[x] : ltl::s_neg(xi_t[x]));
                    }
                  if (guard->op == LtlOp::False)
                    continue;
                  Ltl beta = substitute(body, leafval);
                  if (beta->op == LtlOp::False)
                    continue;
                  Ltl same = k == 0 ? ltl::top() : (b ? ltl::reg(1) : ltl::neg(ltl::reg(1)));
                  Ltl inner = ltl::s_conj(same, beta);
                  disjuncts.push_back(ltl::s_conj(guard, offset_op(k, inner)));
                }
            }
        Ltl out = ltl::bottom();
        for (auto it = disjuncts.rbegin(); it != disjuncts.rend(); ++it)
          out = ltl::s_disj(*it, out);
        return out;
      }

      unsigned m_;
      std::map<std::pair<const FoNode*, unsigned>, Ltl> memo_;
      std::vector<Fo> keep_;
    };
  }

  Ltl fo2_to_simple_ltl(const Fo& f, unsigned j, std::optional<unsigned> m)
  {
    if (j > 1)
      fail(ErrorCode::PreconditionViolation, "j must be 0 or 1");
    if (!is_two_variable(f))
      fail(ErrorCode::NotTwoVariable, "formula uses variables other than x0, x1");
    if ((f->free & ~(std::uint64_t(1) << j)) != 0)
      fail(ErrorCode::WrongFreeVariable, "only x" + std::to_string(j) + " may be free");
    unsigned mm = max_offset(f);
    if (m && *m > mm)
      mm = *m;
    return ToLtl(mm).run(f, j);
  }
}
