#include <dw/error.hh>
#include <dw/ltl.hh>

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <unordered_map>

namespace dw
{
  const char* op_name(LtlOp op)
  {
    switch (op)
      {
      case LtlOp::True: return "true";
      case LtlOp::False: return "false";
      case LtlOp::Atom: return "atom";
      case LtlOp::NotAtom: return "natom";
      case LtlOp::Reg: return "up";
      case LtlOp::NotReg: return "nup";
      case LtlOp::Not: return "!";
      case LtlOp::And: return "&";
      case LtlOp::Or: return "|";
      case LtlOp::Implies: return "->";
      case LtlOp::Next: return "X";
      case LtlOp::Prev: return "Xp";
      case LtlOp::WeakNext: return "Xw";
      case LtlOp::WeakPrev: return "Xpw";
      case LtlOp::Future: return "F";
      case LtlOp::Past: return "Fp";
      case LtlOp::Globally: return "G";
      case LtlOp::PastGlobally: return "Gp";
      case LtlOp::Until: return "U";
      case LtlOp::PastUntil: return "Up";
      case LtlOp::DualUntil: return "Ud";
      case LtlOp::PastDualUntil: return "Upd";
      case LtlOp::Store: return "store";
      }
    return "?";
  }

  bool is_temporal(LtlOp op)
  {
    switch (op)
      {
      case LtlOp::Next: case LtlOp::Prev: case LtlOp::WeakNext: case LtlOp::WeakPrev:
      case LtlOp::Future: case LtlOp::Past: case LtlOp::Globally: case LtlOp::PastGlobally:
      case LtlOp::Until: case LtlOp::PastUntil: case LtlOp::DualUntil:
      case LtlOp::PastDualUntil:
        return true;
      default:
        return false;
      }
  }

  bool is_binary(LtlOp op)
  {
    switch (op)
      {
      case LtlOp::And: case LtlOp::Or: case LtlOp::Implies: case LtlOp::Until:
      case LtlOp::PastUntil: case LtlOp::DualUntil: case LtlOp::PastDualUntil:
        return true;
      default:
        return false;
      }
  }

  bool is_unary(LtlOp op)
  {
    switch (op)
      {
      case LtlOp::Not: case LtlOp::Next: case LtlOp::Prev: case LtlOp::WeakNext:
      case LtlOp::WeakPrev: case LtlOp::Future: case LtlOp::Past: case LtlOp::Globally:
      case LtlOp::PastGlobally: case LtlOp::Store:
        return true;
      default:
        return false;
      }
  }

  namespace ltl
  {
    Ltl make(LtlOp op, Ltl left, Ltl right, std::uint32_t value)
    {
      auto n = std::make_shared<LtlNode>();
      n->op = op;
      n->value = value;
      n->left = std::move(left);
      n->right = std::move(right);
      return n;
    }

    Ltl top()
    {
      static const Ltl t = make(LtlOp::True);
      return t;
    }

    Ltl bottom()
    {
      static const Ltl f = make(LtlOp::False);
      return f;
    }

    Ltl atom(Letter a) { return make(LtlOp::Atom, nullptr, nullptr, a); }
    Ltl natom(Letter a) { return make(LtlOp::NotAtom, nullptr, nullptr, a); }
    Ltl reg(unsigned r) { return make(LtlOp::Reg, nullptr, nullptr, r); }
    Ltl nreg(unsigned r) { return make(LtlOp::NotReg, nullptr, nullptr, r); }
    Ltl neg(Ltl f) { return make(LtlOp::Not, std::move(f)); }
    Ltl conj(Ltl a, Ltl b) { return make(LtlOp::And, std::move(a), std::move(b)); }
    Ltl disj(Ltl a, Ltl b) { return make(LtlOp::Or, std::move(a), std::move(b)); }
    Ltl implies(Ltl a, Ltl b) { return make(LtlOp::Implies, std::move(a), std::move(b)); }

    Ltl iff(Ltl a, Ltl b)
    {
      return disj(conj(a, b), conj(neg(a), neg(b)));
    }

    Ltl next(Ltl f) { return make(LtlOp::Next, std::move(f)); }
    Ltl prev(Ltl f) { return make(LtlOp::Prev, std::move(f)); }
    Ltl wnext(Ltl f) { return make(LtlOp::WeakNext, std::move(f)); }
    Ltl wprev(Ltl f) { return make(LtlOp::WeakPrev, std::move(f)); }
    Ltl future(Ltl f) { return make(LtlOp::Future, std::move(f)); }
    Ltl past(Ltl f) { return make(LtlOp::Past, std::move(f)); }
    Ltl globally(Ltl f) { return make(LtlOp::Globally, std::move(f)); }
    Ltl pglobally(Ltl f) { return make(LtlOp::PastGlobally, std::move(f)); }
    Ltl until(Ltl a, Ltl b) { return make(LtlOp::Until, std::move(a), std::move(b)); }
    Ltl puntil(Ltl a, Ltl b) { return make(LtlOp::PastUntil, std::move(a), std::move(b)); }
    Ltl duntil(Ltl a, Ltl b) { return make(LtlOp::DualUntil, std::move(a), std::move(b)); }
    Ltl pduntil(Ltl a, Ltl b) { return make(LtlOp::PastDualUntil, std::move(a), std::move(b)); }
    Ltl store(unsigned r, Ltl f) { return make(LtlOp::Store, std::move(f), nullptr, r); }

    Ltl next_n(unsigned k, Ltl f)
    {
      while (k--)
        f = next(f);
      return f;
    }

    Ltl prev_n(unsigned k, Ltl f)
    {
      while (k--)
        f = prev(f);
      return f;
    }

    Ltl conj_all(const std::vector<Ltl>& fs)
    {
      if (fs.empty())
        return top();
      Ltl acc = fs.back();
      for (std::size_t i = fs.size() - 1; i-- > 0;)
        acc = conj(fs[i], acc);
      return acc;
    }

    Ltl disj_all(const std::vector<Ltl>& fs)
    {
      if (fs.empty())
        return bottom();
      Ltl acc = fs.back();
      for (std::size_t i = fs.size() - 1; i-- > 0;)
        acc = disj(fs[i], acc);
      return acc;
    }

    Ltl s_neg(Ltl f)
    {
      if (f->op == LtlOp::True)
        return bottom();
      if (f->op == LtlOp::False)
        return top();
      if (f->op == LtlOp::Not)
        return f->left;
      return neg(std::move(f));
    }

    Ltl s_conj(Ltl a, Ltl b)
    {
      if (a->op == LtlOp::False || b->op == LtlOp::False)
        return bottom();
      if (a->op == LtlOp::True)
        return b;
      if (b->op == LtlOp::True)
        return a;
      return conj(std::move(a), std::move(b));
    }

    Ltl s_disj(Ltl a, Ltl b)
    {
      if (a->op == LtlOp::True || b->op == LtlOp::True)
        return top();
      if (a->op == LtlOp::False)
        return b;
      if (b->op == LtlOp::False)
        return a;
      return disj(std::move(a), std::move(b));
    }

    Ltl s_iff(Ltl a, Ltl b)
    {
      if (b->op == LtlOp::True)
        return a;
      if (b->op == LtlOp::False)
        return s_neg(a);
      if (a->op == LtlOp::True)
        return b;
      if (a->op == LtlOp::False)
        return s_neg(b);
      return iff(std::move(a), std::move(b));
    }
  }

  std::optional<ClassId> RegisterValuation::get(unsigned r) const
  {
    if (!defined(r))
      return std::nullopt;
    return ClassId{static_cast<std::uint32_t>(v_[r - 1])};
  }

  void RegisterValuation::set(unsigned r, ClassId c)
  {
    if (r == 0)
      fail(ErrorCode::PreconditionViolation, "registers are 1-based");
    if (r > v_.size())
      v_.resize(r, -1);
    v_[r - 1] = static_cast<std::int32_t>(c.index);
  }

  void RegisterValuation::clear(unsigned r)
  {
    if (r >= 1 && r <= v_.size())
      v_[r - 1] = -1;
  }

  // ---------------------------------------------------------------- parsing

  namespace
  {
    enum class Tok
    {
      Ident,
      LParen,
      RParen,
      Bang,
      Amp,
      Bar,
      Arrow,
      End
    };

    struct Token
    {
      Tok kind;
      std::string text;
      std::size_t pos;
    };

    bool ident_char(char c)
    {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    }

    std::vector<Token> tokenize(std::string_view s)
    {
      std::vector<Token> out;
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
          switch (c)
            {
            case '(': out.push_back({Tok::LParen, "(", start}); ++i; continue;
            case ')': out.push_back({Tok::RParen, ")", start}); ++i; continue;
            case '!': out.push_back({Tok::Bang, "!", start}); ++i; continue;
            case '&': out.push_back({Tok::Amp, "&", start}); ++i; continue;
            case '|': out.push_back({Tok::Bar, "|", start}); ++i; continue;
            case '-':
              if (i + 1 < s.size() && s[i + 1] == '>')
                {
                  out.push_back({Tok::Arrow, "->", start});
                  i += 2;
                  continue;
                }
              fail(ErrorCode::SyntaxError, "expected '->'", start);
            default:
              break;
            }
          if (!ident_char(c))
            fail(ErrorCode::SyntaxError, std::string("unexpected character '") + c + "'", start);
          while (i < s.size() && ident_char(s[i]))
            ++i;
          out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
        }
      out.push_back({Tok::End, "", s.size()});
      return out;
    }

    /// Register suffix of `store3` / `up3`, or 0.
    unsigned register_suffix(const std::string& t, const char* prefix)
    {
      std::string p(prefix);
      if (t.size() <= p.size() || t.compare(0, p.size(), p) != 0)
        return 0;
      unsigned r = 0;
      for (std::size_t i = p.size(); i < t.size(); ++i)
        {
          if (!std::isdigit(static_cast<unsigned char>(t[i])))
            return 0;
          r = r * 10 + static_cast<unsigned>(t[i] - '0');
          if (r > 1000000)
            return 0;
        }
      return r;
    }

    const std::map<std::string, LtlOp>& prefix_ops()
    {
      static const std::map<std::string, LtlOp> m = {
        {"X", LtlOp::Next},        {"Xp", LtlOp::Prev},   {"Xw", LtlOp::WeakNext},
        {"Xpw", LtlOp::WeakPrev},  {"F", LtlOp::Future},  {"Fp", LtlOp::Past},
        {"G", LtlOp::Globally},    {"Gp", LtlOp::PastGlobally},
      };
      return m;
    }

    const std::map<std::string, LtlOp>& infix_ops()
    {
      static const std::map<std::string, LtlOp> m = {
        {"U", LtlOp::Until},
        {"Up", LtlOp::PastUntil},
        {"Ud", LtlOp::DualUntil},
        {"Upd", LtlOp::PastDualUntil},
      };
      return m;
    }

    bool is_keyword(const std::string& t)
    {
      return t == "true" || t == "false" || prefix_ops().count(t) || infix_ops().count(t)
             || register_suffix(t, "store") || register_suffix(t, "up");
    }

    class Parser
    {
    public:
      Parser(std::string_view text, const Alphabet* sigma, std::set<std::string>* seen)
        : toks_(tokenize(text)), sigma_(sigma), seen_(seen)
      {
      }

      Ltl parse()
      {
        Ltl f = implication();
        if (peek().kind != Tok::End)
          fail(ErrorCode::SyntaxError, "unexpected '" + peek().text + "'", peek().pos);
        return f;
      }

    private:
      const Token& peek() const { return toks_[i_]; }
      const Token& take() { return toks_[i_++]; }

      Ltl node(LtlOp op, std::size_t pos, Ltl l = nullptr, Ltl r = nullptr, std::uint32_t v = 0)
      {
        auto n = std::make_shared<LtlNode>();
        n->op = op;
        n->value = v;
        n->left = std::move(l);
        n->right = std::move(r);
        n->pos = pos;
        return n;
      }

      Ltl implication()
      {
        Ltl l = disjunction();
        if (peek().kind == Tok::Arrow)
          {
            auto pos = take().pos;
            return node(LtlOp::Implies, pos, l, implication());
          }
        return l;
      }

      Ltl disjunction()
      {
        Ltl l = conjunction();
        while (peek().kind == Tok::Bar)
          {
            auto pos = take().pos;
            l = node(LtlOp::Or, pos, l, conjunction());
          }
        return l;
      }

      Ltl conjunction()
      {
        Ltl l = unary();
        while (peek().kind == Tok::Amp)
          {
            auto pos = take().pos;
            l = node(LtlOp::And, pos, l, unary());
          }
        return l;
      }

      Ltl unary()
      {
        const Token& t = peek();
        if (t.kind == Tok::Bang)
          {
            take();
            return node(LtlOp::Not, t.pos, unary());
          }
        if (t.kind == Tok::Ident)
          {
            auto it = prefix_ops().find(t.text);
            if (it != prefix_ops().end())
              {
                take();
                return node(it->second, t.pos, unary());
              }
            if (unsigned r = register_suffix(t.text, "store"))
              {
                take();
                return node(LtlOp::Store, t.pos, unary(), nullptr, r);
              }
          }
        return until();
      }

      Ltl until()
      {
        Ltl l = primary();
        const Token& t = peek();
        if (t.kind == Tok::Ident)
          {
            auto it = infix_ops().find(t.text);
            if (it != infix_ops().end())
              {
                take();
                return node(it->second, t.pos, l, until());
              }
          }
        return l;
      }

      Ltl primary()
      {
        const Token& t = take();
        switch (t.kind)
          {
          case Tok::LParen:
            {
              Ltl f = implication();
              if (peek().kind != Tok::RParen)
                fail(ErrorCode::SyntaxError, "expected ')'", peek().pos);
              take();
              return f;
            }
          case Tok::Ident:
            {
              if (t.text == "true")
                return node(LtlOp::True, t.pos);
              if (t.text == "false")
                return node(LtlOp::False, t.pos);
              if (unsigned r = register_suffix(t.text, "up"))
                return node(LtlOp::Reg, t.pos, nullptr, nullptr, r);
              if (is_keyword(t.text))
                fail(ErrorCode::SyntaxError, "misplaced operator '" + t.text + "'", t.pos);
              if (seen_)
                {
                  seen_->insert(t.text);
                  return node(LtlOp::Atom, t.pos);
                }
              auto a = sigma_->find(t.text);
              if (!a)
                fail(ErrorCode::UnknownAtom, "unknown atom '" + t.text + "'", t.pos);
              return node(LtlOp::Atom, t.pos, nullptr, nullptr, *a);
            }
          case Tok::End:
            fail(ErrorCode::SyntaxError, "unexpected end of formula", t.pos);
          default:
            fail(ErrorCode::SyntaxError, "unexpected '" + t.text + "'", t.pos);
          }
      }

      std::vector<Token> toks_;
      std::size_t i_ = 0;
      const Alphabet* sigma_;
      std::set<std::string>* seen_;
    };
  }

  Ltl parse_ltl(std::string_view text, const Alphabet& sigma)
  {
    return Parser(text, &sigma, nullptr).parse();
  }

  std::pair<Alphabet, Ltl> parse_ltl_infer(std::string_view text)
  {
    std::set<std::string> seen;
    Parser(text, nullptr, &seen).parse();
    Alphabet sigma(std::vector<std::string>(seen.begin(), seen.end()));
    if (sigma.empty())
      sigma = Alphabet({"a"});
    return {sigma, parse_ltl(text, sigma)};
  }

  // --------------------------------------------------------------- printing

  namespace
  {
    int precedence(LtlOp op)
    {
      switch (op)
        {
        case LtlOp::Implies: return 1;
        case LtlOp::Or: return 2;
        case LtlOp::And: return 3;
        case LtlOp::Not: case LtlOp::Next: case LtlOp::Prev: case LtlOp::WeakNext:
        case LtlOp::WeakPrev: case LtlOp::Future: case LtlOp::Past: case LtlOp::Globally:
        case LtlOp::PastGlobally: case LtlOp::Store: case LtlOp::NotAtom: case LtlOp::NotReg:
          return 4;
        case LtlOp::Until: case LtlOp::PastUntil: case LtlOp::DualUntil:
        case LtlOp::PastDualUntil:
          return 5;
        default:
          return 6;
        }
    }

    void print(const LtlNode* n, const Alphabet& sigma, int min_prec, std::string& out)
    {
      int p = precedence(n->op);
      bool paren = p < min_prec;
      if (paren)
        out += '(';
      switch (n->op)
        {
        case LtlOp::True: out += "true"; break;
        case LtlOp::False: out += "false"; break;
        case LtlOp::Atom: out += sigma.symbol(n->value); break;
        case LtlOp::NotAtom: out += "!" + sigma.symbol(n->value); break;
        case LtlOp::Reg: out += "up" + std::to_string(n->value); break;
        case LtlOp::NotReg: out += "!up" + std::to_string(n->value); break;
        case LtlOp::Store:
          out += "store" + std::to_string(n->value) + " ";
          print(n->left.get(), sigma, 4, out);
          break;
        case LtlOp::Not:
          out += "!";
          print(n->left.get(), sigma, 4, out);
          break;
        case LtlOp::Next: case LtlOp::Prev: case LtlOp::WeakNext: case LtlOp::WeakPrev:
        case LtlOp::Future: case LtlOp::Past: case LtlOp::Globally: case LtlOp::PastGlobally:
          out += op_name(n->op);
          out += ' ';
          print(n->left.get(), sigma, 4, out);
          break;
        case LtlOp::And: case LtlOp::Or:
          print(n->left.get(), sigma, p, out);
          out += n->op == LtlOp::And ? " & " : " | ";
          print(n->right.get(), sigma, p + 1, out);
          break;
        case LtlOp::Implies:
          print(n->left.get(), sigma, 2, out);
          out += " -> ";
          print(n->right.get(), sigma, 1, out);
          break;
        case LtlOp::Until: case LtlOp::PastUntil: case LtlOp::DualUntil:
        case LtlOp::PastDualUntil:
          print(n->left.get(), sigma, 6, out);
          out += ' ';
          out += op_name(n->op);
          out += ' ';
          print(n->right.get(), sigma, 5, out);
          break;
        }
      if (paren)
        out += ')';
    }
  }

  std::string to_string(const Ltl& f, const Alphabet& sigma)
  {
    std::string out;
    print(f.get(), sigma, 0, out);
    return out;
  }

  std::uint64_t formula_size(const Ltl& f)
  {
    std::unordered_map<const LtlNode*, std::uint64_t> memo;
    std::function<std::uint64_t(const LtlNode*)> rec = [&](const LtlNode* n) -> std::uint64_t {
      auto it = memo.find(n);
      if (it != memo.end())
        return it->second;
      std::uint64_t s = 1;
      constexpr std::uint64_t cap = std::uint64_t(1) << 62;
      if (n->left)
        s = std::min(cap, s + rec(n->left.get()));
      if (n->right)
        s = std::min(cap, s + rec(n->right.get()));
      memo.emplace(n, s);
      return s;
    };
    return rec(f.get());
  }

  bool structurally_equal(const Ltl& a, const Ltl& b)
  {
    if (a.get() == b.get())
      return true;
    if (!a || !b)
      return false;
    return a->op == b->op && a->value == b->value && structurally_equal(a->left, b->left)
           && structurally_equal(a->right, b->right);
  }

  // ------------------------------------------------------------- semantics

  struct LtlEvaluator::Impl
  {
    const DataWord& w;
    struct Key
    {
      const LtlNode* n;
      std::uint32_t i;
      std::uint64_t v;
      bool operator==(const Key&) const = default;
    };
    struct KeyHash
    {
      std::size_t operator()(const Key& k) const
      {
        std::size_t h = std::hash<const void*>()(k.n);
        h ^= std::hash<std::uint64_t>()(k.v + 0x9e3779b97f4a7c15ULL * (k.i + 1)) + (h << 6) + (h >> 2);
        return h;
      }
    };
    std::unordered_map<Key, bool, KeyHash> memo;

    explicit Impl(const DataWord& word) : w(word) {}

    static std::optional<std::uint64_t> pack(const RegisterValuation& v)
    {
      if (v.size() > 8)
        return std::nullopt;
      std::uint64_t out = 0;
      for (unsigned r = 0; r < v.size(); ++r)
        {
          auto c = v.raw()[r];
          if (c >= 254)
            return std::nullopt;
          out |= static_cast<std::uint64_t>(c + 1) << (8 * r);
        }
      return out;
    }

    bool run(const LtlNode* n, std::size_t i, const RegisterValuation& v)
    {
      switch (n->op)
        {
        case LtlOp::True: return true;
        case LtlOp::False: return false;
        case LtlOp::Atom: return w.letter(i) == n->value;
        case LtlOp::NotAtom: return w.letter(i) != n->value;
        case LtlOp::Reg:
          return v.defined(n->value) && v.get(n->value)->index == w.classes()[i];
        case LtlOp::NotReg:
          return !(v.defined(n->value) && v.get(n->value)->index == w.classes()[i]);
        default:
          break;
        }
      auto key = pack(v);
      if (key)
        {
          auto it = memo.find(Key{n, static_cast<std::uint32_t>(i), *key});
          if (it != memo.end())
            return it->second;
        }
      bool r = compute(n, i, v);
      if (key)
        memo.emplace(Key{n, static_cast<std::uint32_t>(i), *key}, r);
      return r;
    }

    bool compute(const LtlNode* n, std::size_t i, const RegisterValuation& v)
    {
      const std::size_t len = w.length();
      const LtlNode* l = n->left.get();
      const LtlNode* r = n->right.get();
      switch (n->op)
        {
        case LtlOp::Not: return !run(l, i, v);
        case LtlOp::And: return run(l, i, v) && run(r, i, v);
        case LtlOp::Or: return run(l, i, v) || run(r, i, v);
        case LtlOp::Implies: return !run(l, i, v) || run(r, i, v);
        case LtlOp::Next: return i + 1 < len && run(l, i + 1, v);
        case LtlOp::WeakNext: return i + 1 >= len || run(l, i + 1, v);
        case LtlOp::Prev: return i > 0 && run(l, i - 1, v);
        case LtlOp::WeakPrev: return i == 0 || run(l, i - 1, v);
        case LtlOp::Future:
          for (std::size_t j = i; j < len; ++j)
            if (run(l, j, v))
              return true;
          return false;
        case LtlOp::Globally:
          for (std::size_t j = i; j < len; ++j)
            if (!run(l, j, v))
              return false;
          return true;
        case LtlOp::Past:
          for (std::size_t j = i + 1; j-- > 0;)
            if (run(l, j, v))
              return true;
          return false;
        case LtlOp::PastGlobally:
          for (std::size_t j = i + 1; j-- > 0;)
            if (!run(l, j, v))
              return false;
          return true;
        case LtlOp::Until:
          for (std::size_t j = i; j < len; ++j)
            {
              if (run(r, j, v))
                return true;
              if (!run(l, j, v))
                return false;
            }
          return false;
        case LtlOp::PastUntil:
          for (std::size_t j = i + 1; j-- > 0;)
            {
              if (run(r, j, v))
                return true;
              if (!run(l, j, v))
                return false;
            }
          return false;
        case LtlOp::DualUntil:
          for (std::size_t j = i; j < len; ++j)
            {
              if (!run(r, j, v))
                return false;
              if (run(l, j, v))
                return true;
            }
          return true;
        case LtlOp::PastDualUntil:
          for (std::size_t j = i + 1; j-- > 0;)
            {
              if (!run(r, j, v))
                return false;
              if (run(l, j, v))
                return true;
            }
          return true;
        case LtlOp::Store:
          {
            RegisterValuation v2 = v;
            v2.set(n->value, w.class_of(i));
            return run(l, i, v2);
          }
        default:
          return false;
        }
    }
  };

  LtlEvaluator::LtlEvaluator(const DataWord& w) : impl_(std::make_unique<Impl>(w)) {}
  LtlEvaluator::~LtlEvaluator() = default;

  bool LtlEvaluator::eval(std::size_t i, const RegisterValuation& v, const Ltl& f)
  {
    if (i >= impl_->w.length())
      fail(ErrorCode::PositionOutOfRange, "position " + std::to_string(i) + " out of range");
    for (auto c : v.raw())
      if (c >= 0 && static_cast<std::size_t>(c) >= impl_->w.num_classes())
        fail(ErrorCode::ForeignValuation, "valuation refers to a class not of this word");
    return impl_->run(f.get(), i, v);
  }

  bool eval(const DataWord& w, std::size_t i, const RegisterValuation& v, const Ltl& f)
  {
    LtlEvaluator e(w);
    return e.eval(i, v, f);
  }

  // ---------------------------------------------------------- normal forms

  Ltl desugar(const Ltl& f)
  {
    std::unordered_map<const LtlNode*, Ltl> memo;
    std::function<Ltl(const Ltl&)> rec = [&](const Ltl& n) -> Ltl {
      auto it = memo.find(n.get());
      if (it != memo.end())
        return it->second;
      Ltl out;
      Ltl l = n->left ? rec(n->left) : nullptr;
      Ltl r = n->right ? rec(n->right) : nullptr;
      switch (n->op)
        {
        case LtlOp::Future: out = ltl::until(ltl::top(), l); break;
        case LtlOp::Past: out = ltl::puntil(ltl::top(), l); break;
        case LtlOp::Globally: out = ltl::neg(ltl::until(ltl::top(), ltl::neg(l))); break;
        case LtlOp::PastGlobally: out = ltl::neg(ltl::puntil(ltl::top(), ltl::neg(l))); break;
        case LtlOp::Implies: out = ltl::disj(ltl::neg(l), r); break;
        default:
          if (l.get() == n->left.get() && r.get() == n->right.get())
            out = n;
          else
            out = ltl::make(n->op, l, r, n->value);
        }
      memo.emplace(n.get(), out);
      return out;
    };
    return rec(f);
  }

  Ltl nnf(const Ltl& f)
  {
    std::map<std::pair<const LtlNode*, bool>, Ltl> memo;
    std::function<Ltl(const Ltl&, bool)> rec = [&](const Ltl& n, bool neg) -> Ltl {
      auto key = std::make_pair(n.get(), neg);
      auto it = memo.find(key);
      if (it != memo.end())
        return it->second;
      Ltl out;
      switch (n->op)
        {
        case LtlOp::True: out = neg ? ltl::bottom() : ltl::top(); break;
        case LtlOp::False: out = neg ? ltl::top() : ltl::bottom(); break;
        case LtlOp::Atom: out = neg ? ltl::natom(n->value) : ltl::atom(n->value); break;
        case LtlOp::NotAtom: out = neg ? ltl::atom(n->value) : ltl::natom(n->value); break;
        case LtlOp::Reg: out = neg ? ltl::nreg(n->value) : ltl::reg(n->value); break;
        case LtlOp::NotReg: out = neg ? ltl::reg(n->value) : ltl::nreg(n->value); break;
        case LtlOp::Not: out = rec(n->left, !neg); break;
        case LtlOp::And:
          out = neg ? ltl::disj(rec(n->left, true), rec(n->right, true))
                    : ltl::conj(rec(n->left, false), rec(n->right, false));
          break;
        case LtlOp::Or:
          out = neg ? ltl::conj(rec(n->left, true), rec(n->right, true))
                    : ltl::disj(rec(n->left, false), rec(n->right, false));
          break;
        case LtlOp::Implies:
          out = neg ? ltl::conj(rec(n->left, false), rec(n->right, true))
                    : ltl::disj(rec(n->left, true), rec(n->right, false));
          break;
        case LtlOp::Next:
          out = neg ? ltl::wnext(rec(n->left, true)) : ltl::next(rec(n->left, false));
          break;
        case LtlOp::WeakNext:
          out = neg ? ltl::next(rec(n->left, true)) : ltl::wnext(rec(n->left, false));
          break;
        case LtlOp::Prev:
          out = neg ? ltl::wprev(rec(n->left, true)) : ltl::prev(rec(n->left, false));
          break;
        case LtlOp::WeakPrev:
          out = neg ? ltl::prev(rec(n->left, true)) : ltl::wprev(rec(n->left, false));
          break;
        case LtlOp::Future:
          // F p = true U p;  !F p = false Ud !p
          out = neg ? ltl::duntil(ltl::bottom(), rec(n->left, true))
                    : ltl::until(ltl::top(), rec(n->left, false));
          break;
        case LtlOp::Globally:
          out = neg ? ltl::until(ltl::top(), rec(n->left, true))
                    : ltl::duntil(ltl::bottom(), rec(n->left, false));
          break;
        case LtlOp::Past:
          out = neg ? ltl::pduntil(ltl::bottom(), rec(n->left, true))
                    : ltl::puntil(ltl::top(), rec(n->left, false));
          break;
        case LtlOp::PastGlobally:
          out = neg ? ltl::puntil(ltl::top(), rec(n->left, true))
                    : ltl::pduntil(ltl::bottom(), rec(n->left, false));
          break;
        case LtlOp::Until:
          out = neg ? ltl::duntil(rec(n->left, true), rec(n->right, true))
                    : ltl::until(rec(n->left, false), rec(n->right, false));
          break;
        case LtlOp::DualUntil:
          out = neg ? ltl::until(rec(n->left, true), rec(n->right, true))
                    : ltl::duntil(rec(n->left, false), rec(n->right, false));
          break;
        case LtlOp::PastUntil:
          out = neg ? ltl::pduntil(rec(n->left, true), rec(n->right, true))
                    : ltl::puntil(rec(n->left, false), rec(n->right, false));
          break;
        case LtlOp::PastDualUntil:
          out = neg ? ltl::puntil(rec(n->left, true), rec(n->right, true))
                    : ltl::pduntil(rec(n->left, false), rec(n->right, false));
          break;
        case LtlOp::Store:
          out = ltl::store(n->value, rec(n->left, neg));
          break;
        }
      memo.emplace(key, out);
      return out;
    };
    return rec(f, false);
  }

  FragmentInfo classify(const Ltl& f)
  {
    FragmentInfo info;
    // Operators, registers and free registers.
    std::function<void(const LtlNode*, std::set<unsigned>&)> scan =
      [&](const LtlNode* n, std::set<unsigned>& bound) {
        if (is_temporal(n->op))
          info.operators.insert(n->op);
        if (n->op == LtlOp::Reg || n->op == LtlOp::NotReg || n->op == LtlOp::Store)
          info.max_register = std::max<unsigned>(info.max_register, n->value);
        if ((n->op == LtlOp::Reg || n->op == LtlOp::NotReg) && !bound.count(n->value))
          info.is_sentence = false;
        if (n->op == LtlOp::Store)
          {
            bool had = bound.count(n->value);
            bound.insert(n->value);
            scan(n->left.get(), bound);
            if (!had)
              bound.erase(n->value);
            return;
          }
        if (n->left)
          scan(n->left.get(), bound);
        if (n->right)
          scan(n->right.get(), bound);
      };
    std::set<unsigned> bound;
    scan(f.get(), bound);

    // Simple fragment: every temporal operator sits in a chain directly
    // under store1, and the chain is one of X^k, Xp^k, X^k F, Xp^k Fp.
    bool simple = true;
    unsigned lower = 0;
    std::set<unsigned> exact;
    std::function<void(const LtlNode*)> walk = [&](const LtlNode* n) {
      if (!simple)
        return;
      if (is_temporal(n->op))
        {
          simple = false;
          return;
        }
      if (n->op == LtlOp::Store)
        {
          if (n->value != 1)
            {
              simple = false;
              return;
            }
          const LtlNode* c = n->left.get();
          unsigned k = 0;
          LtlOp step = LtlOp::True;
          while ((c->op == LtlOp::Next || c->op == LtlOp::Prev)
                 && (k == 0 || c->op == step))
            {
              step = c->op;
              ++k;
              c = c->left.get();
            }
          bool tail_f = (c->op == LtlOp::Future && step != LtlOp::Prev)
                        || (c->op == LtlOp::Past && step != LtlOp::Next);
          if (tail_f)
            {
              if (k == 0)
                {
                  simple = false;
                  return;
                }
              exact.insert(k - 1);
              c = c->left.get();
            }
          else
            lower = std::max(lower, k);
          walk(c);
          return;
        }
      if (n->left)
        walk(n->left.get());
      if (n->right)
        walk(n->right.get());
    };
    walk(f.get());
    if (simple && exact.size() <= 1)
      {
        if (exact.empty())
          info.simple_m = lower;
        else if (*exact.begin() >= lower)
          info.simple_m = *exact.begin();
      }
    return info;
  }

  std::optional<DataWord> sat_bounded(const Ltl& f, std::size_t alphabet_size,
                                      std::size_t max_len)
  {
    DataWordEnumerator e(alphabet_size, max_len);
    while (e.next())
      if (eval(e.current(), 0, RegisterValuation(), f))
        return e.current();
    return std::nullopt;
  }
}
