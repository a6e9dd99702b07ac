#pragma once

// Independent reference implementations used to cross-check the library.

#include <dw/ca.hh>
#include <dw/fo.hh>
#include <dw/game.hh>
#include <dw/ltl.hh>
#include <dw/ra.hh>
#include <dw/word.hh>

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <random>
#include <vector>

namespace oracle
{
  using namespace dw;

  /// Bottom-up evaluation: truth of every subformula at every position,
  /// tabulated per register valuation (registers hold class indices, -1
  /// when undefined).
  class LtlTable
  {
  public:
    explicit LtlTable(const DataWord& w) : w_(w), n_(w.length()) {}

    bool holds(std::size_t i, const Ltl& f, std::vector<int> v = {})
    {
      return column(f, v)[i];
    }

    const std::vector<bool>& column(const Ltl& f, std::vector<int> v)
    {
      const auto key = std::make_pair(f.get(), v);
      if (auto it = memo_.find(key); it != memo_.end())
        return it->second;
      std::vector<bool> out(n_);
      const auto reg = [&](unsigned r) { return r <= v.size() ? v[r - 1] : -1; };
      switch (f->op)
        {
        case LtlOp::True: out.assign(n_, true); break;
        case LtlOp::False: break;
        case LtlOp::Atom:
        case LtlOp::NotAtom:
          for (std::size_t i = 0; i < n_; ++i)
            out[i] = (w_.letter(i) == f->value) == (f->op == LtlOp::Atom);
          break;
        case LtlOp::Reg:
        case LtlOp::NotReg:
          for (std::size_t i = 0; i < n_; ++i)
            out[i] = (reg(f->value) == static_cast<int>(w_.class_of(i).index)) ==
                     (f->op == LtlOp::Reg);
          break;
        case LtlOp::Not:
          {
            const auto a = column(f->left, v);
            for (std::size_t i = 0; i < n_; ++i)
              out[i] = !a[i];
            break;
          }
        case LtlOp::And:
        case LtlOp::Or:
        case LtlOp::Implies:
          {
            const auto a = column(f->left, v);
            const auto b = column(f->right, v);
            for (std::size_t i = 0; i < n_; ++i)
              out[i] = f->op == LtlOp::And ? a[i] && b[i]
                       : f->op == LtlOp::Or ? a[i] || b[i]
                                            : !a[i] || b[i];
            break;
          }
        case LtlOp::Next:
        case LtlOp::WeakNext:
          {
            const auto a = column(f->left, v);
            for (std::size_t i = 0; i < n_; ++i)
              out[i] = i + 1 < n_ ? a[i + 1] : f->op == LtlOp::WeakNext;
            break;
          }
        case LtlOp::Prev:
        case LtlOp::WeakPrev:
          {
            const auto a = column(f->left, v);
            for (std::size_t i = 0; i < n_; ++i)
              out[i] = i > 0 ? a[i - 1] : f->op == LtlOp::WeakPrev;
            break;
          }
        case LtlOp::Future:
        case LtlOp::Globally:
          {
            const auto a = column(f->left, v);
            bool acc = f->op == LtlOp::Globally;
            for (std::size_t i = n_; i-- > 0;)
              out[i] = acc = f->op == LtlOp::Future ? acc || a[i] : acc && a[i];
            break;
          }
        case LtlOp::Past:
        case LtlOp::PastGlobally:
          {
            const auto a = column(f->left, v);
            bool acc = f->op == LtlOp::PastGlobally;
            for (std::size_t i = 0; i < n_; ++i)
              out[i] = acc = f->op == LtlOp::Past ? acc || a[i] : acc && a[i];
            break;
          }
        case LtlOp::Until:
        case LtlOp::DualUntil:
          {
            // a U b, and its dual !(!a U !b).
            const bool dual = f->op == LtlOp::DualUntil;
            auto a = column(f->left, v);
            auto b = column(f->right, v);
            if (dual)
              for (std::size_t i = 0; i < n_; ++i)
                a[i] = !a[i], b[i] = !b[i];
            bool acc = false;
            for (std::size_t i = n_; i-- > 0;)
              {
                acc = b[i] || (a[i] && acc);
                out[i] = dual ? !acc : acc;
              }
            break;
          }
        case LtlOp::PastUntil:
        case LtlOp::PastDualUntil:
          {
            const bool dual = f->op == LtlOp::PastDualUntil;
            auto a = column(f->left, v);
            auto b = column(f->right, v);
            if (dual)
              for (std::size_t i = 0; i < n_; ++i)
                a[i] = !a[i], b[i] = !b[i];
            bool acc = false;
            for (std::size_t i = 0; i < n_; ++i)
              {
                acc = b[i] || (a[i] && acc);
                out[i] = dual ? !acc : acc;
              }
            break;
          }
        case LtlOp::Store:
          {
            auto u = v;
            if (u.size() < f->value)
              u.resize(f->value, -1);
            for (std::size_t i = 0; i < n_; ++i)
              {
                u[f->value - 1] = static_cast<int>(w_.class_of(i).index);
                out[i] = column(f->left, u)[i];
              }
            break;
          }
        }
      return memo_[key] = std::move(out);
    }

  private:
    const DataWord& w_;
    std::size_t n_;
    std::map<std::pair<const LtlNode*, std::vector<int>>, std::vector<bool>> memo_;
  };

  inline bool holds(const DataWord& w, const Ltl& f)
  {
    LtlTable t(w);
    return t.holds(0, f);
  }

  /// Random formula over \a ops with \a sigma letters and \a registers
  /// registers.  Register reads are only produced under a store when
  /// \a sentence is set.
  struct LtlGen
  {
    std::mt19937& rng;
    std::vector<LtlOp> ops;
    unsigned sigma = 2;
    unsigned registers = 1;
    bool sentence = true;

    /// \a bound is the bitmask of registers bound by an enclosing store.
    Ltl leaf(unsigned bound)
    {
      const unsigned k = rng() % (bound != 0 ? 4 : 3);
      if (k == 0)
        return rng() % 2 ? ltl::top() : ltl::bottom();
      if (k == 3)
        {
          std::vector<unsigned> regs;
          for (unsigned r = 1; r <= registers; ++r)
            if (bound >> r & 1)
              regs.push_back(r);
          return ltl::reg(regs[rng() % regs.size()]);
        }
      return ltl::atom(rng() % sigma);
    }

    /// Formula with at most \a size nodes.
    Ltl operator()(unsigned size, unsigned bound = 0)
    {
      if (!sentence)
        bound = ((1u << registers) - 1) << 1;
      if (size <= 1)
        return leaf(bound);
      const unsigned k = rng() % (ops.size() + 4);
      if (k == 0)
        return ltl::neg((*this)(size - 1, bound));
      if (k == 1 || k == 2)
        {
          const unsigned l = 1 + rng() % (size - 1 > 1 ? size - 2 : 1);
          const auto a = (*this)(l, bound);
          const auto b = (*this)(size - 1 - l > 0 ? size - 1 - l : 1, bound);
          return k == 1 ? ltl::conj(a, b) : ltl::disj(a, b);
        }
      if (k == 3)
        {
          const unsigned r = 1 + rng() % registers;
          return ltl::store(r, (*this)(size - 1, bound | 1u << r));
        }
      const LtlOp op = ops[k - 4];
      if (is_binary(op))
        {
          const unsigned l = 1 + rng() % (size - 1 > 1 ? size - 2 : 1);
          const auto a = (*this)(l, bound);
          const auto b = (*this)(size - 1 - l > 0 ? size - 1 - l : 1, bound);
          return ltl::make(op, a, b);
        }
      return ltl::make(op, (*this)(size - 1, bound));
    }
  };

  /// Register valuation as the library expects it, from class indices.
  inline RegisterValuation valuation(const std::vector<int>& v)
  {
    RegisterValuation out(static_cast<unsigned>(v.size()));
    for (std::size_t r = 0; r < v.size(); ++r)
      if (v[r] >= 0)
        out.set(static_cast<unsigned>(r + 1), ClassId{static_cast<std::uint32_t>(v[r])});
    return out;
  }

  /// Tarskian evaluation with an explicit environment (-1 = unbound).
  inline bool fo_holds(const DataWord& w, std::vector<long> env, const Fo& f)
  {
    const auto at = [&](unsigned x) {
      if (x >= env.size() || env[x] < 0)
        throw std::logic_error("unbound variable");
      return static_cast<std::size_t>(env[x]);
    };
    switch (f->op)
      {
      case FoOp::True: return true;
      case FoOp::False: return false;
      case FoOp::Letter: return w.letter(at(f->x)) == f->letter;
      case FoOp::Sim: return w.class_of(at(f->x)) == w.class_of(at(f->y));
      case FoOp::Less: return at(f->x) < at(f->y);
      case FoOp::EqPlus: return at(f->x) == at(f->y) + f->k;
      case FoOp::Not: return !fo_holds(w, env, f->left);
      case FoOp::And: return fo_holds(w, env, f->left) && fo_holds(w, env, f->right);
      case FoOp::Or: return fo_holds(w, env, f->left) || fo_holds(w, env, f->right);
      case FoOp::Implies: return !fo_holds(w, env, f->left) || fo_holds(w, env, f->right);
      case FoOp::Exists:
      case FoOp::Forall:
        {
          if (env.size() <= f->x)
            env.resize(f->x + 1, -1);
          const bool ex = f->op == FoOp::Exists;
          for (std::size_t p = 0; p < w.length(); ++p)
            {
              env[f->x] = static_cast<long>(p);
              if (fo_holds(w, env, f->left) == ex)
                return ex;
            }
          return !ex;
        }
      }
    return false;
  }

  /// Random simple one-register sentence over O_m: every temporal
  /// operator is X^k, Xp^k (1 <= k <= m), X^{m+1} F or Xp^{m+1} Fp placed
  /// directly under store1.
  struct SimpleLtlGen
  {
    std::mt19937& rng;
    unsigned m = 1;
    unsigned sigma = 2;

    Ltl operator()(unsigned size, bool bound = false)
    {
      if (size <= 1)
        {
          const unsigned k = rng() % (bound ? 4 : 3);
          if (k == 0)
            return rng() % 2 ? ltl::top() : ltl::bottom();
          if (k == 3)
            return ltl::reg(1);
          return ltl::atom(rng() % sigma);
        }
      switch (rng() % 4)
        {
        case 0: return ltl::neg((*this)(size - 1, bound));
        case 1:
        case 2:
          {
            const unsigned l = 1 + rng() % std::max(1u, size - 2);
            const auto a = (*this)(l, bound);
            const auto b = (*this)(std::max(1u, size - 1 - l), bound);
            return rng() % 2 ? ltl::conj(a, b) : ltl::disj(a, b);
          }
        default:
          {
            const auto body = (*this)(std::max(1u, size - 2), true);
            const bool fwd = rng() % 2;
            const unsigned choice = rng() % (m + 1);
            if (choice < m)
              return ltl::store(1, fwd ? ltl::next_n(choice + 1, body)
                                       : ltl::prev_n(choice + 1, body));
            return ltl::store(1, fwd ? ltl::next_n(m + 1, ltl::future(body))
                                     : ltl::prev_n(m + 1, ltl::past(body)));
          }
        }
    }
  };

  /// Random two-variable formula with free variables within {x_free},
  /// quantifier depth at most \a depth and offsets at most \a m.
  struct Fo2Gen
  {
    std::mt19937& rng;
    unsigned m = 1;
    unsigned sigma = 2;

    Fo atom(unsigned bound_mask)
    {
      std::vector<unsigned> vs;
      for (unsigned x = 0; x < 2; ++x)
        if (bound_mask >> x & 1)
          vs.push_back(x);
      const unsigned x = vs[rng() % vs.size()];
      const unsigned y = vs[rng() % vs.size()];
      switch (rng() % 5)
        {
        case 0: return fo::letter(rng() % sigma, x);
        case 1: return fo::sim(x, y);
        case 2: return fo::less(x, y);
        case 3: return fo::eq_plus(x, y, rng() % (m + 1));
        default: return rng() % 2 ? fo::top() : fo::bottom();
        }
    }

    Fo operator()(unsigned size, unsigned depth, unsigned bound_mask)
    {
      if (size <= 1)
        return atom(bound_mask);
      switch (rng() % 4)
        {
        case 0: return fo::neg((*this)(size - 1, depth, bound_mask));
        case 1:
          {
            const unsigned l = 1 + rng() % std::max(1u, size - 2);
            const auto a = (*this)(l, depth, bound_mask);
            const auto b = (*this)(std::max(1u, size - 1 - l), depth, bound_mask);
            return rng() % 2 ? fo::conj(a, b) : fo::disj(a, b);
          }
        default:
          {
            if (depth == 0)
              return atom(bound_mask);
            const unsigned x = rng() % 2;
            const auto body = (*this)(size - 1, depth - 1, bound_mask | 1u << x);
            return rng() % 2 ? fo::exists(x, body) : fo::forall(x, body);
          }
        }
    }
  };

  /// Random weak game: edges never increase rank.
  inline WeakGame random_game(std::mt19937& rng, std::size_t n, unsigned max_rank,
                              unsigned max_out)
  {
    WeakGame g;
    for (std::size_t p = 0; p < n; ++p)
      g.add(rng() % 2 ? Player::P1 : Player::P2, rng() % (max_rank + 1));
    for (std::size_t p = 0; p < n; ++p)
      {
        const unsigned out = rng() % (max_out + 1);
        for (unsigned k = 0; k < out; ++k)
          {
            const std::size_t q = rng() % n;
            if (g.rank[q] <= g.rank[p] &&
                std::find(g.succ[p].begin(), g.succ[p].end(), q) == g.succ[p].end())
              g.succ[p].push_back(q);
          }
      }
    return g;
  }

  /// Whether \a who wins every play from \a p once its own positions are
  /// fixed by \a pick and the opponent moves freely.
  inline bool wins_with(const WeakGame& g, std::size_t p, Player who,
                        const std::vector<std::size_t>& pick)
  {
    const auto next = [&](std::size_t x) {
      if (g.owner[x] == who && !g.succ[x].empty())
        return std::vector<std::size_t>{g.succ[x][pick[x]]};
      return g.succ[x];
    };
    std::vector<bool> seen(g.size());
    std::vector<std::size_t> stack{p};
    seen[p] = true;
    std::vector<std::size_t> reach;
    while (!stack.empty())
      {
        const auto x = stack.back();
        stack.pop_back();
        reach.push_back(x);
        if (g.succ[x].empty() && g.owner[x] == who)
          return false;
        for (auto y : next(x))
          if (!seen[y])
            seen[y] = true, stack.push_back(y);
      }
    // A reachable cycle is rank-constant; the opponent wins it when the
    // rank parity favours them.
    for (auto x : reach)
      {
        if ((g.rank[x] % 2 == 0) == (who == Player::P1))
          continue;
        std::vector<bool> seen2(g.size());
        std::vector<std::size_t> st = next(x);
        while (!st.empty())
          {
            const auto y = st.back();
            st.pop_back();
            if (y == x)
              return false;
            if (seen2[y])
              continue;
            seen2[y] = true;
            for (auto z : next(y))
              st.push_back(z);
          }
      }
    return true;
  }

  /// Winner from \a p by enumerating all positional strategies of P1.
  inline Player brute_winner(const WeakGame& g, std::size_t p)
  {
    std::vector<std::size_t> pick(g.size(), 0);
    while (true)
      {
        if (wins_with(g, p, Player::P1, pick))
          return Player::P1;
        std::size_t i = 0;
        for (; i < g.size(); ++i)
          {
            if (g.owner[i] != Player::P1 || g.succ[i].empty())
              continue;
            if (++pick[i] < g.succ[i].size())
              break;
            pick[i] = 0;
          }
        if (i == g.size())
          return Player::P2;
      }
  }

  struct RaGenOptions
  {
    std::size_t locations = 6;
    unsigned registers = 1;
    unsigned sigma = 2;
    bool with_and = true;
    bool with_or = true;
    bool two_way = false;
  };

  /// Random valid automaton.  Locations are split into strata of
  /// non-increasing rank; non-moving transitions only point to later
  /// locations, so heights exist.
  inline RegisterAutomaton random_ra(std::mt19937& rng, const RaGenOptions& o)
  {
    RegisterAutomaton a;
    std::vector<std::string> letters;
    for (unsigned k = 0; k < o.sigma; ++k)
      letters.push_back(std::string(1, static_cast<char>('a' + k)));
    a.alphabet = Alphabet(letters);
    a.registers = o.registers;
    const std::size_t n = o.locations;
    std::vector<unsigned> stratum(n);
    unsigned s = 0;
    for (std::size_t q = 0; q < n; ++q)
      {
        if (q > 0 && rng() % 3 == 0)
          ++s;
        stratum[q] = s;
      }
    const unsigned top_rank = 2 * s + 3;
    std::vector<unsigned> rank_of(s + 1);
    for (unsigned k = 0, r = top_rank; k <= s; ++k)
      {
        r -= rng() % 2;
        rank_of[k] = r;
        r = r > 0 ? r - 1 : 0;
      }
    for (std::size_t q = 0; q < n; ++q)
      a.add("q" + std::to_string(q), TransitionFormula::top(), rank_of[stratum[q]], 0);
    const auto later = [&](std::size_t q) -> std::optional<Location> {
      if (q + 1 >= n)
        return std::nullopt;
      return static_cast<Location>(q + 1 + rng() % (n - q - 1));
    };
    const auto same_or_later = [&](std::size_t q) {
      std::size_t lo = q;
      while (lo > 0 && stratum[lo - 1] == stratum[q])
        --lo;
      return static_cast<Location>(lo + rng() % (n - lo));
    };
    for (std::size_t q = 0; q < n; ++q)
      {
        auto& f = a.delta[q];
        const unsigned pick = rng() % 10;
        const auto l1 = later(q);
        const auto l2 = later(q);
        if (pick <= 3 && l1 && l2)
          {
            const unsigned t = rng() % (o.registers > 0 ? 4 : 2);
            if (t <= 1)
              f = TransitionFormula::ite(TestKind::Letter, rng() % o.sigma, *l1, *l2);
            else if (t == 2 && o.registers > 0)
              f = TransitionFormula::ite(TestKind::Reg, 1 + rng() % o.registers, *l1, *l2);
            else
              f = TransitionFormula::ite(rng() % 2 && o.two_way ? TestKind::Beg : TestKind::End,
                                         0, *l1, *l2);
          }
        else if (pick == 4 && l1 && o.registers > 0)
          f = TransitionFormula::store(1 + rng() % o.registers, *l1);
        else if (pick == 5 && l1 && l2 && (o.with_and || o.with_or))
          {
            const bool use_and = o.with_and && (!o.with_or || rng() % 2);
            f = use_and ? TransitionFormula::conj(*l1, *l2) : TransitionFormula::disj(*l1, *l2);
          }
        else if (pick <= 8)
          {
            TfKind k = rng() % 2 ? TfKind::X : TfKind::WX;
            if (o.two_way && rng() % 2)
              k = k == TfKind::X ? TfKind::Xp : TfKind::WXp;
            f = TransitionFormula::move(k, same_or_later(q));
          }
        else
          f = rng() % 2 ? TransitionFormula::top() : TransitionFormula::bottom();
      }
    recompute_heights(a);
    return a;
  }

  /// Membership for one-way automata by direct recursion: every play is
  /// finite, so ranks play no role.
  class OneWayRun
  {
  public:
    OneWayRun(const RegisterAutomaton& a, const DataWord& w) : a_(a), w_(w) {}

    bool accepts() { return value(0, a_.init, std::vector<int>(a_.registers, -1)); }

  private:
    bool value(std::size_t i, Location q, std::vector<int> v)
    {
      const auto key = std::make_tuple(i, q, v);
      if (auto it = memo_.find(key); it != memo_.end())
        return it->second;
      const auto& f = a_.delta[q];
      bool out = false;
      switch (f.kind)
        {
        case TfKind::Top: out = true; break;
        case TfKind::Bottom: out = false; break;
        case TfKind::Test:
          {
            bool t = false;
            switch (f.test)
              {
              case TestKind::Letter: t = w_.letter(i) == f.arg; break;
              case TestKind::Beg: t = i == 0; break;
              case TestKind::End: t = i + 1 == w_.length(); break;
              case TestKind::Reg: t = v[f.arg - 1] == static_cast<int>(w_.class_of(i).index); break;
              }
            out = value(i, t ? f.q1 : f.q2, v);
            break;
          }
        case TfKind::Store:
          {
            auto u = v;
            u[f.arg - 1] = static_cast<int>(w_.class_of(i).index);
            out = value(i, f.q1, u);
            break;
          }
        case TfKind::And: out = value(i, f.q1, v) && value(i, f.q2, v); break;
        case TfKind::Or: out = value(i, f.q1, v) || value(i, f.q2, v); break;
        case TfKind::X:
        case TfKind::WX:
          out = i + 1 < w_.length() ? value(i + 1, f.q1, v) : f.kind == TfKind::WX;
          break;
        case TfKind::Xp:
        case TfKind::WXp: throw std::logic_error("two-way automaton");
        }
      return memo_[key] = out;
    }

    const RegisterAutomaton& a_;
    const DataWord& w_;
    std::map<std::tuple<std::size_t, Location, std::vector<int>>, bool> memo_;
  };

  inline bool one_way_accepts(const RegisterAutomaton& a, const DataWord& w)
  {
    return OneWayRun(a, w).accepts();
  }

  struct ConcreteState
  {
    std::size_t position;
    Location location;
    std::vector<int> valuation;
    auto operator<=>(const ConcreteState&) const = default;
  };

  /// One step of a one-way automaton from any state.
  inline std::vector<ConcreteState> concrete_successors(const RegisterAutomaton& a,
                                                        const DataWord& w,
                                                        const ConcreteState& s)
  {
    const auto& f = a.delta[s.location];
    const auto cur = static_cast<int>(w.class_of(s.position).index);
    switch (f.kind)
      {
      case TfKind::Top:
      case TfKind::Bottom: return {};
      case TfKind::Test:
        {
          bool t = false;
          switch (f.test)
            {
            case TestKind::Letter: t = w.letter(s.position) == f.arg; break;
            case TestKind::Beg: t = s.position == 0; break;
            case TestKind::End: t = s.position + 1 == w.length(); break;
            case TestKind::Reg: t = s.valuation[f.arg - 1] == cur; break;
            }
          return {{s.position, t ? f.q1 : f.q2, s.valuation}};
        }
      case TfKind::Store:
        {
          auto v = s.valuation;
          v[f.arg - 1] = cur;
          return {{s.position, f.q1, v}};
        }
      case TfKind::And:
      case TfKind::Or: return {{s.position, f.q1, s.valuation}, {s.position, f.q2, s.valuation}};
      case TfKind::X:
      case TfKind::WX:
        if (s.position + 1 < w.length())
          return {{s.position + 1, f.q1, s.valuation}};
        return {};
      default: throw std::logic_error("two-way automaton");
      }
  }

  /// All register valuations over the classes of \a w.
  inline std::vector<std::vector<int>> all_valuations(const DataWord& w, unsigned registers)
  {
    std::vector<std::vector<int>> out{{}};
    for (unsigned r = 0; r < registers; ++r)
      {
        std::vector<std::vector<int>> next;
        for (const auto& v : out)
          for (int c = -1; c < static_cast<int>(w.num_classes()); ++c)
            {
              auto u = v;
              u.push_back(c);
              next.push_back(u);
            }
        out = std::move(next);
      }
    return out;
  }

  /// Brute-force search for an accepted word of length <= \a max_len.
  inline std::optional<DataWord> brute_force_witness(const RegisterAutomaton& a,
                                                     std::size_t max_len)
  {
    std::optional<DataWord> found;
    DataWordEnumerator e(a.alphabet.size(), max_len);
    while (e.next())
      if (one_way_accepts(a, e.current()))
        return e.current();
    return found;
  }

  /// Exact step of one transition on one valuation.
  inline std::optional<Valuation> minsky_apply(const Instruction& ins, Valuation v)
  {
    auto& x = v[ins.counter - 1];
    switch (ins.op)
      {
      case CounterOp::Inc: ++x; return v;
      case CounterOp::Dec:
        if (x == 0)
          return std::nullopt;
        --x;
        return v;
      case CounterOp::Ifz:
        if (x != 0)
          return std::nullopt;
        return v;
      }
    return std::nullopt;
  }

  /// All valuations with every counter at most \a cap.
  inline std::vector<Valuation> box(unsigned counters, unsigned cap)
  {
    std::vector<Valuation> out{{}};
    for (unsigned c = 0; c < counters; ++c)
      {
        std::vector<Valuation> next;
        for (const auto& v : out)
          for (unsigned x = 0; x <= cap; ++x)
            {
              auto u = v;
              u.push_back(x);
              next.push_back(u);
            }
        out = std::move(next);
      }
    return out;
  }

  /// Error-semantics successors of \a v along \a ins, read off the
  /// definition: grow to some v1 >= v, take an exact step to v2, and end
  /// anywhere at or above v2.  All values are capped.
  inline std::set<Valuation> dagger_successors(const Instruction& ins, const Valuation& v,
                                               unsigned cap)
  {
    std::set<Valuation> out;
    const auto all = box(static_cast<unsigned>(v.size()), cap);
    for (const auto& up : all)
      {
        if (!leq(v, up))
          continue;
        const auto mid = minsky_apply(ins, up);
        if (!mid)
          continue;
        for (const auto& end : all)
          if (leq(*mid, end))
            out.insert(end);
      }
    return out;
  }

  /// States reachable in at least one step without leaving the box.
  inline std::set<CaState> capped_reach(const CounterAutomaton& c, unsigned cap, bool dagger)
  {
    std::set<CaState> seen;
    std::vector<CaState> stack{initial_state(c)};
    std::set<CaState> expanded;
    while (!stack.empty())
      {
        const auto s = stack.back();
        stack.pop_back();
        if (!expanded.insert(s).second)
          continue;
        for (std::size_t t = 0; t < c.delta.size(); ++t)
          {
            const auto& tr = c.delta[t];
            if (tr.from != s.location)
              continue;
            std::vector<Valuation> next;
            if (dagger)
              for (const auto& v : dagger_successors(tr.instruction, s.values, cap))
                next.push_back(v);
            else
              {
                // Least error: a decrement at zero stays at zero.
                auto v = s.values;
                auto& x = v[tr.instruction.counter - 1];
                if (tr.instruction.op == CounterOp::Inc)
                  ++x;
                else if (tr.instruction.op == CounterOp::Dec)
                  x = x > 0 ? x - 1 : 0;
                else if (x != 0)
                  continue;
                next.push_back(v);
              }
            for (const auto& v : next)
              {
                bool inside = true;
                for (auto x : v)
                  inside = inside && x <= cap;
                if (!inside)
                  continue;
                CaState u{tr.to, v};
                seen.insert(u);
                stack.push_back(u);
              }
          }
      }
    return seen;
  }

  /// Word acceptance by exhaustive search over (position, state) with all
  /// counters capped.  Under incrementing semantics, least errors.
  inline bool capped_accepts(const CounterAutomaton& c, const std::vector<Letter>& w,
                             bool incrementing, unsigned cap)
  {
    if (w.empty())
      return false;
    using Node = std::pair<std::size_t, CaState>;
    std::set<Node> seen;
    std::vector<Node> stack{{0, initial_state(c)}};
    while (!stack.empty())
      {
        const auto [i, s] = stack.back();
        stack.pop_back();
        if (!seen.insert({i, s}).second)
          continue;
        for (const auto& tr : c.delta)
          {
            if (tr.from != s.location)
              continue;
            if (tr.letter && (i >= w.size() || *tr.letter != w[i]))
              continue;
            std::optional<Valuation> v;
            if (incrementing && tr.instruction.op == CounterOp::Dec)
              {
                v = s.values;
                auto& x = (*v)[tr.instruction.counter - 1];
                x = x > 0 ? x - 1 : 0;
              }
            else
              v = minsky_apply(tr.instruction, s.values);
            if (!v)
              continue;
            bool inside = true;
            for (auto x : *v)
              inside = inside && x <= cap;
            if (!inside)
              continue;
            const std::size_t j = i + (tr.letter ? 1 : 0);
            if (j == w.size() && tr.letter && c.accepting[tr.to])
              return true;
            stack.push_back({j, CaState{tr.to, *v}});
          }
      }
    return false;
  }

  /// Replays a finite run (transition indices) under least-error or exact
  /// semantics; returns the final state, or nullopt if a step is blocked
  /// or the transitions do not chain.
  inline std::optional<CaState> replay(const CounterAutomaton& c,
                                       const std::vector<std::size_t>& run,
                                       bool incrementing, CaState s)
  {
    for (auto t : run)
      {
        const auto& tr = c.delta.at(t);
        if (tr.from != s.location)
          return std::nullopt;
        std::optional<Valuation> v;
        if (incrementing && tr.instruction.op == CounterOp::Dec)
          {
            v = s.values;
            auto& x = (*v)[tr.instruction.counter - 1];
            x = x > 0 ? x - 1 : 0;
          }
        else
          v = minsky_apply(tr.instruction, s.values);
        if (!v)
          return std::nullopt;
        s = CaState{tr.to, *v};
      }
    return s;
  }

  /// Random counter automaton with \a locs locations and \a trans
  /// transitions, no epsilon transition into an accepting location.
  inline CounterAutomaton random_ca(std::mt19937& rng, std::size_t locs, std::size_t trans,
                                    unsigned counters, unsigned sigma = 2,
                                    bool with_eps = true)
  {
    CounterAutomaton c;
    std::vector<std::string> letters;
    for (unsigned k = 0; k < sigma; ++k)
      letters.push_back(std::string(1, static_cast<char>('a' + k)));
    c.alphabet = Alphabet(letters);
    c.counters = counters;
    for (std::size_t q = 0; q < locs; ++q)
      c.add_location("q" + std::to_string(q), rng() % 3 == 0);
    for (std::size_t k = 0; k < trans; ++k)
      {
        const auto from = static_cast<CaLocation>(rng() % locs);
        const auto to = static_cast<CaLocation>(rng() % locs);
        std::optional<Letter> l;
        if (!with_eps || c.accepting[to] || rng() % 4 != 0)
          l = static_cast<Letter>(rng() % sigma);
        const Instruction ins{static_cast<CounterOp>(rng() % 3),
                              1 + static_cast<unsigned>(rng() % counters)};
        c.add(from, l, ins, to);
      }
    return c;
  }

  /// Least-error successors of one state, all transitions.
  inline std::vector<CaState> least_successors(const CounterAutomaton& c, const CaState& s)
  {
    std::vector<CaState> out;
    for (std::size_t t = 0; t < c.delta.size(); ++t)
      if (c.delta[t].from == s.location)
        if (auto r = replay(c, {t}, true, s))
          out.push_back(*r);
    return out;
  }

  /// Whether some reachable accepting state returns to itself, with every
  /// state along the way inside the box.  Such a cycle always reads a
  /// letter, since epsilon transitions never enter accepting locations.
  inline bool capped_buchi(const CounterAutomaton& c, unsigned cap)
  {
    const auto inside = [&](const CaState& s) {
      for (auto x : s.values)
        if (x > cap)
          return false;
      return true;
    };
    std::set<CaState> reach{initial_state(c)};
    std::vector<CaState> stack{initial_state(c)};
    while (!stack.empty())
      {
        const auto s = stack.back();
        stack.pop_back();
        for (const auto& n : least_successors(c, s))
          if (inside(n) && reach.insert(n).second)
            stack.push_back(n);
      }
    for (const auto& s : reach)
      {
        if (!c.accepting[s.location])
          continue;
        std::set<CaState> seen;
        std::vector<CaState> st = least_successors(c, s);
        while (!st.empty())
          {
            const auto x = st.back();
            st.pop_back();
            if (!inside(x) || !seen.insert(x).second)
              continue;
            if (x == s)
              return true;
            for (const auto& n : least_successors(c, x))
              st.push_back(n);
          }
      }
    return false;
  }

  using StateSet = std::set<ConcreteState>;

  /// Sets of states at the next position that a one-way automaton can move
  /// to from \a s, resolving every non-moving transition at its position.
  inline std::set<StateSet> concrete_big_steps(const RegisterAutomaton& a, const DataWord& w,
                                               const ConcreteState& s)
  {
    const auto& f = a.delta[s.location];
    const bool last = s.position + 1 == w.length();
    const auto cur = static_cast<int>(w.class_of(s.position).index);
    const auto at = [&](Location q, std::vector<int> v) {
      return concrete_big_steps(a, w, {s.position, q, std::move(v)});
    };
    switch (f.kind)
      {
      case TfKind::Top: return {StateSet{}};
      case TfKind::Bottom: return {};
      case TfKind::Test:
        {
          bool t = false;
          switch (f.test)
            {
            case TestKind::Letter: t = w.letter(s.position) == f.arg; break;
            case TestKind::Beg: t = s.position == 0; break;
            case TestKind::End: t = last; break;
            case TestKind::Reg: t = s.valuation[f.arg - 1] == cur; break;
            }
          return at(t ? f.q1 : f.q2, s.valuation);
        }
      case TfKind::Store:
        {
          auto v = s.valuation;
          v[f.arg - 1] = cur;
          return at(f.q1, v);
        }
      case TfKind::Or:
        {
          auto out = at(f.q1, s.valuation);
          auto more = at(f.q2, s.valuation);
          out.insert(more.begin(), more.end());
          return out;
        }
      case TfKind::And:
        {
          std::set<StateSet> out;
          for (const auto& x : at(f.q1, s.valuation))
            for (const auto& y : at(f.q2, s.valuation))
              {
                auto u = x;
                u.insert(y.begin(), y.end());
                out.insert(u);
              }
          return out;
        }
      case TfKind::X:
      case TfKind::WX:
        if (!last)
          return {StateSet{{s.position + 1, f.q1, s.valuation}}};
        if (f.kind == TfKind::WX)
          return {StateSet{}};
        return {};
      default: throw std::logic_error("two-way automaton");
      }
  }

  /// Big steps of a whole set: one choice per member, united.
  inline std::set<StateSet> concrete_big_steps(const RegisterAutomaton& a, const DataWord& w,
                                               const StateSet& p)
  {
    std::set<StateSet> acc{StateSet{}};
    for (const auto& s : p)
      {
        std::set<StateSet> next;
        for (const auto& x : acc)
          for (const auto& y : concrete_big_steps(a, w, s))
            {
              auto u = x;
              u.insert(y.begin(), y.end());
              next.insert(u);
            }
        acc = std::move(next);
      }
    return acc;
  }

  /// Nonempty words over {a,b} in which the a's can be matched injectively
  /// to later b's: every suffix has at least as many b's as a's.
  inline bool a_matched_by_later_b(const std::vector<Letter>& w)
  {
    if (w.empty())
      return false;
    int balance = 0;
    for (auto it = w.rbegin(); it != w.rend(); ++it)
      {
        balance += *it == 1 ? 1 : -1;
        if (balance < 0)
          return false;
      }
    return true;
  }

  /// All strings of length 1..max_len.
  inline std::vector<std::vector<Letter>> all_strings(std::size_t sigma, std::size_t max_len)
  {
    std::vector<std::vector<Letter>> out, layer{{}};
    for (std::size_t n = 1; n <= max_len; ++n)
      {
        std::vector<std::vector<Letter>> next;
        for (const auto& s : layer)
          for (Letter b = 0; b < sigma; ++b)
            {
              auto t = s;
              t.push_back(b);
              next.push_back(t);
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
      }
    return out;
  }
}
