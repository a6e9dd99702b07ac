#include <dw/error.hh>
#include <dw/reductions.hh>

#include <cctype>
#include <deque>
#include <functional>
#include <set>

namespace dw
{
  namespace
  {
    std::string sanitize(const std::string& s)
    {
      std::string out = s;
      for (auto& ch : out)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
          ch = '_';
      return out;
    }

    const char* op_token(CounterOp op)
    {
      return op == CounterOp::Inc ? "inc" : op == CounterOp::Dec ? "dec" : "ifz";
    }

    /// Letter sets and formula helpers over the transition alphabet.
    class Letters
    {
    public:
      Letters(const CounterAutomaton& c, const TransitionAlphabet& t) : c_(c), t_(t) {}

      std::vector<Letter> where(const std::function<bool(const CaTransition&)>& pred) const
      {
        std::vector<Letter> out;
        for (std::size_t i = 0; i < c_.delta.size(); ++i)
          if (pred(c_.delta[i]))
            out.push_back(t_.letter_of(i));
        return out;
      }

      std::vector<Letter> all() const
      {
        return where([](const CaTransition&) { return true; });
      }

      std::vector<Letter> with(CounterOp op, unsigned counter) const
      {
        return where([&](const CaTransition& d) {
          return d.instruction.op == op && d.instruction.counter == counter;
        });
      }

      std::vector<Letter> from(CaLocation q) const
      {
        return where([&](const CaTransition& d) { return d.from == q; });
      }

      std::vector<Letter> not_from(CaLocation q) const
      {
        return where([&](const CaTransition& d) { return d.from != q; });
      }

      std::vector<Letter> into(CaLocation q) const
      {
        return where([&](const CaTransition& d) { return d.to == q; });
      }

      std::vector<Letter> into_accepting() const
      {
        return where([&](const CaTransition& d) { return c_.accepting[d.to]; });
      }

      std::vector<Letter> from_accepting() const
      {
        return where([&](const CaTransition& d) { return c_.accepting[d.from]; });
      }

      /// Locations entered by some transition, in index order.
      std::vector<CaLocation> targets() const
      {
        std::set<CaLocation> s;
        for (auto& d : c_.delta)
          s.insert(d.to);
        return {s.begin(), s.end()};
      }

    private:
      const CounterAutomaton& c_;
      const TransitionAlphabet& t_;
    };

    Ltl any(const std::vector<Letter>& ls)
    {
      std::vector<Ltl> fs;
      for (auto l : ls)
        fs.push_back(ltl::atom(l));
      return ltl::disj_all(fs);
    }

    Ltl last() { return ltl::neg(ltl::next(ltl::top())); }

    /// k-fold weak next written with strong next and negation.
    Ltl wnext_n(unsigned k, Ltl f) { return ltl::neg(ltl::next_n(k, ltl::neg(std::move(f)))); }

    void require_nonempty(const CounterAutomaton& c)
    {
      require_valid(c);
      if (c.delta.empty())
        fail(ErrorCode::PreconditionViolation, "counter automaton has no transitions");
    }

    /// Conjuncts shared by the one-register sentences.
    std::vector<Condition> run_conditions(const CounterAutomaton& c, const TransitionAlphabet& t,
                                          bool infinite)
    {
      using namespace ltl;
      Letters L(c, t);
      std::vector<Condition> out;

      out.push_back({"1", globally(any(L.all()))});

      std::vector<Ltl> chain;
      for (auto p : L.targets())
        if (auto bad = L.not_from(p); !bad.empty())
          chain.push_back(implies(any(L.into(p)), neg(next(any(bad)))));
      out.push_back({"2", conj(any(L.from(c.init)), globally(conj_all(chain)))});

      if (infinite)
        out.push_back({"3'", globally(future(any(L.from_accepting())))});
      else
        out.push_back({"3", future(conj(last(), any(L.into_accepting())))});

      auto pairs = [&](CounterOp op) {
        std::vector<Ltl> ds;
        for (unsigned k = 1; k <= c.counters; ++k)
          if (auto ls = L.with(op, k); !ls.empty())
            ds.push_back(future(conj(any(ls), store(1, next(future(conj(any(ls), reg(1))))))));
        return s_neg(disj_all(ds));
      };
      out.push_back({"4", pairs(CounterOp::Inc)});
      out.push_back({"5", pairs(CounterOp::Dec)});

      std::vector<Ltl> d6, d7;
      for (unsigned k = 1; k <= c.counters; ++k)
        {
          auto inc = L.with(CounterOp::Inc, k);
          auto dec = L.with(CounterOp::Dec, k);
          auto ifz = L.with(CounterOp::Ifz, k);
          if (inc.empty() || ifz.empty())
            continue;
          auto matched = next(future(conj(any(dec), reg(1))));
          d6.push_back(
            future(conj(any(inc), store(1, conj(next(future(any(ifz))), neg(matched))))));
          if (!dec.empty())
            d7.push_back(future(conj(
              any(inc),
              store(1, next(future(conj(any(ifz), next(future(conj(any(dec), reg(1)))))))))));
        }
      out.push_back({"6", s_neg(disj_all(d6))});
      out.push_back({"7", s_neg(disj_all(d7))});
      return out;
    }

    Reduction finish(TransitionAlphabet t, std::vector<Condition> conds)
    {
      std::vector<Ltl> fs;
      for (auto& k : conds)
        fs.push_back(k.formula);
      Reduction r{std::move(t), std::move(conds), nullptr};
      r.formula = ltl::conj_all(fs);
      return r;
    }
  }

  TransitionAlphabet transition_alphabet(const CounterAutomaton& c, bool with_markers)
  {
    std::vector<std::string> symbols;
    std::set<std::string> used;
    TransitionAlphabet t;
    auto fresh = [&](std::string s) {
      if (used.count(s))
        {
          std::size_t k = 2;
          while (used.count(s + "_" + std::to_string(k)))
            ++k;
          s += "_" + std::to_string(k);
        }
      used.insert(s);
      symbols.push_back(s);
      return static_cast<Letter>(symbols.size() - 1);
    };
    for (std::size_t i = 0; i < c.delta.size(); ++i)
      {
        const auto& d = c.delta[i];
        std::string tok = sanitize(c.names[d.from]) + "."
                          + (d.letter ? sanitize(c.alphabet.symbol(*d.letter)) : "eps") + "."
                          + op_token(d.instruction.op) + std::to_string(d.instruction.counter)
                          + "." + sanitize(c.names[d.to]);
        t.transition_letter.push_back(fresh(tok));
        t.transition.push_back(i);
        t.projection.push_back(d.letter);
      }
    if (with_markers)
      for (unsigned k = 1; k <= c.counters; ++k)
        for (const char* role : {"hi", "lo"})
          {
            t.markers.push_back(fresh(role + std::to_string(k)));
            t.transition.push_back(std::nullopt);
            t.projection.push_back(std::nullopt);
          }
    t.alphabet = Alphabet(symbols);
    return t;
  }

  std::vector<Letter> project(const TransitionAlphabet& t, const DataWord& w)
  {
    return project_string(w, t.projection);
  }

  DataWord encode_run(const TransitionAlphabet& t, const CounterAutomaton& c,
                      const std::vector<std::size_t>& run)
  {
    if (run.empty())
      fail(ErrorCode::EmptyWord, "empty run");
    std::vector<Letter> letters;
    std::vector<std::uint32_t> classes;
    std::vector<std::deque<std::uint32_t>> open(c.counters + 1);
    std::uint32_t next = 0;
    for (auto i : run)
      {
        const auto& ins = c.delta.at(i).instruction;
        letters.push_back(t.letter_of(i));
        std::uint32_t cls = next++;
        if (ins.op == CounterOp::Inc)
          open[ins.counter].push_back(cls);
        else if (ins.op == CounterOp::Dec && !open[ins.counter].empty())
          {
            cls = open[ins.counter].front();
            open[ins.counter].pop_front();
          }
        classes.push_back(cls);
      }
    return DataWord(std::move(letters), classes);
  }

  Reduction ca_to_ltl_finite(const CounterAutomaton& c)
  {
    require_nonempty(c);
    auto t = transition_alphabet(c);
    auto conds = run_conditions(c, t, false);
    return finish(std::move(t), std::move(conds));
  }

  Reduction ca_to_ltl_infinite(const CounterAutomaton& c)
  {
    require_nonempty(c);
    auto t = transition_alphabet(c);
    auto conds = run_conditions(c, t, true);
    return finish(std::move(t), std::move(conds));
  }

  Reduction minsky_to_ltl_xffp(const CounterAutomaton& c, bool infinite)
  {
    using namespace ltl;
    require_nonempty(c);
    auto t = transition_alphabet(c);
    auto conds = run_conditions(c, t, infinite);
    Letters L(c, t);
    std::vector<Ltl> cs;
    for (unsigned k = 1; k <= c.counters; ++k)
      if (auto dec = L.with(CounterOp::Dec, k); !dec.empty())
        cs.push_back(globally(implies(
          any(dec), store(1, past(conj(any(L.with(CounterOp::Inc, k)), reg(1)))))));
    conds.push_back({"8", conj_all(cs)});
    return finish(std::move(t), std::move(conds));
  }

  Reduction minsky_to_ltl_2reg(const CounterAutomaton& c, bool infinite)
  {
    using namespace ltl;
    require_nonempty(c);
    auto t = transition_alphabet(c, true);
    Letters L(c, t);
    const unsigned n = c.counters;
    const unsigned block = 2 * n + 1;
    auto hi = [&](unsigned k) { return atom(t.marker(0, k)); };
    auto lo = [&](unsigned k) { return atom(t.marker(1, k)); };
    // From hi k (resp. lo k) to the transition letter of the same block.
    auto to_tr_hi = [&](unsigned k) { return 2 * (n - k) + 2; };
    auto to_tr_lo = [&](unsigned k) { return 2 * (n - k) + 1; };
    const Ltl tr = any(L.all());
    const Ltl head = n > 0 ? hi(1) : tr;
    std::vector<Condition> out;

    {
      std::vector<Ltl> shape;
      for (unsigned k = 1; k <= n; ++k)
        {
          shape.push_back(implies(hi(k), next(lo(k))));
          shape.push_back(implies(lo(k), next(k < n ? hi(k + 1) : tr)));
        }
      shape.push_back(implies(tr, wnext_n(1, head)));
      out.push_back({"i", conj(head, globally(conj_all(shape)))});
    }

    {
      std::vector<Letter> every;
      for (Letter l = 0; l < t.alphabet.size(); ++l)
        every.push_back(l);
      out.push_back({"ii", globally(any(every))});
    }

    {
      std::vector<Ltl> chain;
      for (auto p : L.targets())
        if (auto bad = L.not_from(p); !bad.empty())
          chain.push_back(implies(any(L.into(p)), neg(next_n(block, any(bad)))));
      out.push_back({"iii", conj(next_n(2 * n, any(L.from(c.init))), globally(conj_all(chain)))});
    }

    if (infinite)
      out.push_back({"iv", globally(future(any(L.from_accepting())))});
    else
      out.push_back({"iv", future(conj(last(), any(L.into_accepting())))});

    {
      std::vector<Ltl> cs;
      for (unsigned k = 1; k <= n; ++k)
        cs.push_back(next_n(2 * (k - 1), store(1, next(reg(1)))));
      out.push_back({"v", conj_all(cs)});
    }

    auto in_block = [&](Ltl marker, unsigned dist, const std::vector<Letter>& ls) {
      return conj(std::move(marker), next_n(dist, any(ls)));
    };

    {
      std::vector<Ltl> cs;
      for (unsigned k = 1; k <= n; ++k)
        if (auto inc = L.with(CounterOp::Inc, k); !inc.empty())
          {
            cs.push_back(globally(
              implies(hi(k), store(1, globally(implies(any(inc), neg(next_n(2 * k - 1, reg(1)))))))));
            cs.push_back(globally(
              implies(in_block(lo(k), to_tr_lo(k), inc), store(1, wnext_n(block, reg(1))))));
          }
      out.push_back({"vi", conj_all(cs)});
    }

    {
      std::vector<Ltl> cs;
      for (unsigned k = 1; k <= n; ++k)
        if (auto dec = L.with(CounterOp::Dec, k); !dec.empty())
          cs.push_back(
            globally(implies(in_block(hi(k), to_tr_hi(k), dec), store(1, next(neg(reg(1)))))));
      out.push_back({"vii", conj_all(cs)});
    }

    {
      std::vector<Ltl> cs;
      for (unsigned k = 1; k <= n; ++k)
        if (auto dec = L.with(CounterOp::Dec, k); !dec.empty())
          {
            cs.push_back(globally(
              implies(in_block(hi(k), to_tr_hi(k), dec), store(1, wnext_n(block, reg(1))))));
            auto moved = globally(implies(conj(lo(k), conj(reg(1), next_n(to_tr_lo(k), any(dec)))),
                                          wnext_n(block, reg(2))));
            cs.push_back(globally(
              implies(hi(k), store(1, wnext_n(block, implies(neg(reg(1)), store(2, moved)))))));
          }
      out.push_back({"viii", conj_all(cs)});
    }

    {
      std::vector<Ltl> cs;
      for (unsigned k = 1; k <= n; ++k)
        if (auto ifz = L.with(CounterOp::Ifz, k); !ifz.empty())
          cs.push_back(globally(implies(in_block(hi(k), to_tr_hi(k), ifz), store(1, next(reg(1))))));
      out.push_back({"ix", conj_all(cs)});
    }

    {
      // Counters untouched by a block keep both markers in their classes.
      std::vector<Ltl> cs;
      for (unsigned k = 1; k <= n; ++k)
        {
          auto other = L.where([&](const CaTransition& d) {
            return d.instruction.counter != k || d.instruction.op == CounterOp::Ifz;
          });
          if (other.empty())
            continue;
          cs.push_back(globally(
            implies(in_block(hi(k), to_tr_hi(k), other), store(1, wnext_n(block, reg(1))))));
          cs.push_back(globally(
            implies(in_block(lo(k), to_tr_lo(k), other), store(1, wnext_n(block, reg(1))))));
        }
      out.push_back({"frame", conj_all(cs)});
    }

    return finish(std::move(t), std::move(out));
  }

  namespace
  {
    /// Small construction kit for one-way nondeterministic automata.
    class NraBuilder
    {
    public:
      explicit NraBuilder(Alphabet sigma)
      {
        a.alphabet = std::move(sigma);
        a.registers = 1;
        root = add("root", TransitionFormula::bottom());
        yes = add("violation", TransitionFormula::top());
        no = add("clean", TransitionFormula::bottom());
      }

      Location add(const std::string& role, TransitionFormula f)
      {
        return a.add(role + std::to_string(a.size()), f, 1, 0);
      }

      Location member(const std::vector<Letter>& ls, Location in, Location out)
      {
        Location q = out;
        for (auto it = ls.rbegin(); it != ls.rend(); ++it)
          q = add("is", TransitionFormula::ite(TestKind::Letter, *it, in, q));
        return q;
      }

      Location next(Location q) { return add("next", TransitionFormula::move(TfKind::X, q)); }
      Location store(Location q) { return add("store", TransitionFormula::store(1, q)); }
      Location same_class(Location in, Location out)
      {
        return add("up", TransitionFormula::ite(TestKind::Reg, 1, in, out));
      }
      Location at_end(Location in, Location out)
      {
        return add("end", TransitionFormula::ite(TestKind::End, 0, in, out));
      }
      Location either(Location l, Location r) { return add("or", TransitionFormula::disj(l, r)); }

      /// Guesses a position from here on where \a check holds.
      Location somewhere(Location check)
      {
        Location g = add("guess", TransitionFormula::bottom());
        Location gx = next(g);
        a.delta[g] = TransitionFormula::disj(gx, check);
        return g;
      }

      /// Scans forward from here: \a body decides at each position, using
      /// the returned location to continue.
      Location loop(const std::function<Location(Location)>& body)
      {
        Location l = add("scan", TransitionFormula::bottom());
        Location q = body(next(l));
        a.delta[l] = a.delta[q];
        return l;
      }

      RegisterAutomaton a;
      Location root, yes, no;
    };
  }

  RegisterAutomaton ca_violations_1nra(const CounterAutomaton& c)
  {
    require_nonempty(c);
    auto t = transition_alphabet(c);
    Letters L(c, t);
    NraBuilder b(t.alphabet);
    std::vector<Location> pieces;

    // Wrong first transition, or two consecutive transitions that do not chain.
    pieces.push_back(b.member(L.from(c.init), b.no, b.yes));
    {
      std::vector<Location> check(c.size(), b.no);
      for (auto p : L.targets())
        check[p] = b.next(b.member(L.not_from(p), b.yes, b.no));
      Location dispatch = b.no;
      for (std::size_t i = c.delta.size(); i-- > 0;)
        dispatch = b.add("is", TransitionFormula::ite(TestKind::Letter, t.letter_of(i),
                                                      check[c.delta[i].to], dispatch));
      pieces.push_back(b.somewhere(dispatch));
    }
    // Last transition does not enter an accepting location.
    {
      auto rejecting = L.where([&](const CaTransition& d) { return !c.accepting[d.to]; });
      pieces.push_back(b.somewhere(b.at_end(b.member(rejecting, b.yes, b.no), b.no)));
    }
    // Two increments, or two decrements, of one counter in one class.
    for (CounterOp op : {CounterOp::Inc, CounterOp::Dec})
      for (unsigned k = 1; k <= c.counters; ++k)
        if (auto ls = L.with(op, k); !ls.empty())
          {
            Location again = b.somewhere(b.member(ls, b.same_class(b.yes, b.no), b.no));
            pieces.push_back(b.somewhere(b.member(ls, b.store(b.next(again)), b.no)));
          }
    // An increment followed by a zero test before any decrement in its class.
    for (unsigned k = 1; k <= c.counters; ++k)
      {
        auto inc = L.with(CounterOp::Inc, k);
        auto dec = L.with(CounterOp::Dec, k);
        auto ifz = L.with(CounterOp::Ifz, k);
        if (inc.empty() || ifz.empty())
          continue;
        Location scan = b.loop([&](Location onward) {
          Location zero = b.member(ifz, b.yes, onward);
          return b.member(dec, b.same_class(b.no, zero), zero);
        });
        pieces.push_back(b.somewhere(b.member(inc, b.store(b.next(scan)), b.no)));
      }

    Location acc = pieces.back();
    for (std::size_t i = pieces.size() - 1; i-- > 0;)
      acc = b.either(pieces[i], acc);
    b.a.delta[b.root] = b.a.delta[acc];
    recompute_heights(b.a);
    require_valid(b.a);
    return std::move(b.a);
  }

  RegisterAutomaton ca_to_ura1(const CounterAutomaton& c)
  {
    return dual(ca_violations_1nra(c));
  }

  CounterAutomaton minsky_to_incrementing_fig4(const CounterAutomaton& c)
  {
    require_valid(c);
    if (c.counters > 2)
      fail(ErrorCode::PreconditionViolation, "simulated automaton needs at most 2 counters");
    if (c.alphabet.empty())
      fail(ErrorCode::PreconditionViolation, "simulated automaton has an empty alphabet");
    const auto out = c.outgoing();
    for (CaLocation q = 0; q < c.size(); ++q)
      {
        for (auto i : out[q])
          if (!c.delta[i].letter)
            fail(ErrorCode::PreconditionViolation, "epsilon transition at " + c.names[q]);
        const auto& o = out[q];
        bool ok = o.empty() || (o.size() == 1 && c.delta[o[0]].instruction.op == CounterOp::Inc);
        if (o.size() == 2)
          {
            auto i0 = c.delta[o[0]].instruction, i1 = c.delta[o[1]].instruction;
            ok = i0.counter == i1.counter
                 && ((i0.op == CounterOp::Dec && i1.op == CounterOp::Ifz)
                     || (i0.op == CounterOp::Ifz && i1.op == CounterOp::Dec));
          }
        if (!ok)
          fail(ErrorCode::PreconditionViolation, "not deterministic at " + c.names[q]);
      }

    enum : unsigned
    {
      C1 = 1,
      C2 = 2,
      Steps = 3,
      Budget = 4,
      Left = 5,
    };
    CounterAutomaton h;
    h.alphabet = c.alphabet;
    h.counters = 5;
    auto loc = [&](const std::string& name, bool acc = false) { return h.add_location(name, acc); };
    auto eps = [&](CaLocation from, CounterOp op, unsigned k, CaLocation to) {
      h.add(from, std::nullopt, {op, k}, to);
    };
    std::size_t fresh = 0;
    auto mid = [&](const std::string& role) { return loc(role + "~" + std::to_string(fresh++)); };
    // Moves counter \a k into \a into (and \a also when given), then goes to \a to.
    auto drain = [&](CaLocation at, unsigned k, unsigned into, std::optional<unsigned> also,
                     CaLocation to) {
      CaLocation m = mid("drain");
      eps(at, CounterOp::Dec, k, m);
      if (also)
        {
          CaLocation m2 = mid("drain");
          eps(m, CounterOp::Inc, into, m2);
          eps(m2, CounterOp::Inc, *also, at);
        }
      else
        eps(m, CounterOp::Inc, into, at);
      eps(at, CounterOp::Ifz, k, to);
    };

    const CaLocation repeat = loc("repeat");
    h.init = repeat;
    const CaLocation restore = loc("restore");
    const CaLocation test = loc("while");
    const CaLocation end = loc("repeat_end", true);
    const CaLocation recharge = loc("recharge");
    std::vector<CaLocation> sim(c.size()), check(c.size());
    for (CaLocation q = 0; q < c.size(); ++q)
      {
        sim[q] = loc("sim_" + c.names[q]);
        check[q] = loc("check_" + c.names[q]);
      }

    // D' := D, through C'.
    drain(repeat, Budget, Steps, std::nullopt, restore);
    drain(restore, Steps, Budget, Left, test);
    h.add(test, Letter{0}, {CounterOp::Ifz, Left}, end);
    eps(end, CounterOp::Inc, Budget, repeat);
    {
      CaLocation m = mid("start");
      eps(test, CounterOp::Dec, Left, m);
      eps(m, CounterOp::Inc, Left, sim[c.init]);
    }

    // Takes one unit of D' and puts it into counter k; an empty D' ends the
    // simulation instead.
    auto spend = [&](CaLocation from, unsigned k, CaLocation to) {
      CaLocation m = mid("spend");
      eps(from, CounterOp::Ifz, Left, recharge);
      eps(from, CounterOp::Dec, Left, m);
      eps(m, CounterOp::Inc, k, to);
    };
    for (CaLocation q = 0; q < c.size(); ++q)
      {
        if (c.accepting[q])
          continue;
        eps(check[q], CounterOp::Ifz, Left, recharge);
        CaLocation go = mid("go");
        eps(check[q], CounterOp::Dec, Left, go);
        eps(go, CounterOp::Inc, Left, sim[q]);

        // Every step of the simulated automaton is paid into C'.
        const auto& o = out[q];
        if (o.empty())
          spend(sim[q], Steps, check[q]);
        for (auto i : o)
          {
            const auto& d = c.delta[i];
            const unsigned k = d.instruction.counter;
            CaLocation m1 = mid("op");
            switch (d.instruction.op)
              {
              case CounterOp::Inc:
                spend(sim[q], k, m1);
                break;
              case CounterOp::Dec:
                {
                  CaLocation m0 = mid("op");
                  eps(sim[q], CounterOp::Dec, k, m0);
                  eps(m0, CounterOp::Inc, Left, m1);
                }
                break;
              case CounterOp::Ifz:
                eps(sim[q], CounterOp::Ifz, k, m1);
                break;
              }
            spend(m1, Steps, check[d.to]);
          }
      }

    // D' := D' + C1 + C2 + C' - 1, clearing the three.
    CaLocation r2 = loc("recharge_c2"), r3 = loc("recharge_steps"), r4 = loc("recharge_done");
    drain(recharge, C1, Left, std::nullopt, r2);
    drain(r2, C2, Left, std::nullopt, r3);
    drain(r3, Steps, Left, std::nullopt, r4);
    eps(r4, CounterOp::Dec, Left, test);

    require_valid(h);
    return h;
  }
}
