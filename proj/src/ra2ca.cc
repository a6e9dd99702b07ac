#include <dw/error.hh>
#include <dw/ra2ca.hh>

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>

namespace dw
{
  namespace
  {
    LocationSet bit(Location q) { return LocationSet{1} << q; }

    template <class F>
    void for_each_bit(LocationSet s, F f)
    {
      for (Location base = 0; s; base += 64, s >>= 64)
        for (auto low = static_cast<std::uint64_t>(s); low; low &= low - 1)
          f(base + static_cast<Location>(std::countr_zero(low)));
    }

    void require_supported(const RegisterAutomaton& a)
    {
      require_valid(a);
      if (!classify(a).one_way)
        fail(ErrorCode::ClassMismatch, "automaton is not one-way");
      if (a.registers > 1)
        fail(ErrorCode::ClassMismatch, "automaton has more than one register");
      if (a.size() > max_locations)
        fail(ErrorCode::PreconditionViolation,
             "more than " + std::to_string(max_locations) + " locations");
      for (const auto& f : a.delta)
        if (f.kind == TfKind::Test && f.test == TestKind::Beg)
          fail(ErrorCode::ClassMismatch, "beg tests are not supported");
    }
  }

  SuccTable::SuccTable(const RegisterAutomaton& a) : a_(&a) { require_supported(a); }

  const std::set<SuccPair>& SuccTable::operator()(Letter a, bool at_end, bool holds_current,
                                                  Location q) const
  {
    auto key = std::make_tuple(a, at_end, holds_current, q);
    if (auto it = memo_.find(key); it != memo_.end())
      return it->second;
    const auto& f = a_->delta.at(q);
    std::set<SuccPair> out;
    switch (f.kind)
      {
      case TfKind::Test:
        {
          bool holds = f.test == TestKind::Letter ? a == f.arg
                       : f.test == TestKind::End  ? at_end
                                                  : holds_current;
          out = (*this)(a, at_end, holds_current, holds ? f.q1 : f.q2);
          break;
        }
      case TfKind::Store: out = (*this)(a, at_end, true, f.q1); break;
      case TfKind::And:
        {
          const auto& l = (*this)(a, at_end, holds_current, f.q1);
          const auto& r = (*this)(a, at_end, holds_current, f.q2);
          for (const auto& x : l)
            for (const auto& y : r)
              out.insert({x.keep | y.keep, x.current | y.current});
          break;
        }
      case TfKind::Or:
        out = (*this)(a, at_end, holds_current, f.q1);
        for (const auto& y : (*this)(a, at_end, holds_current, f.q2))
          out.insert(y);
        break;
      case TfKind::Top: out.insert({0, 0}); break;
      case TfKind::Bottom: break;
      case TfKind::X:
      case TfKind::WX:
        if (!at_end)
          out.insert(holds_current ? SuccPair{0, bit(f.q1)} : SuccPair{bit(f.q1), 0});
        else if (f.kind == TfKind::WX)
          out.insert({0, 0});
        break;
      default: fail(ErrorCode::ClassMismatch, "automaton is not one-way");
      }
    return memo_.emplace(key, std::move(out)).first->second;
  }

  std::set<SuccPair> succ_table(const RegisterAutomaton& a, Letter letter, bool at_end,
                                bool holds_current, Location q)
  {
    SuccTable t(a);
    return t(letter, at_end, holds_current, q);
  }

  void AbstractSet::normalise()
  {
    std::erase_if(counts, [](const auto& kv) { return kv.second == 0; });
  }

  unsigned AbstractSet::max_count() const
  {
    unsigned m = 0;
    for (const auto& [s, n] : counts)
      m = std::max(m, n);
    return m;
  }

  AbstractSet abstract_set(const RegisterAutomaton& a, const DataWord& w, std::size_t i,
                           const std::vector<RaState>& states)
  {
    AbstractSet h;
    if (states.empty())
      return h;
    if (a.registers > 1)
      fail(ErrorCode::ClassMismatch, "automaton has more than one register");
    h.none = false;
    h.letter = w.letter(i);
    h.at_end = i + 1 == w.length();
    const ClassId here = w.class_of(i);
    std::map<std::uint32_t, LocationSet> by_class;
    for (const auto& s : states)
      {
        if (s.position != i)
          fail(ErrorCode::PreconditionViolation, "states are not at one position");
        auto c = a.registers ? s.valuation.get(1) : std::nullopt;
        if (!c)
          h.undefined |= bit(s.location);
        else if (*c == here)
          h.with_current |= bit(s.location);
        else
          by_class[c->index] |= bit(s.location);
      }
    for (const auto& [c, s] : by_class)
      ++h.counts[s];
    return h;
  }

  namespace
  {
    /// Unions of one choice from the big steps of every location in \a s.
    std::set<SuccPair> map_unions(const SuccTable& t, Letter a, bool at_end, bool holds_current,
                                  LocationSet s)
    {
      std::set<SuccPair> acc{{0, 0}};
      for_each_bit(s, [&](Location q) {
        std::set<SuccPair> next;
        for (const auto& x : acc)
          for (const auto& y : t(a, at_end, holds_current, q))
            next.insert({x.keep | y.keep, x.current | y.current});
        acc = std::move(next);
      });
      return acc;
    }

    struct Choice
    {
      LocationSet current;
      std::map<LocationSet, unsigned> counts;
    };

    /// Every way of choosing a map for each counted class: the union of
    /// current-class targets and the counts of the kept-class target sets.
    void choose_counted(const SuccTable& t, const AbstractSet& h,
                        std::vector<std::pair<LocationSet, unsigned>>::const_iterator it,
                        std::vector<std::pair<LocationSet, unsigned>>::const_iterator end,
                        Choice acc, std::vector<Choice>& out)
    {
      if (it == end)
        {
          out.push_back(std::move(acc));
          return;
        }
      auto options_set = map_unions(t, h.letter, h.at_end, false, it->first);
      std::vector<SuccPair> options(options_set.begin(), options_set.end());
      const unsigned n = it->second;
      // Multisets of size n over options, as nondecreasing index sequences.
      std::function<void(std::size_t, unsigned, Choice)> pick = [&](std::size_t from, unsigned left,
                                                                     Choice c) {
        if (left == 0)
          {
            choose_counted(t, h, std::next(it), end, std::move(c), out);
            return;
          }
        for (std::size_t k = from; k < options.size(); ++k)
          {
            Choice d = c;
            d.current |= options[k].current;
            if (options[k].keep)
              ++d.counts[options[k].keep];
            pick(k, left - 1, std::move(d));
          }
      };
      pick(0, n, std::move(acc));
    }

    bool within(const std::map<LocationSet, unsigned>& counts, unsigned cap)
    {
      for (const auto& [s, n] : counts)
        if (n > cap)
          return false;
      return true;
    }
  }

  std::vector<AbstractSet> big_step_successors(const RegisterAutomaton& a, const AbstractSet& from,
                                               unsigned cap)
  {
    if (from.none)
      fail(ErrorCode::PreconditionViolation, "big step from the empty abstract set");
    if (from.max_count() > cap)
      fail(ErrorCode::CapExceeded, "count " + std::to_string(from.max_count()) + " exceeds cap "
                                     + std::to_string(cap));
    SuccTable t(a);
    auto eq = map_unions(t, from.letter, from.at_end, true, from.with_current);
    auto un = map_unions(t, from.letter, from.at_end, false, from.undefined);
    std::vector<std::pair<LocationSet, unsigned>> groups;
    for (const auto& [s, n] : from.counts)
      if (n > 0)
        groups.emplace_back(s, n);
    std::vector<Choice> counted;
    choose_counted(t, from, groups.cbegin(), groups.cend(), Choice{0, {}}, counted);

    std::set<AbstractSet> out;
    for (const auto& e : eq)
      for (const auto& u : un)
        for (const auto& c : counted)
          {
            const LocationSet next_undefined = u.keep;
            const LocationSet dagger = e.current | u.current | c.current;
            auto counts = c.counts;
            if (dagger)
              ++counts[dagger];
            if (next_undefined == 0 && counts.empty())
              out.insert(AbstractSet::empty());
            for (Letter b = 0; b < a.alphabet.size(); ++b)
              for (bool end : {false, true})
                {
                  AbstractSet h;
                  h.none = false;
                  h.letter = b;
                  h.at_end = end;
                  h.undefined = next_undefined;
                  if ((next_undefined || !counts.empty()) && within(counts, cap))
                    {
                      h.counts = counts;
                      out.insert(h);
                    }
                  for (const auto& [s, n] : counts)
                    {
                      AbstractSet g = h;
                      g.with_current = s;
                      g.counts = counts;
                      --g.counts[s];
                      g.normalise();
                      if (within(g.counts, cap))
                        out.insert(std::move(g));
                    }
                }
          }
    return {out.begin(), out.end()};
  }

  bool big_step(const RegisterAutomaton& a, const AbstractSet& from, const AbstractSet& to)
  {
    auto target = to;
    target.normalise();
    auto all = big_step_successors(a, from, std::max(from.max_count(), target.max_count()));
    return std::find(all.begin(), all.end(), target) != all.end();
  }

  bool subsumed(const AbstractSet& lower, const AbstractSet& upper)
  {
    if (lower.none)
      return true;
    if (upper.none)
      return false;
    if (lower.letter != upper.letter || lower.at_end != upper.at_end)
      return false;
    if ((lower.with_current & ~upper.with_current) || (lower.undefined & ~upper.undefined))
      return false;
    std::vector<LocationSet> left, right;
    for (const auto& [s, n] : lower.counts)
      left.insert(left.end(), n, s);
    for (const auto& [s, n] : upper.counts)
      right.insert(right.end(), n, s);
    if (left.size() > right.size())
      return false;
    // Bipartite matching by augmenting paths.
    std::vector<std::ptrdiff_t> owner(right.size(), -1);
    for (std::size_t l = 0; l < left.size(); ++l)
      {
        std::vector<bool> seen(right.size(), false);
        std::function<bool(std::size_t)> augment = [&](std::size_t x) {
          for (std::size_t r = 0; r < right.size(); ++r)
            if (!seen[r] && (left[x] & ~right[r]) == 0)
              {
                seen[r] = true;
                if (owner[r] < 0 || augment(static_cast<std::size_t>(owner[r])))
                  {
                    owner[r] = static_cast<std::ptrdiff_t>(x);
                    return true;
                  }
              }
          return false;
        };
        if (!augment(l))
          return false;
      }
    return true;
  }

  namespace
  {
    /// Location set with a tag per member.  In stored sets the tag marks
    /// pending odd-rank obligations; in freshly computed targets it marks
    /// locations inheriting such an obligation at the same rank.
    struct TSet
    {
      LocationSet all = 0;
      LocationSet mark = 0;

      bool empty() const { return all == 0; }
      auto operator<=>(const TSet&) const = default;
    };

    TSet operator|(TSet x, TSet y) { return {x.all | y.all, x.mark | y.mark}; }

    struct TPair
    {
      TSet keep, current;
      bool marked() const { return keep.mark || current.mark; }
      auto operator<=>(const TPair&) const = default;
    };

    struct Item
    {
      Location q;
      bool tagged;
      bool holds_current;
    };

    struct Header
    {
      Letter letter;
      bool at_end;
      TSet with_current, undefined;
      auto operator<=>(const Header&) const = default;
    };

    constexpr unsigned nop_counter = 1;

    class Builder
    {
    public:
      Builder(const RegisterAutomaton& a, bool infinite)
        : a_(a), succ_(a), infinite_(infinite), same_rank_(a.size(), 0)
      {
        for (Location q = 0; q < a.size(); ++q)
          {
            if (a.rank[q] % 2 == 1)
              odd_ |= bit(q);
            for (Location p = 0; p < a.size(); ++p)
              if (a.rank[p] == a.rank[q])
                same_rank_[q] |= bit(p);
          }
        ends_ = infinite ? std::vector<bool>{false} : std::vector<bool>{false, true};
      }

      Ra2Ca run()
      {
        explore();
        emit();
        Ra2Ca out;
        out.report.locations = ca_.size();
        out.report.counters = ca_.counters;
        out.report.set_counters = sets_.size();
        out.report.aux_counters = aux_.size();
        out.report.headers = headers_.size();
        out.report.transitions = ca_.delta.size();
        out.report.succ_entries = succ_.entries();
        out.automaton = std::move(ca_);
        return out;
      }

    private:
      std::vector<Item> items(TSet s, bool holds_current) const
      {
        std::vector<Item> out;
        for_each_bit(s.all, [&](Location q) { out.push_back({q, (s.mark & bit(q)) != 0, holds_current}); });
        return out;
      }

      TPair tagged(const Item& it, const SuccPair& p) const
      {
        TPair r{{p.keep, 0}, {p.current, 0}};
        if (it.tagged)
          {
            r.keep.mark = p.keep & same_rank_[it.q];
            r.current.mark = p.current & same_rank_[it.q];
          }
        return r;
      }

      std::set<TPair> unions(Letter a, bool at_end, const std::vector<Item>& its) const
      {
        std::set<TPair> acc{TPair{}};
        for (const auto& it : its)
          {
            std::set<TPair> next;
            for (const auto& x : acc)
              for (const auto& p : succ_(a, at_end, it.holds_current, it.q))
                {
                  auto y = tagged(it, p);
                  next.insert({x.keep | y.keep, x.current | y.current});
                }
            acc = std::move(next);
          }
        return acc;
      }

      /// Tags after a big step: inherited obligations if any, else every
      /// odd-rank location starts a fresh obligation set.
      TSet retag(TSet s, bool fresh) const
      {
        if (!infinite_)
          return {s.all, 0};
        return fresh ? TSet{s.all, s.all & odd_} : s;
      }

      const std::set<TPair>& drain(Letter a, bool at_end, TSet s)
      {
        auto key = std::make_tuple(a, at_end, s);
        auto it = drains_.find(key);
        if (it == drains_.end())
          it = drains_.emplace(key, unions(a, at_end, items(s, false))).first;
        return it->second;
      }

      const std::set<TPair>& firsts(const Header& h)
      {
        auto it = firsts_.find(h);
        if (it == firsts_.end())
          {
            auto its = items(h.with_current, true);
            auto more = items(h.undefined, false);
            its.insert(its.end(), more.begin(), more.end());
            it = firsts_.emplace(h, unions(h.letter, h.at_end, its)).first;
          }
        return it->second;
      }

      /// Aux pairs that a drain can produce at a position with letter a.
      std::vector<TPair> group_pairs(Letter a, bool at_end)
      {
        std::set<TPair> out;
        for (const auto& s : sets_)
          for (const auto& p : drain(a, at_end, s))
            if (!p.keep.empty() || !p.current.empty())
              out.insert(p);
        return {out.begin(), out.end()};
      }

      static bool gathers(const TPair& p) { return !p.current.empty() || p.marked(); }

      /// Abstract reachability: which location sets ever get a counter and
      /// which headers occur, ignoring counter values.
      void explore()
      {
        TSet start{bit(a_.init), infinite_ && (odd_ & bit(a_.init)) ? bit(a_.init) : 0};
        for (Letter b = 0; b < a_.alphabet.size(); ++b)
          for (bool e : ends_)
            headers_.insert({b, e, {}, start});
        for (bool changed = true; changed;)
          {
            changed = false;
            std::vector<Header> hs(headers_.begin(), headers_.end());
            for (const auto& h : hs)
              {
                auto pairs = group_pairs(h.letter, h.at_end);
                for (const auto& p : pairs)
                  aux_.insert(p);
                for (const auto& first : firsts(h))
                  {
                    std::set<std::pair<TSet, bool>> gathered{{first.current, first.marked()}};
                    for (const auto& p : pairs)
                      if (gathers(p))
                        {
                          auto copy = gathered;
                          for (const auto& [d, m] : copy)
                            gathered.insert({d | p.current, m || p.marked()});
                        }
                    for (const auto& [dagger, mark] : gathered)
                      {
                        const bool fresh = infinite_ && !mark;
                        if (!dagger.empty())
                          changed |= sets_.insert(retag(dagger, fresh)).second;
                        for (const auto& p : pairs)
                          if (!p.keep.empty())
                            changed |= sets_.insert(retag(p.keep, fresh)).second;
                        if (h.at_end)
                          continue;
                        const TSet next = retag(first.keep, fresh);
                        std::vector<TSet> snapshot(sets_.begin(), sets_.end());
                        for (Letter b = 0; b < a_.alphabet.size(); ++b)
                          for (bool e : ends_)
                            {
                              changed |= headers_.insert({b, e, {}, next}).second;
                              for (const auto& s : snapshot)
                                changed |= headers_.insert({b, e, s, next}).second;
                            }
                      }
                  }
              }
          }
        unsigned next = nop_counter + 1;
        for (const auto& s : sets_)
          set_counter_[s] = next++;
        for (const auto& p : aux_)
          aux_counter_[p] = next++;
        ca_.counters = next - 1;
      }

      // -- emission ---------------------------------------------------------

      CaLocation fresh_location(const std::string& prefix, bool accepting = false)
      {
        return ca_.add_location(prefix + std::to_string(ca_.size()), accepting);
      }

      void nop(CaLocation from, CaLocation to, std::optional<Letter> letter = std::nullopt)
      {
        ca_.add(from, letter, {CounterOp::Ifz, nop_counter}, to);
      }

      void op(CaLocation from, CounterOp o, unsigned counter, CaLocation to,
              std::optional<Letter> letter = std::nullopt)
      {
        ca_.add(from, letter, {o, counter}, to);
      }

      CaLocation header(const Header& h)
      {
        if (!headers_.count(h))
          fail(ErrorCode::PreconditionViolation, "header outside the explored set");
        auto [it, added] = header_loc_.try_emplace(h, 0);
        if (added)
          {
            it->second = fresh_location("H");
            pending_.push_back(h);
          }
        return it->second;
      }

      CaLocation marked_header(const Header& h)
      {
        auto it = marked_loc_.find(h);
        if (it != marked_loc_.end())
          return it->second;
        CaLocation m = fresh_location("R", true);
        marked_loc_.emplace(h, m);
        nop(m, header(h));
        return m;
      }

      unsigned set_counter(TSet s) const
      {
        auto it = set_counter_.find(s);
        if (it == set_counter_.end())
          fail(ErrorCode::PreconditionViolation, "location set without a counter");
        return it->second;
      }

      /// Choice fan: one layer per item, nop edges; returns the last layer.
      std::map<TPair, CaLocation> chain(CaLocation from, Letter a, bool at_end,
                                        const std::vector<Item>& its)
      {
        std::map<TPair, CaLocation> layer{{TPair{}, from}};
        for (const auto& it : its)
          {
            std::map<TPair, CaLocation> next;
            for (const auto& [acc, loc] : layer)
              for (const auto& p : succ_(a, at_end, it.holds_current, it.q))
                {
                  auto y = tagged(it, p);
                  TPair t{acc.keep | y.keep, acc.current | y.current};
                  auto [n, added] = next.try_emplace(t, 0);
                  if (added)
                    n->second = fresh_location("c");
                  nop(loc, n->second);
                }
            layer = std::move(next);
          }
        return layer;
      }

      using GatherKey = std::tuple<Letter, bool, TSet, TSet, bool, std::size_t>;
      using RefillKey = std::tuple<Letter, bool, TSet, bool, std::size_t>;

      CaLocation gather(Letter a, bool at_end, TSet next_undefined, TSet dagger, bool mark,
                        std::size_t j)
      {
        GatherKey key{a, at_end, next_undefined, dagger, mark, j};
        if (auto it = gather_loc_.find(key); it != gather_loc_.end())
          return it->second;
        CaLocation here = fresh_location("G");
        gather_loc_.emplace(key, here);
        const auto& pairs = gather_pairs_.at({a, at_end});
        if (j == pairs.size())
          {
            const bool fresh = infinite_ && !mark;
            CaLocation next = refill(a, at_end, retag(next_undefined, fresh), fresh, 0);
            if (dagger.empty())
              nop(here, next);
            else
              op(here, CounterOp::Inc, set_counter(retag(dagger, fresh)), next);
            return here;
          }
        const auto& p = pairs[j];
        const unsigned c = aux_counter_.at(p);
        op(here, CounterOp::Ifz, c, gather(a, at_end, next_undefined, dagger, mark, j + 1));
        CaLocation mid = fresh_location("g");
        op(here, CounterOp::Dec, c, mid);
        op(mid, CounterOp::Inc, c,
           gather(a, at_end, next_undefined, dagger | p.current, mark || p.marked(), j + 1));
        return here;
      }

      CaLocation refill(Letter a, bool at_end, TSet next_undefined, bool fresh, std::size_t j)
      {
        RefillKey key{a, at_end, next_undefined, fresh, j};
        if (auto it = refill_loc_.find(key); it != refill_loc_.end())
          return it->second;
        CaLocation here = fresh_location("F");
        refill_loc_.emplace(key, here);
        const auto& pairs = group_pairs_.at({a, at_end});
        if (j == pairs.size())
          {
            done(here, a, at_end, next_undefined, fresh);
            return here;
          }
        const auto& p = pairs[j];
        const unsigned c = aux_counter_.at(p);
        op(here, CounterOp::Ifz, c, refill(a, at_end, next_undefined, fresh, j + 1));
        CaLocation mid = fresh_location("f");
        op(here, CounterOp::Dec, c, mid);
        if (p.keep.empty())
          nop(mid, here);
        else
          op(mid, CounterOp::Inc, set_counter(retag(p.keep, fresh)), here);
        return here;
      }

      /// End of a big step: read the letter of the finished position and
      /// move to the next header, or stop when nothing remains.
      void done(CaLocation here, Letter a, bool at_end, TSet next_undefined, bool fresh)
      {
        if (!at_end)
          for (Letter b = 0; b < a_.alphabet.size(); ++b)
            for (bool e : ends_)
              {
                auto target = [&](TSet eq) {
                  Header h{b, e, eq, next_undefined};
                  return infinite_ && fresh ? marked_header(h) : header(h);
                };
                nop(here, target({}), a);
                for (const auto& [s, c] : set_counter_)
                  op(here, CounterOp::Dec, c, target(s), a);
              }
        if (next_undefined.empty())
          nop(here, all_zero(a, at_end));
      }

      /// Checks every set counter for zero, then reads the letter and stops.
      CaLocation all_zero(Letter a, bool at_end)
      {
        auto [it, added] = zero_loc_.try_emplace({a, at_end}, 0);
        if (!added)
          return it->second;
        CaLocation z = it->second = fresh_location("z");
        for (const auto& [s, c] : set_counter_)
          {
            CaLocation n = fresh_location("z");
            op(z, CounterOp::Ifz, c, n);
            z = n;
          }
        nop(z, infinite_ ? accept_any_ : at_end ? accept_end_ : need_more_, a);
        return it->second;
      }

      void emit_header(const Header& h)
      {
        const Letter a = h.letter;
        CaLocation d = header_loc_.at(h);
        for (const auto& [s, c] : set_counter_)
          {
            CaLocation next = fresh_location("D");
            op(d, CounterOp::Ifz, c, next);
            const auto& results = drain(a, h.at_end, s);
            if (!results.empty())
              {
                CaLocation taken = fresh_location("d");
                op(d, CounterOp::Dec, c, taken);
                for (const auto& [p, end] : chain(taken, a, h.at_end, items(s, false)))
                  {
                    if (p.keep.empty() && p.current.empty())
                      nop(end, d);
                    else
                      op(end, CounterOp::Inc, aux_counter_.at(p), d);
                  }
              }
            d = next;
          }
        auto its = items(h.with_current, true);
        auto more = items(h.undefined, false);
        its.insert(its.end(), more.begin(), more.end());
        for (const auto& [p, end] : chain(d, a, h.at_end, its))
          nop(end, gather(a, h.at_end, p.keep, p.current, p.marked(), 0));
      }

      void emit()
      {
        ca_.alphabet = a_.alphabet;
        CaLocation start = ca_.add_location("start");
        ca_.init = start;
        accept_end_ = ca_.add_location("accept_end", true);
        need_more_ = ca_.add_location("need_more");
        accept_any_ = ca_.add_location("accept_any", true);
        for (Letter b = 0; b < a_.alphabet.size(); ++b)
          {
            nop(need_more_, accept_any_, b);
            nop(accept_any_, accept_any_, b);
          }
        for (Letter b = 0; b < a_.alphabet.size(); ++b)
          for (bool e : ends_)
            for (const auto& p : group_pairs(b, e))
              {
                group_pairs_[{b, e}].push_back(p);
                if (gathers(p))
                  gather_pairs_[{b, e}].push_back(p);
              }
        for (Letter b = 0; b < a_.alphabet.size(); ++b)
          for (bool e : ends_)
            {
              group_pairs_[{b, e}];
              gather_pairs_[{b, e}];
            }
        TSet init{bit(a_.init), infinite_ && (odd_ & bit(a_.init)) ? bit(a_.init) : 0};
        for (Letter b = 0; b < a_.alphabet.size(); ++b)
          for (bool e : ends_)
            nop(start, header({b, e, {}, init}));
        while (!pending_.empty())
          {
            Header h = pending_.back();
            pending_.pop_back();
            emit_header(h);
          }
      }

      const RegisterAutomaton& a_;
      SuccTable succ_;
      bool infinite_;
      std::vector<LocationSet> same_rank_;
      LocationSet odd_ = 0;
      std::vector<bool> ends_;

      std::set<Header> headers_;
      std::set<TSet> sets_;
      std::set<TPair> aux_;
      std::map<std::tuple<Letter, bool, TSet>, std::set<TPair>> drains_;
      std::map<Header, std::set<TPair>> firsts_;

      CounterAutomaton ca_;
      std::map<TSet, unsigned> set_counter_;
      std::map<TPair, unsigned> aux_counter_;
      std::map<std::pair<Letter, bool>, std::vector<TPair>> group_pairs_, gather_pairs_;
      std::map<Header, CaLocation> header_loc_, marked_loc_;
      std::map<GatherKey, CaLocation> gather_loc_;
      std::map<RefillKey, CaLocation> refill_loc_;
      std::map<std::pair<Letter, bool>, CaLocation> zero_loc_;
      std::vector<Header> pending_;
      CaLocation accept_end_ = 0, need_more_ = 0, accept_any_ = 0;
    };
  }

  Ra2Ca build_ca_finite_detailed(const RegisterAutomaton& a)
  {
    require_supported(a);
    return Builder(a, false).run();
  }

  CounterAutomaton build_ca_finite(const RegisterAutomaton& a)
  {
    return build_ca_finite_detailed(a).automaton;
  }

  Ra2Ca build_ca_infinite_detailed(const RegisterAutomaton& a)
  {
    require_supported(a);
    return Builder(a, true).run();
  }

  CounterAutomaton build_ca_infinite(const RegisterAutomaton& a)
  {
    return build_ca_infinite_detailed(a).automaton;
  }

  std::string format_report(const Ra2CaReport& r)
  {
    std::ostringstream out;
    out << "locations: " << r.locations << "\ncounters: " << r.counters
        << "\nset counters: " << r.set_counters << "\naux counters: " << r.aux_counters
        << "\nheaders: " << r.headers << "\ntransitions: " << r.transitions
        << "\nsucc entries: " << r.succ_entries << '\n';
    return out.str();
  }

  std::string format_abstract_set(const RegisterAutomaton& a, const AbstractSet& h)
  {
    if (h.none)
      return "empty";
    auto names = [&](LocationSet s) {
      std::string out = "{";
      bool first = true;
      for_each_bit(s, [&](Location q) {
        out += (first ? "" : ",") + a.names.at(q);
        first = false;
      });
      return out + "}";
    };
    std::ostringstream out;
    out << '<' << a.alphabet.symbol(h.letter) << ", " << (h.at_end ? "T" : "F") << ", "
        << names(h.with_current) << ", " << names(h.undefined) << ", [";
    bool first = true;
    for (const auto& [s, n] : h.counts)
      {
        out << (first ? "" : " ") << names(s) << ':' << n;
        first = false;
      }
    out << "]>";
    return out.str();
  }
}
