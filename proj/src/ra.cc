#include <dw/error.hh>
#include <dw/ra.hh>

#include <algorithm>
#include <unordered_map>

namespace dw
{
  std::vector<Location> TransitionFormula::targets() const
  {
    switch (kind)
      {
      case TfKind::Top:
      case TfKind::Bottom:
        return {};
      case TfKind::Test:
      case TfKind::And:
      case TfKind::Or:
        return {q1, q2};
      default:
        return {q1};
      }
  }

  bool TransitionFormula::moves() const
  {
    return kind == TfKind::X || kind == TfKind::WX || kind == TfKind::Xp || kind == TfKind::WXp;
  }

  TransitionFormula dual(const TransitionFormula& f)
  {
    TransitionFormula g = f;
    switch (f.kind)
      {
      case TfKind::And: g.kind = TfKind::Or; break;
      case TfKind::Or: g.kind = TfKind::And; break;
      case TfKind::Top: g.kind = TfKind::Bottom; break;
      case TfKind::Bottom: g.kind = TfKind::Top; break;
      case TfKind::X: g.kind = TfKind::WX; break;
      case TfKind::WX: g.kind = TfKind::X; break;
      case TfKind::Xp: g.kind = TfKind::WXp; break;
      case TfKind::WXp: g.kind = TfKind::Xp; break;
      case TfKind::Test:
      case TfKind::Store:
        break;
      }
    return g;
  }

  Location RegisterAutomaton::add(std::string name, TransitionFormula f, unsigned r, unsigned h)
  {
    names.push_back(std::move(name));
    delta.push_back(f);
    rank.push_back(r);
    height.push_back(h);
    return static_cast<Location>(delta.size() - 1);
  }

  std::optional<Location> RegisterAutomaton::find(std::string_view name) const
  {
    for (Location q = 0; q < names.size(); ++q)
      if (names[q] == name)
        return q;
    return std::nullopt;
  }

  std::vector<RaViolation> validate(const RegisterAutomaton& a)
  {
    std::vector<RaViolation> out;
    const auto n = static_cast<Location>(a.size());
    if (a.rank.size() != n || a.height.size() != n || a.names.size() != n)
      {
        out.push_back({RaViolation::Target, 0, 0, "rank/height/name tables do not match"});
        return out;
      }
    if (n == 0 || a.init >= n)
      out.push_back({RaViolation::Init, a.init, a.init, "initial location missing"});
    for (Location q = 0; q < n; ++q)
      {
        const auto& f = a.delta[q];
        bool bad_target = false;
        for (auto t : f.targets())
          if (t >= n)
            {
              out.push_back({RaViolation::Target, q, t, "unknown target location"});
              bad_target = true;
            }
        if ((f.kind == TfKind::Store || (f.kind == TfKind::Test && f.test == TestKind::Reg))
            && (f.arg < 1 || f.arg > a.registers))
          out.push_back({RaViolation::Register, q, q,
                         "register " + std::to_string(f.arg) + " out of range"});
        if (f.kind == TfKind::Test && f.test == TestKind::Letter && f.arg >= a.alphabet.size())
          out.push_back({RaViolation::Letter, q, q, "letter out of range"});
        if (bad_target)
          continue;
        for (auto t : f.targets())
          {
            if (a.rank[t] > a.rank[q])
              out.push_back({RaViolation::Rank, q, t,
                             "rank increases from " + a.names[q] + " to " + a.names[t]});
            if (!f.moves() && a.height[t] >= a.height[q])
              out.push_back({RaViolation::Height, q, t,
                             "height does not decrease from " + a.names[q] + " to " + a.names[t]});
          }
      }
    return out;
  }

  void require_valid(const RegisterAutomaton& a)
  {
    auto v = validate(a);
    if (!v.empty())
      fail(ErrorCode::InvalidAutomaton, v.front().message);
  }

  RaClass classify(const RegisterAutomaton& a)
  {
    RaClass c;
    for (const auto& f : a.delta)
      {
        if (f.kind == TfKind::Xp || f.kind == TfKind::WXp
            || (f.kind == TfKind::Test && f.test == TestKind::Beg))
          c.one_way = false;
        if (f.kind == TfKind::And)
          c.nondeterministic = false;
        if (f.kind == TfKind::Or)
          c.universal = false;
      }
    return c;
  }

  void recompute_heights(RegisterAutomaton& a)
  {
    const std::size_t n = a.size();
    enum Mark : std::uint8_t
    {
      White,
      Grey,
      Black
    };
    std::vector<Mark> mark(n, White);
    a.height.assign(n, 0);
    for (Location root = 0; root < n; ++root)
      {
        if (mark[root] != White)
          continue;
        std::vector<std::pair<Location, std::size_t>> stack{{root, 0}};
        mark[root] = Grey;
        while (!stack.empty())
          {
            auto& [q, k] = stack.back();
            const auto& f = a.delta[q];
            auto ts = f.moves() ? std::vector<Location>{} : f.targets();
            if (k < ts.size())
              {
                Location t = ts[k++];
                if (mark[t] == Grey)
                  fail(ErrorCode::InvalidAutomaton, "cycle of non-moving transitions through "
                                                        + a.names[t]);
                if (mark[t] == White)
                  {
                    mark[t] = Grey;
                    stack.emplace_back(t, 0);
                  }
                continue;
              }
            unsigned h = 0;
            for (auto t : ts)
              h = std::max(h, a.height[t] + 1);
            a.height[q] = h;
            mark[q] = Black;
            stack.pop_back();
          }
      }
  }

  RegisterAutomaton dual(const RegisterAutomaton& a)
  {
    RegisterAutomaton d = a;
    for (Location q = 0; q < a.size(); ++q)
      {
        d.delta[q] = dual(a.delta[q]);
        d.rank[q] = a.rank[q] + 1;
      }
    return d;
  }

  RegisterAutomaton complement(const RegisterAutomaton& a) { return dual(a); }

  namespace
  {
    struct StateKey
    {
      std::size_t position;
      Location location;
      std::vector<std::int32_t> regs;
      bool operator==(const StateKey&) const = default;
    };

    struct StateKeyHash
    {
      std::size_t operator()(const StateKey& k) const
      {
        std::size_t h = k.position * 1000003u ^ k.location;
        for (auto r : k.regs)
          h = h * 31 + static_cast<std::size_t>(r + 1);
        return h;
      }
    };

    bool holds(const RegisterAutomaton& a, const DataWord& w, const RaState& s,
               const TransitionFormula& f)
    {
      switch (f.test)
        {
        case TestKind::Letter: return w.letter(s.position) == f.arg;
        case TestKind::Beg: return s.position == 0;
        case TestKind::End: return s.position + 1 == w.length();
        case TestKind::Reg:
          {
            auto c = s.valuation.get(f.arg);
            return c && *c == w.class_of(s.position);
          }
        }
      (void)a;
      return false;
    }
  }

  AcceptanceGame acceptance_game(const RegisterAutomaton& a, const DataWord& w,
                                 std::size_t budget)
  {
    require_valid(a);
    AcceptanceGame out;
    std::unordered_map<StateKey, std::size_t, StateKeyHash> index;
    std::vector<std::size_t> work;

    auto intern = [&](RaState s) -> std::size_t {
      StateKey key{s.position, s.location, s.valuation.raw()};
      auto it = index.find(key);
      if (it != index.end())
        return it->second;
      if (out.states.size() >= budget)
        fail(ErrorCode::StateSpaceBudgetExceeded,
             "acceptance game exceeds " + std::to_string(budget) + " positions");
      std::size_t id = out.game.add(Player::P1, a.rank[s.location]);
      index.emplace(std::move(key), id);
      out.states.push_back(std::move(s));
      work.push_back(id);
      return id;
    };

    out.initial = intern(RaState{0, a.init, RegisterValuation(a.registers)});
    while (!work.empty())
      {
        std::size_t id = work.back();
        work.pop_back();
        RaState s = out.states[id];
        const auto& f = a.delta[s.location];
        Player owner = Player::P1;
        std::vector<RaState> next;
        auto at = [&](std::size_t i, Location q) { return RaState{i, q, s.valuation}; };
        const bool last = s.position + 1 == w.length();
        switch (f.kind)
          {
          case TfKind::Test:
            next.push_back(at(s.position, holds(a, w, s, f) ? f.q1 : f.q2));
            break;
          case TfKind::Store:
            {
              RaState t = at(s.position, f.q1);
              t.valuation.set(f.arg, w.class_of(s.position));
              next.push_back(std::move(t));
              break;
            }
          case TfKind::And:
            owner = Player::P2;
            next.push_back(at(s.position, f.q1));
            next.push_back(at(s.position, f.q2));
            break;
          case TfKind::Or:
            next.push_back(at(s.position, f.q1));
            next.push_back(at(s.position, f.q2));
            break;
          case TfKind::Top: owner = Player::P2; break;
          case TfKind::Bottom: break;
          case TfKind::X:
          case TfKind::WX:
            if (!last)
              next.push_back(at(s.position + 1, f.q1));
            else if (f.kind == TfKind::WX)
              owner = Player::P2;
            break;
          case TfKind::Xp:
          case TfKind::WXp:
            if (s.position > 0)
              next.push_back(at(s.position - 1, f.q1));
            else if (f.kind == TfKind::WXp)
              owner = Player::P2;
            break;
          }
        out.game.owner[id] = owner;
        std::vector<std::size_t> succ;
        for (auto& t : next)
          succ.push_back(intern(std::move(t)));
        if (succ.size() == 2 && succ[0] == succ[1])
          succ.pop_back();
        out.game.succ[id] = std::move(succ);
      }
    return out;
  }

  bool accepts(const RegisterAutomaton& a, const DataWord& w, std::size_t budget)
  {
    auto g = acceptance_game(a, w, budget);
    return solve(g.game, g.initial).winner == Player::P1;
  }

  std::string format_state(const RegisterAutomaton& a, const RaState& s)
  {
    std::string out = "<" + std::to_string(s.position) + ", " + a.names.at(s.location) + ", ";
    bool any = false;
    std::string regs;
    for (unsigned r = 1; r <= s.valuation.size(); ++r)
      if (auto c = s.valuation.get(r))
        {
          if (any)
            regs += ", ";
          any = true;
          regs += std::to_string(r) + "->" + std::to_string(c->index);
        }
    out += any ? "{" + regs + "}" : "-";
    return out + ">";
  }
}
