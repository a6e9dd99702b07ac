#include <dw/error.hh>
#include <dw/nra_empty.hh>

#include "scc.hh"

#include <deque>
#include <map>
#include <sstream>

namespace dw
{
  std::vector<unsigned> AbstractState::current_registers() const
  {
    std::vector<unsigned> out;
    if (cur < 0)
      return out;
    for (unsigned r = 0; r < cls.size(); ++r)
      if (cls[r] == cur)
        out.push_back(r + 1);
    return out;
  }

  std::vector<std::pair<unsigned, unsigned>> AbstractState::equalities() const
  {
    std::vector<std::pair<unsigned, unsigned>> out;
    for (unsigned r = 0; r < cls.size(); ++r)
      for (unsigned s = 0; s < cls.size(); ++s)
        if (cls[r] >= 0 && cls[r] == cls[s])
          out.emplace_back(r + 1, s + 1);
    return out;
  }

  namespace
  {
    /// Relabels classes by first occurrence; \a cur follows along (and is
    /// dropped when no register holds it any more).
    void canonicalise(AbstractState& h)
    {
      std::map<int, std::int8_t> rename;
      for (auto& c : h.cls)
        if (c >= 0)
          {
            auto [it, fresh] = rename.emplace(c, static_cast<std::int8_t>(rename.size()));
            c = it->second;
          }
      if (h.cur >= 0)
        {
          auto it = rename.find(h.cur);
          h.cur = it == rename.end() ? std::int8_t(-1) : it->second;
        }
    }

    void require_one_way_nondeterministic(const RegisterAutomaton& a)
    {
      require_valid(a);
      auto c = classify(a);
      if (!c.one_way || !c.nondeterministic)
        fail(ErrorCode::ClassMismatch, "abstract emptiness needs a one-way nondeterministic automaton");
      if (a.registers > 60)
        fail(ErrorCode::PreconditionViolation, "too many registers");
    }

    std::int8_t label_count(const AbstractState& h)
    {
      std::int8_t n = 0;
      for (auto c : h.cls)
        n = std::max<std::int8_t>(n, static_cast<std::int8_t>(c + 1));
      return n;
    }

    std::vector<AbstractState> successors(const RegisterAutomaton& a, const AbstractState& h)
    {
      const auto& f = a.delta.at(h.location);
      std::vector<AbstractState> out;
      auto at = [&](Location q) {
        AbstractState g = h;
        g.location = q;
        return g;
      };
      switch (f.kind)
        {
        case TfKind::Test:
          {
            bool holds = false;
            switch (f.test)
              {
              case TestKind::Letter: holds = h.letter == f.arg; break;
              case TestKind::End: holds = h.ee; break;
              case TestKind::Reg:
                holds = h.cur >= 0 && h.cls.at(f.arg - 1) == h.cur;
                break;
              case TestKind::Beg:
                fail(ErrorCode::ClassMismatch, "beg test in a one-way automaton");
              }
            out.push_back(at(holds ? f.q1 : f.q2));
            break;
          }
        case TfKind::Store:
          {
            AbstractState g = at(f.q1);
            if (g.cur < 0)
              g.cur = label_count(g);
            g.cls.at(f.arg - 1) = g.cur;
            canonicalise(g);
            out.push_back(std::move(g));
            break;
          }
        case TfKind::Or:
          out.push_back(at(f.q1));
          if (f.q2 != f.q1)
            out.push_back(at(f.q2));
          break;
        case TfKind::X:
        case TfKind::WX:
          {
            if (h.ee)
              break;
            const std::int8_t labels = label_count(h);
            for (Letter b = 0; b < a.alphabet.size(); ++b)
              for (int ee = 0; ee < 2; ++ee)
                for (std::int8_t c = -1; c < labels; ++c)
                  {
                    AbstractState g = at(f.q1);
                    g.letter = b;
                    g.ee = ee == 1;
                    g.cur = c;
                    out.push_back(std::move(g));
                  }
            break;
          }
        case TfKind::Top:
        case TfKind::Bottom:
          break;
        default:
          fail(ErrorCode::ClassMismatch, "automaton is not one-way nondeterministic");
        }
      return out;
    }

    std::vector<AbstractState> initial_states(const RegisterAutomaton& a)
    {
      std::vector<AbstractState> out;
      for (Letter b = 0; b < a.alphabet.size(); ++b)
        for (int ee = 0; ee < 2; ++ee)
          {
            AbstractState h;
            h.letter = b;
            h.ee = ee == 1;
            h.location = a.init;
            h.cls.assign(a.registers, -1);
            out.push_back(std::move(h));
          }
      return out;
    }

    struct Graph
    {
      std::vector<AbstractState> states;
      std::vector<std::vector<std::size_t>> succ;
      std::vector<std::size_t> parent;
      std::map<AbstractState, std::size_t> index;
    };

    /// Breadth-first exploration; stops early once \a stop returns true
    /// for a newly discovered state (whose index is returned).
    template <class Stop>
    std::optional<std::size_t> explore(const RegisterAutomaton& a, Graph& g, Stop stop)
    {
      const std::size_t none = static_cast<std::size_t>(-1);
      std::deque<std::size_t> queue;
      auto intern = [&](AbstractState h, std::size_t from) -> std::pair<std::size_t, bool> {
        auto it = g.index.find(h);
        if (it != g.index.end())
          return {it->second, false};
        std::size_t id = g.states.size();
        g.index.emplace(h, id);
        g.states.push_back(std::move(h));
        g.succ.emplace_back();
        g.parent.push_back(from);
        queue.push_back(id);
        return {id, true};
      };
      for (auto& h : initial_states(a))
        {
          auto [id, fresh] = intern(std::move(h), none);
          if (fresh && stop(g.states[id]))
            return id;
        }
      while (!queue.empty())
        {
          std::size_t u = queue.front();
          queue.pop_front();
          for (auto& h : successors(a, g.states[u]))
            {
              auto [id, fresh] = intern(std::move(h), u);
              g.succ[u].push_back(id);
              if (fresh && stop(g.states[id]))
                return id;
            }
        }
      return std::nullopt;
    }

    DataWord reconstruct(const RegisterAutomaton& a, const Graph& g, std::size_t last)
    {
      const std::size_t none = static_cast<std::size_t>(-1);
      std::vector<std::size_t> path;
      for (std::size_t v = last; v != none; v = g.parent[v])
        path.push_back(v);
      std::reverse(path.begin(), path.end());

      std::vector<Letter> letters;
      std::vector<std::uint32_t> classes;
      std::uint32_t next_class = 0;
      std::vector<std::int64_t> concrete(a.registers, -1);

      const AbstractState* prev = nullptr;
      for (auto id : path)
        {
          const AbstractState& h = g.states[id];
          bool moved = prev == nullptr || a.delta[prev->location].moves();
          if (moved)
            {
              std::uint32_t c = next_class;
              if (h.cur >= 0)
                {
                  for (unsigned r = 0; r < a.registers; ++r)
                    if (h.cls[r] == h.cur)
                      c = static_cast<std::uint32_t>(concrete[r]);
                }
              if (c == next_class)
                ++next_class;
              letters.push_back(h.letter);
              classes.push_back(c);
            }
          else if (a.delta[prev->location].kind == TfKind::Store)
            concrete[a.delta[prev->location].arg - 1] = classes.back();
          prev = &h;
        }
      if (prev && !prev->ee)
        {
          letters.push_back(0);
          classes.push_back(next_class++);
        }
      return DataWord(std::move(letters), classes);
    }
  }

  AbstractState abstract_state(const RegisterAutomaton& a, const DataWord& w, const RaState& s)
  {
    AbstractState h;
    h.letter = w.letter(s.position);
    h.ee = s.position + 1 == w.length();
    h.location = s.location;
    h.cls.assign(a.registers, -1);
    std::map<std::uint32_t, std::int8_t> rename;
    for (unsigned r = 1; r <= a.registers; ++r)
      if (auto c = s.valuation.get(r))
        {
          auto [it, fresh] = rename.emplace(c->index, static_cast<std::int8_t>(rename.size()));
          h.cls[r - 1] = it->second;
        }
    auto it = rename.find(w.class_of(s.position).index);
    if (it != rename.end())
      h.cur = it->second;
    return h;
  }

  std::vector<AbstractState> abs_successors(const RegisterAutomaton& a, const AbstractState& h)
  {
    require_one_way_nondeterministic(a);
    return successors(a, h);
  }

  bool abs_initial(const RegisterAutomaton& a, const AbstractState& h)
  {
    if (h.location != a.init || h.cur != -1)
      return false;
    for (auto c : h.cls)
      if (c != -1)
        return false;
    return true;
  }

  bool abs_winning(const RegisterAutomaton& a, const AbstractState& h)
  {
    const auto& f = a.delta.at(h.location);
    return f.kind == TfKind::Top || (f.kind == TfKind::WX && h.ee);
  }

  std::string format_abstract_state(const RegisterAutomaton& a, const AbstractState& h)
  {
    std::ostringstream out;
    out << '<' << a.alphabet.symbol(h.letter) << ", " << (h.ee ? "T" : "F") << ", {";
    bool first = true;
    for (auto r : h.current_registers())
      {
        out << (first ? "" : ",") << r;
        first = false;
      }
    out << "}, " << a.names.at(h.location) << ", [";
    for (std::size_t r = 0; r < h.cls.size(); ++r)
      {
        if (r)
          out << ' ';
        if (h.cls[r] < 0)
          out << '-';
        else
          out << int(h.cls[r]);
      }
    out << "]>";
    return out.str();
  }

  NraVerdict nonempty_finite(const RegisterAutomaton& a)
  {
    require_one_way_nondeterministic(a);
    // 0-1 breadth-first search where moving edges cost one position, so
    // the reconstructed witness is as short as possible.
    const std::size_t none = static_cast<std::size_t>(-1);
    Graph g;
    std::vector<std::size_t> dist;
    std::vector<bool> done;
    std::deque<std::size_t> queue;
    auto relax = [&](AbstractState h, std::size_t from, std::size_t d, bool cheap) {
      auto it = g.index.find(h);
      std::size_t id;
      if (it == g.index.end())
        {
          id = g.states.size();
          g.index.emplace(h, id);
          g.states.push_back(std::move(h));
          g.succ.emplace_back();
          g.parent.push_back(from);
          dist.push_back(d);
          done.push_back(false);
        }
      else
        {
          id = it->second;
          if (done[id] || dist[id] <= d)
            return id;
          dist[id] = d;
          g.parent[id] = from;
        }
      if (cheap)
        queue.push_front(id);
      else
        queue.push_back(id);
      return id;
    };
    for (auto& h : initial_states(a))
      relax(std::move(h), none, 1, false);
    std::optional<std::size_t> best;
    std::size_t best_len = none;
    while (!queue.empty())
      {
        const std::size_t u = queue.front();
        queue.pop_front();
        if (done[u])
          continue;
        if (dist[u] >= best_len)
          break;
        done[u] = true;
        if (abs_winning(a, g.states[u]))
          {
            const std::size_t len = dist[u] + (g.states[u].ee ? 0 : 1);
            if (len < best_len)
              best = u, best_len = len;
            continue;
          }
        const bool moves = a.delta[g.states[u].location].moves();
        for (auto& h : successors(a, g.states[u]))
          {
            const std::size_t id = relax(std::move(h), u, dist[u] + (moves ? 1 : 0), !moves);
            g.succ[u].push_back(id);
          }
      }
    NraVerdict v;
    v.explored = g.states.size();
    if (!best)
      return v;
    v.nonempty = true;
    DataWord w = reconstruct(a, g, *best);
    if (!accepts(a, w))
      fail(ErrorCode::PreconditionViolation, "reconstructed witness is not accepted");
    v.witness = std::move(w);
    return v;
  }

  NraVerdict nonempty_infinite(const RegisterAutomaton& a)
  {
    require_one_way_nondeterministic(a);
    Graph g;
    auto hit = explore(a, g, [&](const AbstractState& h) {
      return !h.ee && a.delta[h.location].kind == TfKind::Top;
    });
    NraVerdict v;
    if (hit)
      {
        v.explored = g.states.size();
        v.nonempty = true;
        v.reason = "accepting state before the end of the word";
        return v;
      }
    v.explored = g.states.size();
    std::size_t count = 0;
    auto succ = [&](std::size_t u) -> const std::vector<std::size_t>& { return g.succ[u]; };
    auto comp = detail::strongly_connected(g.states.size(), succ, count);
    auto cyclic = detail::nontrivial_components(g.states.size(), succ, comp, count);
    for (std::size_t u = 0; u < g.states.size(); ++u)
      if (cyclic[comp[u]] && a.rank[g.states[u].location] % 2 == 0)
        {
          v.nonempty = true;
          v.reason = "reachable cycle of even rank through "
                     + format_abstract_state(a, g.states[u]);
          return v;
        }
    return v;
  }

  std::string abstract_graph_dot(const RegisterAutomaton& a)
  {
    require_one_way_nondeterministic(a);
    Graph g;
    explore(a, g, [](const AbstractState&) { return false; });
    std::ostringstream out;
    out << "digraph abstract {\n";
    for (std::size_t u = 0; u < g.states.size(); ++u)
      {
        out << "  n" << u << " [label=\"" << format_abstract_state(a, g.states[u]) << "\"";
        if (abs_winning(a, g.states[u]))
          out << ", peripheries=2";
        out << "];\n";
      }
    for (std::size_t u = 0; u < g.states.size(); ++u)
      for (auto v : g.succ[u])
        out << "  n" << u << " -> n" << v << ";\n";
    out << "}\n";
    return out.str();
  }
}
