#include <dw/ca.hh>
#include <dw/error.hh>

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace dw
{
  CaLocation CounterAutomaton::add_location(std::string name, bool is_accepting)
  {
    names.push_back(std::move(name));
    accepting.push_back(is_accepting);
    return static_cast<CaLocation>(names.size() - 1);
  }

  std::size_t CounterAutomaton::add(CaLocation from, std::optional<Letter> letter,
                                    Instruction ins, CaLocation to)
  {
    delta.push_back({from, letter, ins, to});
    return delta.size() - 1;
  }

  std::optional<CaLocation> CounterAutomaton::find(std::string_view name) const
  {
    for (CaLocation q = 0; q < names.size(); ++q)
      if (names[q] == name)
        return q;
    return std::nullopt;
  }

  std::vector<std::vector<std::size_t>> CounterAutomaton::outgoing() const
  {
    std::vector<std::vector<std::size_t>> out(size());
    for (std::size_t t = 0; t < delta.size(); ++t)
      if (delta[t].from < size())
        out[delta[t].from].push_back(t);
    return out;
  }

  std::vector<std::string> validate(const CounterAutomaton& c)
  {
    std::vector<std::string> out;
    if (c.accepting.size() != c.size())
      out.push_back("accepting flags do not match the locations");
    if (c.size() == 0)
      out.push_back("no locations");
    else if (c.init >= c.size())
      out.push_back("initial location out of range");
    for (std::size_t t = 0; t < c.delta.size(); ++t)
      {
        const auto& d = c.delta[t];
        auto where = "transition " + std::to_string(t) + ": ";
        if (d.from >= c.size() || d.to >= c.size())
          {
            out.push_back(where + "location out of range");
            continue;
          }
        if (d.instruction.counter < 1 || d.instruction.counter > c.counters)
          out.push_back(where + "counter out of range");
        if (d.letter && *d.letter >= c.alphabet.size())
          out.push_back(where + "letter out of range");
        if (!d.letter && d.to < c.accepting.size() && c.accepting[d.to])
          out.push_back(where + "epsilon transition into accepting location " + c.names[d.to]);
      }
    return out;
  }

  void require_valid(const CounterAutomaton& c)
  {
    auto v = validate(c);
    if (!v.empty())
      fail(ErrorCode::InvalidAutomaton, v.front());
  }

  bool leq(const Valuation& a, const Valuation& b)
  {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] > b[i])
        return false;
    return true;
  }

  CaState initial_state(const CounterAutomaton& c)
  {
    return {c.init, Valuation(c.counters, 0)};
  }

  std::optional<CaState> apply(const CounterAutomaton& c, const CaState& s, std::size_t t,
                               bool incrementing)
  {
    const auto& d = c.delta.at(t);
    if (d.from != s.location)
      return std::nullopt;
    CaState out{d.to, s.values};
    auto& x = out.values.at(d.instruction.counter - 1);
    switch (d.instruction.op)
      {
      case CounterOp::Inc: ++x; break;
      case CounterOp::Dec:
        if (x > 0)
          --x;
        else if (!incrementing)
          return std::nullopt;
        break;
      case CounterOp::Ifz:
        if (x != 0)
          return std::nullopt;
        break;
      }
    return out;
  }

  namespace
  {
    std::vector<CaStep> steps(const CounterAutomaton& c, const CaState& s, bool incrementing)
    {
      std::vector<CaStep> out;
      for (std::size_t t = 0; t < c.delta.size(); ++t)
        if (auto n = apply(c, s, t, incrementing))
          out.push_back({t, std::move(*n)});
      return out;
    }
  }

  std::vector<CaStep> step_minsky(const CounterAutomaton& c, const CaState& s)
  {
    return steps(c, s, false);
  }

  std::vector<CaStep> step_incrementing(const CounterAutomaton& c, const CaState& s)
  {
    return steps(c, s, true);
  }

  const char* verdict_name(Verdict v)
  {
    switch (v)
      {
      case Verdict::Empty: return "empty";
      case Verdict::Nonempty: return "nonempty";
      case Verdict::Unknown: return "unknown";
      }
    return "?";
  }

  std::vector<Letter> letters_of(const CounterAutomaton& c, const std::vector<std::size_t>& run)
  {
    std::vector<Letter> out;
    for (auto t : run)
      if (c.delta.at(t).letter)
        out.push_back(*c.delta[t].letter);
    return out;
  }

  namespace
  {
    constexpr std::size_t none = static_cast<std::size_t>(-1);

    struct Node
    {
      CaState state;
      std::size_t position = 0;
      std::size_t parent = none;
      std::size_t via = none;
      bool alive = true;
    };

    std::vector<std::size_t> run_to(const std::vector<Node>& nodes, std::size_t v)
    {
      std::vector<std::size_t> out;
      for (; nodes[v].parent != none; v = nodes[v].parent)
        out.push_back(nodes[v].via);
      std::reverse(out.begin(), out.end());
      return out;
    }

    /// Per-key store of pairwise incomparable valuations with the node
    /// that holds each.
    class Antichain
    {
    public:
      /// False when some stored valuation is below \a v.  Otherwise stores
      /// it and kills the nodes it dominates.
      bool insert(std::size_t key, std::size_t id, std::vector<Node>& nodes)
      {
        auto& bucket = store_[key];
        const auto& v = nodes[id].state.values;
        for (auto other : bucket)
          if (leq(nodes[other].state.values, v))
            return false;
        std::erase_if(bucket, [&](std::size_t other) {
          if (!leq(v, nodes[other].state.values))
            return false;
          nodes[other].alive = false;
          return true;
        });
        bucket.push_back(id);
        return true;
      }

    private:
      std::map<std::size_t, std::vector<std::size_t>> store_;
    };

    TriState unknown(std::size_t explored, const std::string& what)
    {
      TriState t;
      t.verdict = Verdict::Unknown;
      t.certificate = what;
      t.explored = explored;
      return t;
    }
  }

  TriState accepts_word(const CounterAutomaton& c, const std::vector<Letter>& w, Semantics sem,
                        std::size_t budget)
  {
    require_valid(c);
    if (budget == 0)
      fail(ErrorCode::PreconditionViolation, "budget must be positive");
    const bool incrementing = sem == Semantics::Incrementing;
    TriState result;
    result.verdict = Verdict::Empty;
    result.certificate = incrementing ? "minimal runs exhausted" : "exact runs exhausted";
    if (w.empty())
      {
        result.certificate = "empty word";
        return result;
      }
    const auto out = c.outgoing();
    std::vector<Node> nodes;
    std::deque<std::size_t> queue;
    Antichain chain;
    std::set<std::pair<std::size_t, CaState>> seen;

    auto admit = [&](Node n) {
      nodes.push_back(std::move(n));
      std::size_t id = nodes.size() - 1;
      bool fresh = incrementing
                     ? chain.insert(nodes[id].position * c.size() + nodes[id].state.location, id, nodes)
                     : seen.emplace(nodes[id].position, nodes[id].state).second;
      if (!fresh)
        {
          nodes.pop_back();
          return;
        }
      queue.push_back(id);
    };
    admit({initial_state(c), 0, none, none, true});

    while (!queue.empty())
      {
        std::size_t u = queue.front();
        queue.pop_front();
        if (!nodes[u].alive)
          continue;
        if (++result.explored > budget)
          return unknown(result.explored - 1, "state budget " + std::to_string(budget));
        const Node cur = nodes[u];
        if (cur.position == w.size() && c.accepting[cur.state.location])
          {
            result.verdict = Verdict::Nonempty;
            result.certificate = "accepting run";
            result.stem = run_to(nodes, u);
            return result;
          }
        for (auto t : out[cur.state.location])
          {
            const auto& d = c.delta[t];
            std::size_t pos = cur.position;
            if (d.letter)
              {
                if (pos == w.size() || *d.letter != w[pos])
                  continue;
                ++pos;
              }
            if (auto n = apply(c, cur.state, t, incrementing))
              admit({std::move(*n), pos, u, t, true});
          }
      }
    return result;
  }

  namespace
  {
    TriState finite_antichain(const CounterAutomaton& c, std::size_t budget)
    {
      const auto out = c.outgoing();
      std::vector<Node> nodes;
      std::deque<std::size_t> queue;
      Antichain chain;
      TriState result;
      nodes.push_back({initial_state(c), 0, none, none, true});
      chain.insert(c.init, 0, nodes);
      queue.push_back(0);
      while (!queue.empty())
        {
          std::size_t u = queue.front();
          queue.pop_front();
          if (!nodes[u].alive)
            continue;
          if (++result.explored > budget)
            return unknown(result.explored - 1, "state budget " + std::to_string(budget));
          const CaState cur = nodes[u].state;
          for (auto t : out[cur.location])
            {
              auto n = apply(c, cur, t, true);
              if (!n)
                continue;
              nodes.push_back({std::move(*n), 0, u, t, true});
              std::size_t id = nodes.size() - 1;
              if (c.accepting[nodes[id].state.location])
                {
                  result.verdict = Verdict::Nonempty;
                  result.certificate = "accepting run";
                  result.stem = run_to(nodes, id);
                  return result;
                }
              if (chain.insert(nodes[id].state.location, id, nodes))
                queue.push_back(id);
              else
                nodes.pop_back();
            }
        }
      result.verdict = Verdict::Empty;
      result.certificate = "antichain saturated";
      return result;
    }

    TriState finite_ancestors(const CounterAutomaton& c, std::size_t budget)
    {
      const auto out = c.outgoing();
      std::vector<Node> nodes;
      std::vector<std::size_t> stack;
      TriState result;
      nodes.push_back({initial_state(c), 0, none, none, true});
      stack.push_back(0);
      auto subsumed = [&](std::size_t id) {
        const auto& s = nodes[id].state;
        for (std::size_t a = nodes[id].parent; a != none; a = nodes[a].parent)
          if (nodes[a].state.location == s.location && leq(nodes[a].state.values, s.values))
            return true;
        return false;
      };
      while (!stack.empty())
        {
          std::size_t u = stack.back();
          stack.pop_back();
          if (++result.explored > budget)
            return unknown(result.explored - 1, "node budget " + std::to_string(budget));
          const CaState cur = nodes[u].state;
          const auto& ts = out[cur.location];
          for (auto it = ts.rbegin(); it != ts.rend(); ++it)
            {
              auto n = apply(c, cur, *it, true);
              if (!n)
                continue;
              nodes.push_back({std::move(*n), 0, u, *it, true});
              std::size_t id = nodes.size() - 1;
              if (c.accepting[nodes[id].state.location])
                {
                  result.verdict = Verdict::Nonempty;
                  result.certificate = "accepting run";
                  result.stem = run_to(nodes, id);
                  return result;
                }
              if (subsumed(id))
                nodes.pop_back();
              else
                stack.push_back(id);
            }
        }
      result.verdict = Verdict::Empty;
      result.certificate = "every branch subsumed";
      return result;
    }
  }

  TriState nonempty_finite_incrementing(const CounterAutomaton& c, std::size_t budget,
                                        Pruning pruning)
  {
    require_valid(c);
    if (budget == 0)
      fail(ErrorCode::PreconditionViolation, "budget must be positive");
    return pruning == Pruning::Antichain ? finite_antichain(c, budget)
                                         : finite_ancestors(c, budget);
  }

  namespace
  {
    struct Frame
    {
      CaState state;
      std::size_t via;
      /// Accepting locations on the path up to and including this frame,
      /// not counting the root.
      std::size_t accepting_seen;
      /// Index of the frame where the current round started.
      std::size_t round_start;
      std::size_t rounds;
      std::size_t next_child = 0;
    };

    struct TreeOutcome
    {
      bool witness = false;
      bool truncated = false;
      bool out_of_budget = false;
      std::vector<std::size_t> stem, cycle;
    };

    /// One pass of the round tree, not expanding beyond \a max_rounds
    /// accepting visits on a branch.
    TreeOutcome round_tree(const CounterAutomaton& c,
                           const std::vector<std::vector<std::size_t>>& out, std::size_t max_rounds,
                           std::size_t& explored, std::size_t budget)
    {
      TreeOutcome r;
      std::vector<Frame> path;
      std::vector<std::vector<std::size_t>> at(c.size());
      auto push = [&](Frame f) {
        at[f.state.location].push_back(path.size());
        path.push_back(std::move(f));
      };
      auto pop = [&] {
        at[path.back().state.location].pop_back();
        path.pop_back();
      };
      push({initial_state(c), none, 0, 0, 0});
      while (!path.empty())
        {
          Frame& top = path.back();
          const auto& ts = out[top.state.location];
          if (top.next_child == ts.size())
            {
              pop();
              continue;
            }
          std::size_t t = ts[top.next_child++];
          auto n = apply(c, top.state, t, true);
          if (!n)
            continue;
          if (++explored > budget)
            {
              r.out_of_budget = true;
              return r;
            }
          const Frame parent = path.back();
          const bool acc = c.accepting[n->location];
          const std::size_t seen = parent.accepting_seen + (acc ? 1 : 0);
          for (auto i : at[n->location])
            if (seen > path[i].accepting_seen && leq(n->values, path[i].state.values))
              {
                r.witness = true;
                for (std::size_t k = 1; k <= i; ++k)
                  r.stem.push_back(path[k].via);
                for (std::size_t k = i + 1; k < path.size(); ++k)
                  r.cycle.push_back(path[k].via);
                r.cycle.push_back(t);
                return r;
              }
          if (acc)
            {
              if (parent.rounds + 1 > max_rounds)
                {
                  r.truncated = true;
                  continue;
                }
              push({std::move(*n), t, seen, path.size(), parent.rounds + 1});
              continue;
            }
          bool cut = false;
          for (auto i : at[n->location])
            if (i >= parent.round_start && leq(path[i].state.values, n->values))
              {
                cut = true;
                break;
              }
          if (!cut)
            push({std::move(*n), t, seen, parent.round_start, parent.rounds});
        }
      return r;
    }
  }

  namespace
  {
    /// From an accepting state, looks for a return to the same location
    /// with no larger counters.  Dominated states are pruned, which is
    /// complete for this question because smaller counters can replay
    /// every step of larger ones.
    std::optional<std::vector<std::size_t>> cycle_back(const CounterAutomaton& c,
                                                       const std::vector<std::vector<std::size_t>>& out,
                                                       const CaState& seed, std::size_t& explored,
                                                       std::size_t budget, bool& exhausted)
    {
      std::vector<Node> nodes{{seed, 0, none, none, true}};
      Antichain chain;
      chain.insert(seed.location, 0, nodes);
      std::deque<std::size_t> queue{0};
      while (!queue.empty())
        {
          std::size_t u = queue.front();
          queue.pop_front();
          if (!nodes[u].alive)
            continue;
          if (++explored > budget)
            {
              exhausted = true;
              return std::nullopt;
            }
          const CaState cur = nodes[u].state;
          for (auto t : out[cur.location])
            {
              auto n = apply(c, cur, t, true);
              if (!n)
                continue;
              nodes.push_back({std::move(*n), 0, u, t, true});
              std::size_t id = nodes.size() - 1;
              if (nodes[id].state.location == seed.location && leq(nodes[id].state.values, seed.values))
                return run_to(nodes, id);
              if (chain.insert(nodes[id].state.location, id, nodes))
                queue.push_back(id);
              else
                nodes.pop_back();
            }
        }
      return std::nullopt;
    }

    /// Breadth-first over exact minimal-error states, trying every
    /// accepting state as the start of a cycle.
    TriState lasso_search(const CounterAutomaton& c, const std::vector<std::vector<std::size_t>>& out,
                          std::size_t budget)
    {
      TriState result;
      std::vector<Node> nodes{{initial_state(c), 0, none, none, true}};
      std::set<CaState> seen{nodes[0].state};
      std::deque<std::size_t> queue{0};
      bool exhausted = false;
      while (!queue.empty())
        {
          std::size_t u = queue.front();
          queue.pop_front();
          if (++result.explored > budget)
            return unknown(budget, "node budget");
          const CaState cur = nodes[u].state;
          if (c.accepting[cur.location])
            if (auto cyc = cycle_back(c, out, cur, result.explored, budget, exhausted))
              {
                result.verdict = Verdict::Nonempty;
                result.certificate = "lasso";
                result.stem = run_to(nodes, u);
                result.cycle = std::move(*cyc);
                return result;
              }
          if (exhausted)
            return unknown(budget, "node budget");
          for (auto t : out[cur.location])
            if (auto n = apply(c, cur, t, true); n && seen.insert(*n).second)
              {
                nodes.push_back({std::move(*n), 0, u, t, true});
                queue.push_back(nodes.size() - 1);
              }
        }
      result.verdict = Verdict::Empty;
      result.certificate = "finitely many reachable states, no accepting cycle";
      return result;
    }
  }

  TriState nonempty_infinite_incrementing(const CounterAutomaton& c, std::size_t budget)
  {
    require_valid(c);
    if (budget == 0)
      fail(ErrorCode::PreconditionViolation, "budget must be positive");
    const auto out = c.outgoing();
    auto first = lasso_search(c, out, budget / 2 + 1);
    if (first.verdict != Verdict::Unknown)
      return first;
    TriState result;
    const std::size_t rest = budget - std::min(budget, first.explored);
    for (std::size_t rounds = 1;; ++rounds)
      {
        auto r = round_tree(c, out, rounds, result.explored, rest);
        if (r.witness)
          {
            result.verdict = Verdict::Nonempty;
            result.certificate = "lasso";
            result.stem = std::move(r.stem);
            result.cycle = std::move(r.cycle);
            result.explored += first.explored;
            return result;
          }
        if (r.out_of_budget)
          return unknown(budget, "node budget " + std::to_string(budget) + " (round depth "
                                   + std::to_string(rounds) + ")");
        if (!r.truncated)
          {
            result.verdict = Verdict::Empty;
            result.certificate = "run tree finite";
            result.explored += first.explored;
            return result;
          }
      }
  }

  TriState nonempty_minsky_bounded(const CounterAutomaton& c, Words over, std::size_t budget)
  {
    require_valid(c);
    if (budget == 0)
      fail(ErrorCode::PreconditionViolation, "budget must be positive");
    const auto out = c.outgoing();
    TriState result;
    struct Step
    {
      CaState state;
      std::size_t via;
      std::size_t accepting_seen;
      std::size_t next_child = 0;
    };
    for (std::size_t depth = 1;; ++depth)
      {
        bool cutoff = false;
        std::vector<Step> path{{initial_state(c), none, 0}};
        while (!path.empty())
          {
            Step& top = path.back();
            const auto& ts = out[top.state.location];
            if (path.size() > depth || top.next_child == ts.size())
              {
                if (path.size() > depth)
                  cutoff = true;
                path.pop_back();
                continue;
              }
            std::size_t t = ts[top.next_child++];
            auto n = apply(c, top.state, t, false);
            if (!n)
              continue;
            if (++result.explored > budget)
              return unknown(budget, "node budget " + std::to_string(budget) + " (depth "
                                       + std::to_string(depth) + ")");
            const bool acc = c.accepting[n->location];
            const std::size_t seen = path.back().accepting_seen + (acc ? 1 : 0);
            if (over == Words::Finite && acc)
              {
                result.verdict = Verdict::Nonempty;
                result.certificate = "accepting run";
                for (std::size_t k = 1; k < path.size(); ++k)
                  result.stem.push_back(path[k].via);
                result.stem.push_back(t);
                return result;
              }
            if (over == Words::Infinite)
              for (std::size_t i = 0; i < path.size(); ++i)
                if (path[i].state == *n && seen > path[i].accepting_seen)
                  {
                    result.verdict = Verdict::Nonempty;
                    result.certificate = "exact cycle";
                    for (std::size_t k = 1; k <= i; ++k)
                      result.stem.push_back(path[k].via);
                    for (std::size_t k = i + 1; k < path.size(); ++k)
                      result.cycle.push_back(path[k].via);
                    result.cycle.push_back(t);
                    return result;
                  }
            path.push_back({std::move(*n), t, seen});
          }
        if (!cutoff)
          return unknown(result.explored, "exact runs exhausted at depth " + std::to_string(depth)
                                            + " without a witness");
      }
  }

  bool check_witness(const CounterAutomaton& c, const TriState& t, Semantics sem)
  {
    if (t.verdict != Verdict::Nonempty)
      return false;
    const bool incrementing = sem == Semantics::Incrementing;
    auto replay = [&](CaState s, const std::vector<std::size_t>& run, bool& accepting_seen,
                      bool& letter_seen) -> std::optional<CaState> {
      for (auto i : run)
        {
          if (i >= c.delta.size())
            return std::nullopt;
          auto n = apply(c, s, i, incrementing);
          if (!n)
            return std::nullopt;
          s = std::move(*n);
          accepting_seen = accepting_seen || c.accepting[s.location];
          letter_seen = letter_seen || c.delta[i].letter.has_value();
        }
      return s;
    };
    bool acc = false, letter = false;
    auto start = replay(initial_state(c), t.stem, acc, letter);
    if (!start)
      return false;
    if (t.cycle.empty())
      return !t.stem.empty() && letter && c.accepting[start->location];
    acc = letter = false;
    auto end = replay(*start, t.cycle, acc, letter);
    if (!end || !acc || !letter || end->location != start->location)
      return false;
    return incrementing ? leq(end->values, start->values) : end->values == start->values;
  }
}
