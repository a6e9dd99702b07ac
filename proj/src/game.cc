#include <dw/game.hh>

#include "scc.hh"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace dw
{
  std::size_t WeakGame::add(Player p, unsigned r, std::string name)
  {
    owner.push_back(p);
    succ.emplace_back();
    rank.push_back(r);
    label.push_back(std::move(name));
    return owner.size() - 1;
  }

  std::vector<std::pair<std::size_t, std::size_t>> WeakGame::rank_violations() const
  {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t p = 0; p < size(); ++p)
      for (auto q : succ[p])
        if (rank[q] > rank[p])
          out.emplace_back(p, q);
    return out;
  }

  // Strata are solved from the lowest rank upwards.  Inside a stratum the
  // player whose parity the rank favours ("good") wins everything outside
  // the opponent's attractor to the lower positions the opponent already
  // wins (plus good-owned dead ends).
  GameSolution solve(const WeakGame& g)
  {
    const std::size_t n = g.size();
    GameSolution sol;
    sol.winner.assign(n, Player::P1);
    sol.level.assign(n, 0);
    sol.strategy_p1.player = Player::P1;
    sol.strategy_p2.player = Player::P2;
    sol.strategy_p1.choice.assign(n, -1);
    sol.strategy_p2.choice.assign(n, -1);

    std::vector<std::vector<std::size_t>> pred(n);
    for (std::size_t p = 0; p < n; ++p)
      for (auto q : g.succ[p])
        pred[q].push_back(p);

    std::map<unsigned, std::vector<std::size_t>> strata;
    for (std::size_t p = 0; p < n; ++p)
      strata[g.rank[p]].push_back(p);

    std::vector<bool> solved(n, false), attracted(n, false);
    std::vector<std::size_t> count(n, 0);
    auto choice_of = [&](Player pl) -> std::vector<std::int64_t>& {
      return pl == Player::P1 ? sol.strategy_p1.choice : sol.strategy_p2.choice;
    };

    for (auto& [r, members] : strata)
      {
        const unsigned rank = r;
        const Player good = rank % 2 == 0 ? Player::P1 : Player::P2;
        const Player bad = opponent(good);
        auto in_stratum = [&](std::size_t q) { return !solved[q] && g.rank[q] == rank; };
        auto lost_below = [&](std::size_t q) { return solved[q] && sol.winner[q] == bad; };

        std::deque<std::size_t> queue;
        std::vector<std::size_t> seeds1;
        for (auto p : members)
          {
            if (g.owner[p] == good)
              {
                count[p] = 0;
                for (auto q : g.succ[p])
                  if (!lost_below(q))
                    ++count[p];
                if (g.succ[p].empty())
                  {
                    attracted[p] = true;
                    sol.level[p] = 0;
                    queue.push_back(p);
                  }
                else if (count[p] == 0)
                  {
                    attracted[p] = true;
                    seeds1.push_back(p);
                  }
              }
            else
              for (auto q : g.succ[p])
                if (lost_below(q))
                  {
                    attracted[p] = true;
                    seeds1.push_back(p);
                    choice_of(bad)[p] = static_cast<std::int64_t>(q);
                    break;
                  }
          }
        for (auto p : seeds1)
          {
            sol.level[p] = 1;
            queue.push_back(p);
          }
        while (!queue.empty())
          {
            std::size_t u = queue.front();
            queue.pop_front();
            for (auto p : pred[u])
              {
                if (!in_stratum(p) || attracted[p])
                  continue;
                if (g.owner[p] == bad)
                  {
                    choice_of(bad)[p] = static_cast<std::int64_t>(u);
                  }
                else if (--count[p] != 0)
                  continue;
                attracted[p] = true;
                sol.level[p] = sol.level[u] + 1;
                queue.push_back(p);
              }
          }
        for (auto p : members)
          {
            if (attracted[p])
              {
                sol.winner[p] = bad;
                continue;
              }
            sol.winner[p] = good;
            sol.level[p] = 0;
            if (g.owner[p] == good)
              for (auto q : g.succ[p])
                if (!lost_below(q) && !(in_stratum(q) && attracted[q]))
                  {
                    choice_of(good)[p] = static_cast<std::int64_t>(q);
                    break;
                  }
          }
        for (auto p : members)
          solved[p] = true;
      }
    // Choices only make sense inside the owner's own winning region.
    for (std::size_t p = 0; p < n; ++p)
      {
        if (sol.winner[p] != Player::P1 || g.owner[p] != Player::P1)
          sol.strategy_p1.choice[p] = -1;
        if (sol.winner[p] != Player::P2 || g.owner[p] != Player::P2)
          sol.strategy_p2.choice[p] = -1;
      }
    return sol;
  }

  LocalSolution solve(const WeakGame& g, std::size_t p)
  {
    GameSolution s = solve(g);
    Player w = s.winner.at(p);
    return {w, w == Player::P1 ? s.strategy_p1 : s.strategy_p2};
  }

  bool check_strategy(const WeakGame& g, std::size_t p, const PositionalStrategy& s)
  {
    const std::size_t n = g.size();
    if (p >= n)
      return false;
    // Restrict the graph to moves allowed by s, over positions reachable
    // from p.
    std::vector<std::vector<std::size_t>> out(n);
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> work{p};
    seen[p] = true;
    while (!work.empty())
      {
        std::size_t u = work.back();
        work.pop_back();
        if (g.succ[u].empty())
          {
            if (g.owner[u] == s.player)
              return false;
            continue;
          }
        if (g.owner[u] == s.player)
          {
            std::int64_t c = u < s.choice.size() ? s.choice[u] : -1;
            if (c < 0)
              return false;
            auto cu = static_cast<std::size_t>(c);
            if (std::find(g.succ[u].begin(), g.succ[u].end(), cu) == g.succ[u].end())
              return false;
            out[u] = {cu};
          }
        else
          out[u] = g.succ[u];
        for (auto v : out[u])
          if (!seen[v])
            {
              seen[v] = true;
              work.push_back(v);
            }
      }
    std::size_t count = 0;
    auto succ = [&](std::size_t v) -> const std::vector<std::size_t>& { return out[v]; };
    auto comp = detail::strongly_connected(n, succ, count);
    auto cyclic = detail::nontrivial_components(n, succ, comp, count);
    const unsigned want = s.player == Player::P1 ? 0 : 1;
    for (std::size_t v = 0; v < n; ++v)
      {
        if (!seen[v] || !cyclic[comp[v]])
          continue;
        // A cycle through v: its eventual rank is the minimum on the cycle,
        // which equals rank(v) when ranks never increase.
        unsigned r = g.rank[v];
        for (auto w : out[v])
          if (comp[w] == comp[v])
            r = std::min(r, g.rank[w]);
        if (r % 2 != want)
          return false;
      }
    return true;
  }

  SignatureAssignment signature(const WeakGame& g)
  {
    GameSolution s = solve(g);
    SignatureAssignment alpha(g.size());
    for (std::size_t p = 0; p < g.size(); ++p)
      if (s.winner[p] == Player::P1)
        alpha[p] = g.rank[p] % 2 == 0 ? 0 : s.level[p];
    return alpha;
  }

  bool check_signature(const WeakGame& g, const SignatureAssignment& alpha)
  {
    if (alpha.size() != g.size())
      return false;
    auto ok_step = [&](std::size_t p, std::size_t q) {
      if (!alpha[q])
        return false;
      auto a = std::make_pair(g.rank[q], *alpha[q]);
      auto b = std::make_pair(g.rank[p], *alpha[p]);
      return g.rank[p] % 2 == 1 ? a < b : a <= b;
    };
    for (std::size_t p = 0; p < g.size(); ++p)
      {
        if (!alpha[p])
          continue;
        if (g.owner[p] == Player::P1)
          {
            bool found = false;
            for (auto q : g.succ[p])
              found = found || ok_step(p, q);
            if (!found)
              return false;
          }
        else
          for (auto q : g.succ[p])
            if (!ok_step(p, q))
              return false;
      }
    return true;
  }

  std::string to_dot(const WeakGame& g, const PositionalStrategy* highlight)
  {
    std::ostringstream out;
    out << "digraph game {\n";
    for (std::size_t p = 0; p < g.size(); ++p)
      {
        std::string name = p < g.label.size() && !g.label[p].empty() ? g.label[p]
                                                                      : std::to_string(p);
        out << "  n" << p << " [shape=" << (g.owner[p] == Player::P1 ? "box" : "ellipse")
            << ", label=\"" << name << " / " << g.rank[p] << "\"];\n";
      }
    for (std::size_t p = 0; p < g.size(); ++p)
      for (auto q : g.succ[p])
        {
          out << "  n" << p << " -> n" << q;
          if (highlight && p < highlight->choice.size()
              && highlight->choice[p] == static_cast<std::int64_t>(q))
            out << " [style=bold]";
          out << ";\n";
        }
    out << "}\n";
    return out.str();
  }
}
