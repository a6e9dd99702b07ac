#include "oracles.hh"

#include <dw/game.hh>
#include <dw/ra.hh>

#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

using namespace dw;

namespace
{
  RegisterAutomaton fig3()
  {
    std::ifstream in(DW_DATA_DIR "/fig3.ra");
    std::stringstream s;
    s << in.rdbuf();
    return parse_ra(s.str());
  }

  using Key = std::tuple<std::size_t, std::string, int>;

  Key key_of(const RegisterAutomaton& a, const RaState& s)
  {
    const auto c = s.valuation.get(1);
    return {s.position, a.names[s.location], c ? static_cast<int>(c->index) : -1};
  }

  /// States reachable from the initial position when P2 follows \a s and
  /// P1 moves freely.
  std::set<Key> visited(const RegisterAutomaton& a, const AcceptanceGame& ag,
                        const PositionalStrategy& s)
  {
    std::set<Key> out;
    std::vector<bool> seen(ag.game.size());
    std::vector<std::size_t> stack{ag.initial};
    seen[ag.initial] = true;
    while (!stack.empty())
      {
        const auto p = stack.back();
        stack.pop_back();
        out.insert(key_of(a, ag.states[p]));
        std::vector<std::size_t> next = ag.game.succ[p];
        if (ag.game.owner[p] == Player::P2 && !next.empty())
          next = {static_cast<std::size_t>(s.choice[p])};
        for (auto q : next)
          if (!seen[q])
            seen[q] = true, stack.push_back(q);
      }
    return out;
  }

  // Class 1 of the running data word is {1}; class 0 is {0, 2}.
  const std::set<Key> fig4_states = {
    {0, "q1", -1}, {0, "q2", -1}, {1, "q1", -1}, {1, "q3", -1},
    {1, "q4", -1}, {1, "q5", 1},  {2, "q6", 1},  {2, "q11", 1},
    {2, "q12", 1}, {2, "q13", 1}, {2, "q14", 1}, {2, "q16", 1}};
}

TEST_CASE("trivial games")
{
  WeakGame dead2;
  dead2.add(Player::P2, 0);
  CHECK(solve(dead2, 0).winner == Player::P1);
  CHECK(check_strategy(dead2, 0, PositionalStrategy{Player::P1, {-1}}));
  const auto sig2 = signature(dead2);
  REQUIRE(sig2[0].has_value());
  CHECK(*sig2[0] == 0);

  WeakGame dead1;
  dead1.add(Player::P1, 0);
  CHECK(solve(dead1, 0).winner == Player::P2);
  CHECK_FALSE(signature(dead1)[0].has_value());

  WeakGame even;
  even.add(Player::P1, 2);
  even.succ[0] = {0};
  CHECK(solve(even, 0).winner == Player::P1);
  CHECK_FALSE(check_strategy(even, 0, PositionalStrategy{Player::P2, {-1}}));
  CHECK(check_strategy(even, 0, PositionalStrategy{Player::P1, {0}}));

  WeakGame odd;
  odd.add(Player::P1, 1);
  odd.succ[0] = {0};
  CHECK(solve(odd, 0).winner == Player::P2);
  CHECK_FALSE(signature(odd)[0].has_value());
}

TEST_CASE("acceptance game of the running example follows the documented strategy")
{
  const auto a = fig3();
  const auto w = parse_data_word("a a b ; 0 2 | 1", a.alphabet);
  const auto ag = acceptance_game(a, w);
  CHECK(ag.game.rank_violations().empty());
  const auto sol = solve(ag.game);
  REQUIRE(sol.winner[ag.initial] == Player::P2);
  CHECK(check_strategy(ag.game, ag.initial, sol.strategy_p2));
  CHECK(visited(a, ag, sol.strategy_p2) == fig4_states);
  CHECK(visited(a, ag, sol.strategy_p2).count({2, "q16", 1}) == 1);

  // The hand-written strategy from the figure.
  PositionalStrategy fig{Player::P2, std::vector<std::int64_t>(ag.game.size(), -1)};
  const auto pick = [&](PositionalStrategy& s, Key from, Key to) {
    std::optional<std::size_t> src, dst;
    for (std::size_t p = 0; p < ag.game.size(); ++p)
      {
        if (key_of(a, ag.states[p]) == from)
          src = p;
        if (key_of(a, ag.states[p]) == to)
          dst = p;
      }
    REQUIRE(src);
    REQUIRE(dst);
    s.choice[*src] = static_cast<std::int64_t>(*dst);
  };
  pick(fig, {0, "q1", -1}, {0, "q2", -1});
  pick(fig, {1, "q1", -1}, {1, "q3", -1});
  pick(fig, {2, "q6", 1}, {2, "q11", 1});
  CHECK(check_strategy(ag.game, ag.initial, fig));
  CHECK(visited(a, ag, fig) == fig4_states);

  // Deviating at the first choice loses.
  auto bad = fig;
  pick(bad, {0, "q1", -1}, {0, "q3", -1});
  CHECK_FALSE(check_strategy(ag.game, ag.initial, bad));
}

TEST_CASE("solver agrees with strategy enumeration")
{
  std::mt19937 rng(31);
  int games = 0;
  for (int trial = 0; trial < 600; ++trial)
    {
      const auto g = oracle::random_game(rng, 1 + rng() % 7, 3, 3);
      REQUIRE(g.rank_violations().empty());
      const auto sol = solve(g);
      const auto sig = signature(g);
      CHECK(check_signature(g, sig));
      for (std::size_t p = 0; p < g.size(); ++p)
        {
          const auto expected = oracle::brute_winner(g, p);
          CHECK(sol.winner[p] == expected);
          // Determinacy: the loser's strategy never wins.
          const auto& mine = expected == Player::P1 ? sol.strategy_p1 : sol.strategy_p2;
          const auto& theirs = expected == Player::P1 ? sol.strategy_p2 : sol.strategy_p1;
          CHECK(check_strategy(g, p, mine));
          CHECK_FALSE(check_strategy(g, p, theirs));
          CHECK(sig[p].has_value() == (expected == Player::P1));
          const auto local = solve(g, p);
          CHECK(local.winner == expected);
          CHECK(check_strategy(g, p, local.strategy));
        }
      ++games;
    }
  CHECK(games == 600);
}

TEST_CASE("signature checker rejects broken assignments")
{
  WeakGame g;
  g.add(Player::P1, 1);
  g.add(Player::P2, 0);
  g.succ[0] = {1};
  auto sig = signature(g);
  CHECK(check_signature(g, sig));
  // An odd-rank self loop cannot carry a signature.
  g.succ[0] = {0};
  CHECK_FALSE(check_signature(g, {0, 0}));
}

TEST_CASE("DOT export marks owners")
{
  WeakGame g;
  g.add(Player::P1, 0, "p");
  g.add(Player::P2, 0, "q");
  g.succ[0] = {1};
  const auto dot = to_dot(g);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("box") != std::string::npos);
  CHECK(dot.find("ellipse") != std::string::npos);
}
