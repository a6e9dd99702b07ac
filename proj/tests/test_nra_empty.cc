#include "oracles.hh"

#include <dw/error.hh>
#include <dw/nra_empty.hh>

#include <doctest.h>

#include <set>

using namespace dw;

namespace
{
  const Alphabet ab({"a", "b"});

  RegisterValuation val(std::vector<int> v) { return oracle::valuation(v); }

  RegisterAutomaton one_way_nra(std::mt19937& rng, unsigned registers, std::size_t locs)
  {
    oracle::RaGenOptions o;
    o.locations = locs;
    o.registers = registers;
    o.with_and = false;
    return oracle::random_ra(rng, o);
  }
}

TEST_CASE("abstraction of concrete states")
{
  RegisterAutomaton a;
  a.alphabet = ab;
  a.registers = 1;
  a.add("q");
  const auto w = parse_data_word("a a b ; 0 2 | 1", ab);
  const auto h = abstract_state(a, w, {0, 0, val({0})});
  CHECK(h.letter == 0);
  CHECK_FALSE(h.ee);
  CHECK(h.current_registers() == std::vector<unsigned>{1});
  CHECK(h.equalities() == std::vector<std::pair<unsigned, unsigned>>{{1, 1}});

  const auto last = abstract_state(a, w, {2, 0, val({-1})});
  CHECK(last.letter == 1);
  CHECK(last.ee);
  CHECK(last.current_registers().empty());
  CHECK(last.equalities().empty());

  RegisterAutomaton two = a;
  two.registers = 2;
  const auto h2 = abstract_state(two, w, {1, 0, val({1, 1})});
  CHECK(h2.current_registers() == std::vector<unsigned>{1, 2});
  const auto eq = h2.equalities();
  CHECK(std::find(eq.begin(), eq.end(), std::pair<unsigned, unsigned>{1, 2}) != eq.end());
}

TEST_CASE("abstract successors by transition kind")
{
  const auto top = parse_ra("alphabet: a b\nregisters: 1\ninit: q\nq : true\n");
  AbstractState h;
  h.cls = {-1};
  CHECK(abs_successors(top, h).empty());
  CHECK(abs_winning(top, h));
  CHECK(abs_initial(top, h));

  const auto st = parse_ra("alphabet: a b\nregisters: 1\ninit: q\nq : store1 r\nr : true\n");
  const auto s = abs_successors(st, h);
  REQUIRE(s.size() == 1);
  CHECK(s[0].location == 1);
  CHECK(s[0].current_registers() == std::vector<unsigned>{1});

  const auto nx = parse_ra("alphabet: a b\nregisters: 0\ninit: q\nq : X r\nr : true\n");
  AbstractState h0;
  const auto n = abs_successors(nx, h0);
  std::set<std::pair<Letter, bool>> seen;
  for (const auto& x : n)
    seen.emplace(x.letter, x.ee);
  CHECK(seen.size() == 4);

  h0.ee = true;
  CHECK(abs_successors(nx, h0).empty());

  const auto bad = parse_ra("alphabet: a\nregisters: 0\ninit: q\nq : and r r\nr : true\n");
  try
    {
      abs_successors(bad, h0);
      FAIL("expected ClassMismatch");
    }
  catch (const Error& e)
    {
      CHECK(e.code() == ErrorCode::ClassMismatch);
    }
}

TEST_CASE("abstract edges are sound and complete for concrete steps")
{
  std::mt19937 rng(61);
  for (int trial = 0; trial < 60; ++trial)
    {
      const unsigned n = trial % 3 == 2 ? 2 : rng() % 2;
      const auto a = one_way_nra(rng, n, 2 + rng() % 5);
      std::set<std::pair<AbstractState, AbstractState>> realized;
      std::set<AbstractState> sources;
      for_each_data_word(2, 4, [&](const DataWord& w) {
        for (std::size_t i = 0; i < w.length(); ++i)
          for (Location q = 0; q < a.size(); ++q)
            for (const auto& v : oracle::all_valuations(w, n))
              {
                const oracle::ConcreteState c{i, q, v};
                const auto h = abstract_state(a, w, {i, q, oracle::valuation(v)});
                sources.insert(h);
                const auto abs = abs_successors(a, h);
                for (const auto& d : oracle::concrete_successors(a, w, c))
                  {
                    const auto h2 = abstract_state(a, w, {d.position, d.location,
                                                          oracle::valuation(d.valuation)});
                    realized.emplace(h, h2);
                    CHECK(std::find(abs.begin(), abs.end(), h2) != abs.end());
                  }
              }
      });
      for (const auto& h : sources)
        for (const auto& h2 : abs_successors(a, h))
          CHECK(realized.count({h, h2}) == 1);
    }
}

TEST_CASE("finite-word emptiness examples")
{
  const auto top = parse_ra("alphabet: a b\nregisters: 0\ninit: q\nq : true\n");
  const auto v = nonempty_finite(top);
  CHECK(v.nonempty);
  REQUIRE(v.witness);
  CHECK(v.witness->length() == 1);

  const auto twin = parse_ra("alphabet: a b\nregisters: 1\ninit: p\n"
                             "p : if a then p1 else no\np1 : store1 p2\np2 : X p3\n"
                             "p3 : if a then p4 else no\np4 : if up1 then yes else no\n"
                             "yes : true\nno : false\n");
  const auto t = nonempty_finite(twin);
  CHECK(t.nonempty);
  REQUIRE(t.witness);
  CHECK(*t.witness == make_data_word(ab, {"a", "a"}, {{0, 1}}));
  CHECK(accepts(twin, *t.witness));

  const auto never = parse_ra("alphabet: a b\nregisters: 1\ninit: p\n"
                              "p : if up1 then yes else q\nq : X p\nyes : true\n");
  CHECK_FALSE(nonempty_finite(never).nonempty);
  CHECK_FALSE(oracle::brute_force_witness(never, 4).has_value());
}

TEST_CASE("finite-word emptiness agrees with brute force")
{
  std::mt19937 rng(62);
  int nonempty = 0, empty = 0;
  for (int trial = 0; trial < 120; ++trial)
    {
      const auto a = one_way_nra(rng, rng() % 3, 2 + rng() % 5);
      const auto v = nonempty_finite(a);
      const auto b = oracle::brute_force_witness(a, 5);
      if (v.witness)
        {
          CHECK(oracle::one_way_accepts(a, *v.witness));
          CHECK(accepts(a, *v.witness));
        }
      CHECK(v.nonempty == v.witness.has_value());
      if (b)
        CHECK(v.nonempty);
      if (v.nonempty && v.witness->length() <= 5)
        CHECK(b.has_value());
      // Small random automata have short witnesses when they have any.
      if (v.nonempty)
        CHECK(v.witness->length() <= 5);
      (v.nonempty ? nonempty : empty)++;
    }
  CHECK(nonempty > 10);
  CHECK(empty > 10);
}

TEST_CASE("infinite-word emptiness examples")
{
  const auto loop_even = parse_ra("alphabet: a\nregisters: 0\ninit: q\nq rank=2 : X q\n");
  const auto e = nonempty_infinite(loop_even);
  CHECK(e.nonempty);
  CHECK_FALSE(e.reason.empty());

  const auto loop_odd = parse_ra("alphabet: a\nregisters: 0\ninit: q\nq rank=1 : X q\n");
  CHECK_FALSE(nonempty_infinite(loop_odd).nonempty);

  const auto at_end = parse_ra("alphabet: a b\nregisters: 0\ninit: q\n"
                               "q rank=1 : if end then yes else r\nr rank=1 : X q\n"
                               "yes rank=0 : true\n");
  CHECK(nonempty_finite(at_end).nonempty);
  CHECK_FALSE(nonempty_infinite(at_end).nonempty);

  // A winning state that is not at the end counts.
  const auto first_b = parse_ra("alphabet: a b\nregisters: 0\ninit: q\n"
                                "q rank=1 : if b then yes else r\nr rank=1 : X q\n"
                                "yes rank=0 : true\n");
  CHECK(nonempty_infinite(first_b).nonempty);

  // Even cycle that must keep seeing the stored class again.
  const auto again = parse_ra("alphabet: a\nregisters: 1\ninit: p\n"
                              "p rank=2 : store1 q\nq rank=2 : X r\n"
                              "r rank=2 : if up1 then q else q\n");
  CHECK(nonempty_infinite(again).nonempty);
}

TEST_CASE("abstract graph export")
{
  const auto a = parse_ra("alphabet: a\nregisters: 0\ninit: q\nq rank=2 : X q\n");
  CHECK(abstract_graph_dot(a).find("digraph") != std::string::npos);
}
