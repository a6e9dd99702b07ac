#include <dw/error.hh>
#include <dw/word.hh>

#include <doctest.h>

#include <random>
#include <set>

using namespace dw;

namespace
{
  const Alphabet ab({"a", "b"});

  // Counts set partitions of n elements by growing them one element at a time.
  std::uint64_t count_partitions(unsigned n)
  {
    std::vector<std::vector<unsigned>> rows{{}};
    for (unsigned i = 0; i < n; ++i)
      {
        std::vector<std::vector<unsigned>> next;
        for (const auto& r : rows)
          {
            const unsigned used = r.empty() ? 0 : *std::max_element(r.begin(), r.end()) + 1;
            for (unsigned c = 0; c <= used; ++c)
              {
                auto s = r;
                s.push_back(c);
                next.push_back(s);
              }
          }
        rows = std::move(next);
      }
    return rows.size();
  }

  ErrorCode code_of(auto&& f)
  {
    try
      {
        f();
      }
    catch (const Error& e)
      {
        return e.code();
      }
    FAIL("no error raised");
    return ErrorCode::SyntaxError;
  }
}

TEST_CASE("make_data_word builds the running example")
{
  const auto w = make_data_word(ab, {"a", "a", "b"}, {{0, 2}, {1}});
  CHECK(w.length() == 3);
  CHECK(w.letter(0) == 0);
  CHECK(w.letter(2) == 1);
  CHECK(w.same_class(0, 2));
  CHECK_FALSE(w.same_class(1, 0));
  CHECK_FALSE(w.same_class(1, 2));
  CHECK(w.num_classes() == 2);
  CHECK(w.classes() == std::vector<std::uint32_t>{0, 1, 0});
}

TEST_CASE("make_data_word edge cases")
{
  const auto w = make_data_word(ab, {"a"}, {{0}});
  CHECK(w.length() == 1);
  CHECK(w.num_classes() == 1);

  CHECK(code_of([] { make_data_word(ab, {"a", "b"}, {{0}, {1}, {0}}); }) ==
        ErrorCode::NotAPartition);
  CHECK(code_of([] { make_data_word(ab, {"a", "b"}, {{0}}); }) == ErrorCode::NotAPartition);
  CHECK(code_of([] { make_data_word(ab, {}, {}); }) == ErrorCode::EmptyWord);
  CHECK(code_of([] { make_data_word(ab, {"c"}, {{0}}); }) == ErrorCode::UnknownLetter);
}

TEST_CASE("same_class range checks")
{
  const auto w = make_data_word(ab, {"a", "b"}, {{0, 1}});
  CHECK(w.same_class(1, 1));
  CHECK(code_of([&] { (void)w.same_class(0, 2); }) == ErrorCode::PositionOutOfRange);
}

TEST_CASE("canonical block order does not depend on input order")
{
  const auto u = make_data_word(ab, {"a", "a", "b"}, {{1}, {2, 0}});
  const auto v = make_data_word(ab, {"a", "a", "b"}, {{0, 2}, {1}});
  CHECK(u == v);
  const auto again = make_data_word(ab, {"a", "a", "b"},
                                    [&] {
                                      std::vector<std::vector<std::size_t>> b;
                                      for (const auto& blk : u.blocks())
                                        b.push_back(blk);
                                      return b;
                                    }());
  CHECK(again == u);
}

TEST_CASE("text round trip")
{
  const auto w = parse_data_word("a a b ; 0 2 | 1", ab);
  CHECK(w == make_data_word(ab, {"a", "a", "b"}, {{0, 2}, {1}}));
  CHECK(parse_data_word(format_data_word(w, ab), ab) == w);
  CHECK(code_of([] { parse_data_word("a b ; 0 1 | 1", ab); }) == ErrorCode::NotAPartition);
  CHECK(code_of([] { parse_data_word("a z ; 0 | 1", ab); }) == ErrorCode::UnknownLetter);
}

TEST_CASE("enumeration counts")
{
  std::size_t n = 0;
  for_each_data_word(2, 1, [&](const DataWord&) { ++n; });
  CHECK(n == 2);
  n = 0;
  for_each_data_word(2, 2, [&](const DataWord&) { ++n; });
  CHECK(n == 10);
  n = 0;
  for_each_data_word(2, 3, [&](const DataWord&) { ++n; }, 3);
  CHECK(n == 40);
  n = 0;
  for_each_data_word(2, 4, [&](const DataWord&) { ++n; });
  CHECK(n == 290);
}

TEST_CASE("enumeration matches |sigma|^L * Bell(L) and yields each word once")
{
  for (std::size_t sigma = 1; sigma <= 3; ++sigma)
    for (unsigned len = 1; len <= 5; ++len)
      {
        std::set<std::pair<std::vector<Letter>, std::vector<std::uint32_t>>> seen;
        std::size_t n = 0;
        for_each_data_word(
          sigma, len,
          [&](const DataWord& w) {
            ++n;
            seen.emplace(w.letters(), w.classes());
          },
          len);
        std::uint64_t strings = 1;
        for (unsigned i = 0; i < len; ++i)
          strings *= sigma;
        CHECK(n == strings * count_partitions(len));
        CHECK(seen.size() == n);
        CHECK(bell_number(len) == count_partitions(len));
      }
}

TEST_CASE("enumeration order: length, then string, then partition")
{
  std::vector<DataWord> all;
  for_each_data_word(2, 3, [&](const DataWord& w) { all.push_back(w); });
  for (std::size_t i = 1; i < all.size(); ++i)
    {
      const auto& p = all[i - 1];
      const auto& q = all[i];
      const auto key = [](const DataWord& w) {
        return std::tuple(w.length(), w.letters(), w.classes());
      };
      CHECK(key(p) < key(q));
    }
}

TEST_CASE("same_class is an equivalence relation")
{
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial)
    {
      const std::size_t len = 1 + rng() % 7;
      std::vector<Letter> letters(len);
      std::vector<std::uint32_t> cls(len);
      for (std::size_t i = 0; i < len; ++i)
        {
          letters[i] = rng() % 2;
          cls[i] = rng() % 4;
        }
      const DataWord w(letters, cls);
      for (std::size_t i = 0; i < len; ++i)
        {
          CHECK(w.same_class(i, i));
          for (std::size_t j = 0; j < len; ++j)
            {
              CHECK(w.same_class(i, j) == w.same_class(j, i));
              CHECK(w.same_class(i, j) == (cls[i] == cls[j]));
              for (std::size_t k = 0; k < len; ++k)
                if (w.same_class(i, j) && w.same_class(j, k))
                  CHECK(w.same_class(i, k));
            }
        }
    }
}

TEST_CASE("project_string")
{
  const auto w = make_data_word(ab, {"a", "a", "b"}, {{0, 2}, {1}});
  CHECK(project_string(w, {0, 1}) == std::vector<Letter>{0, 0, 1});
  CHECK(project_string(w, {std::nullopt, std::nullopt}).empty());
  CHECK(project_string(w, {std::nullopt, 0}) == std::vector<Letter>{0});
}
