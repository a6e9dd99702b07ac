#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dw
{
  enum class Player : std::uint8_t
  {
    P1 = 1,
    P2 = 2
  };

  inline Player opponent(Player p) { return p == Player::P1 ? Player::P2 : Player::P1; }

  /// Finite game with ranks non-increasing along edges.  Positions are
  /// 0..size()-1.  A play that gets stuck is lost by the owner of the last
  /// position; an infinite play is won by P1 iff its eventual rank is even.
  struct WeakGame
  {
    std::vector<Player> owner;
    std::vector<std::vector<std::size_t>> succ;
    std::vector<unsigned> rank;
    /// Optional display names (DOT export).
    std::vector<std::string> label;

    std::size_t size() const { return owner.size(); }
    std::size_t add(Player p, unsigned r, std::string name = {});
    /// Edges that increase rank, if any.
    std::vector<std::pair<std::size_t, std::size_t>> rank_violations() const;
  };

  struct PositionalStrategy
  {
    Player player = Player::P1;
    /// Chosen successor per position, or -1.
    std::vector<std::int64_t> choice;
  };

  struct GameSolution
  {
    std::vector<Player> winner;
    /// Winning positional strategies; each is defined on its player's
    /// winning region.
    PositionalStrategy strategy_p1;
    PositionalStrategy strategy_p2;
    /// Attractor level inside the position's rank stratum.
    std::vector<std::size_t> level;
  };

  GameSolution solve(const WeakGame& g);

  struct LocalSolution
  {
    Player winner;
    PositionalStrategy strategy;
  };
  LocalSolution solve(const WeakGame& g, std::size_t p);

  /// Whether every complete play from \a p consistent with \a s is won by
  /// s.player.
  bool check_strategy(const WeakGame& g, std::size_t p, const PositionalStrategy& s);

  /// Partial map position -> ordinal; nullopt outside P1's winning region.
  using SignatureAssignment = std::vector<std::optional<std::size_t>>;

  SignatureAssignment signature(const WeakGame& g);
  /// Checks the two consistency conditions (ranks and signatures compared
  /// lexicographically).
  bool check_signature(const WeakGame& g, const SignatureAssignment& alpha);

  /// Box for P1, ellipse for P2; \a highlight edges drawn bold.
  std::string to_dot(const WeakGame& g, const PositionalStrategy* highlight = nullptr);
}
