#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tropic/algebra.hpp"
#include "tropic/hashing.hpp"

namespace tropic {

enum class Turn : std::uint8_t { player, opponent };

constexpr Turn flipped(Turn t) { return t == Turn::player ? Turn::opponent : Turn::player; }

/// Game syntax: whose move it is at each position and which positions a move
/// can reach, as an ordered sequence. A position is terminal exactly when its
/// successor sequence is empty. Arenas are presented intensionally — turn and
/// succ are pure functions — because interesting arenas (parsing) are far too
/// large to materialize.
template <class P>
struct Arena {
  using position_type = P;

  std::function<Turn(P const&)> turn;
  std::function<std::vector<P>(P const&)> succ;
};

/// A syntax plus a meaning: the algebra combining subgame values and the
/// payoff assigned to terminal positions. payoff must be total on terminal
/// positions; it is never queried elsewhere.
template <class P, class V>
struct GameInstance {
  using position_type = P;
  using value_type = V;

  Arena<P> arena;
  Algebra<V> algebra;
  std::function<V(P const&)> payoff;
};

/// A plan of play: deterministic at player positions (one chosen successor
/// index), implicitly complete at opponent positions (which therefore never
/// appear as keys).
template <class P>
using Strategy = std::unordered_map<P, std::size_t>;

template <class P>
bool is_terminal(Arena<P> const& a, P const& pos) {
  return a.succ(pos).empty();
}

/// Same positions and moves, turn flipped everywhere. An involution.
template <class P>
Arena<P> dual(Arena<P> const& a) {
  auto turn = a.turn;
  return Arena<P>{
      [turn](P const& p) { return flipped(turn(p)); },
      a.succ,
  };
}

template <class P>
struct ReachResult {
  std::unordered_set<P> positions;
  bool truncated = false;  ///< the node budget ran out before closure
};

/// Reflexive-transitive successor closure from `from`, exploring at most
/// `budget` distinct positions. Running out of budget flags the result as
/// partial rather than failing.
template <class P>
ReachResult<P> reachable(Arena<P> const& a, P const& from, std::size_t budget) {
  if (budget == 0) throw std::invalid_argument("reachable: budget must be >= 1");
  ReachResult<P> r;
  std::deque<P> frontier;
  r.positions.insert(from);
  frontier.push_back(from);
  while (!frontier.empty()) {
    P pos = frontier.front();
    frontier.pop_front();
    for (auto const& next : a.succ(pos)) {
      if (r.positions.contains(next)) continue;
      if (r.positions.size() >= budget) {
        r.truncated = true;
        return r;
      }
      r.positions.insert(next);
      frontier.push_back(next);
    }
  }
  return r;
}

/// True iff every explored move connects positions of different turns.
/// Exploration stops at `budget` distinct positions, so on truncated arenas
/// this is a statement about the explored region only.
template <class P>
bool is_alternate_turn(Arena<P> const& a, P const& from, std::size_t budget) {
  if (budget == 0) throw std::invalid_argument("is_alternate_turn: budget must be >= 1");
  std::unordered_set<P> seen{from};
  std::deque<P> frontier{from};
  while (!frontier.empty()) {
    P pos = frontier.front();
    frontier.pop_front();
    Turn t = a.turn(pos);
    for (auto const& next : a.succ(pos)) {
      if (a.turn(next) == t) return false;
      if (seen.contains(next) || seen.size() >= budget) continue;
      seen.insert(next);
      frontier.push_back(next);
    }
  }
  return true;
}

/// A position of a collapsed arena: the original position plus the turn it
/// plays under after same-turn chains were spliced out.
template <class P>
struct TurnTagged {
  P pos;
  Turn turn;

  friend bool operator==(TurnTagged const& a, TurnTagged const& b) {
    return a.turn == b.turn && a.pos == b.pos;
  }
};

/// Collapses every chain of consecutive same-turn moves into single moves, so
/// the result is alternate-turn by construction. Evaluation is preserved
/// because both operations are associative: a fold of folds flattens.
/// Same-turn chains longer than `depth_budget` are treated as evidence of a
/// non-terminating collapse and rejected.
template <class P>
Arena<TurnTagged<P>> alternate_turn_transform(Arena<P> const& a, std::size_t depth_budget = 64) {
  auto turn = a.turn;
  auto succ = a.succ;
  auto frontier = [turn, succ, depth_budget](P const& from) {
    // First different-turn-or-terminal descendants along same-turn chains,
    // in left-to-right order.
    std::vector<P> out;
    Turn t = turn(from);
    struct Item {
      P pos;
      std::size_t depth;
    };
    std::vector<Item> stack;
    auto push_children = [&](P const& p, std::size_t depth) {
      auto kids = succ(p);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, depth});
    };
    push_children(from, 1);
    while (!stack.empty()) {
      Item item = stack.back();
      stack.pop_back();
      if (item.depth > depth_budget)
        throw std::runtime_error("alternate_turn_transform: same-turn chain exceeds depth budget");
      if (turn(item.pos) != t || succ(item.pos).empty()) {
        out.push_back(item.pos);
      } else {
        push_children(item.pos, item.depth + 1);
      }
    }
    return out;
  };

  Arena<TurnTagged<P>> out;
  out.turn = [](TurnTagged<P> const& p) { return p.turn; };
  out.succ = [frontier, succ](TurnTagged<P> const& p) {
    std::vector<TurnTagged<P>> next;
    if (succ(p.pos).empty()) return next;
    for (auto const& f : frontier(p.pos)) next.push_back(TurnTagged<P>{f, flipped(p.turn)});
    return next;
  };
  return out;
}

template <class P>
TurnTagged<P> tagged_root(Arena<P> const& a, P const& root) {
  return TurnTagged<P>{root, a.turn(root)};
}

/// Lifts a whole game through the alternate-turn transform; payoffs carry over.
template <class P, class V>
GameInstance<TurnTagged<P>, V> alternate_turn_transform(GameInstance<P, V> const& g,
                                                        std::size_t depth_budget = 64) {
  GameInstance<TurnTagged<P>, V> out;
  out.arena = alternate_turn_transform(g.arena, depth_budget);
  out.algebra = g.algebra;
  auto payoff = g.payoff;
  out.payoff = [payoff](TurnTagged<P> const& p) { return payoff(p.pos); };
  return out;
}

}  // namespace tropic

template <class P>
struct std::hash<tropic::TurnTagged<P>> {
  std::size_t operator()(tropic::TurnTagged<P> const& p) const {
    return tropic::hash_mix_value(static_cast<std::size_t>(p.turn), p.pos);
  }
};
