#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tropic/arena.hpp"

namespace tropic {

/// Evaluation effort counters. recursive_calls counts every entry into the
/// evaluator, terminal positions included; expanded_positions counts entries
/// that generated successors.
struct EvalStats {
  std::uint64_t recursive_calls = 0;
  std::uint64_t expanded_positions = 0;
  std::uint64_t cuts = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t memo_entries = 0;
};

/// Strategy extraction policy: one optimal strategy, or all of them.
enum class Policy { first_minimal, all_minimals };

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A cached position value. `exact` means no cut fired anywhere in the
/// subtree that produced it, so the value equals the exhaustive one; anything
/// else is a bound that is only reusable while it stays irrelevant at the
/// querying threshold.
template <class V>
struct MemoEntry {
  V value;
  bool exact = false;
};

template <class P, class V>
using MemoTable = std::unordered_map<P, MemoEntry<V>>;

template <class P>
struct EvalOptions {
  bool prune = false;
  bool memo = false;
  Policy policy = Policy::first_minimal;
  bool collect_strategies = false;
  std::size_t max_strategies = 64;
  std::optional<std::size_t> depth_budget;
  /// When set, only positions satisfying the predicate are memoized
  /// (e.g. the parsing game caches player positions only).
  std::function<bool(P const&)> memo_filter;
};

template <class P, class V>
struct EvalResult {
  V value;
  /// Strategies achieving `value`, when collection was requested: exactly one
  /// under first_minimal, every optimal one (up to the cap) under
  /// all_minimals, the first_minimal strategy always first.
  std::vector<Strategy<P>> strategies;
  bool strategies_truncated = false;
  EvalStats stats;
};

namespace detail {

/// The evaluation engine behind eval_exhaustive / eval_tropical /
/// eval_alpha_beta / eval_memo. One instance owns one evaluation's stats,
/// memo table and traversal state.
template <class P, class V>
class Evaluation {
public:
  enum class Cut {
    none,   // exhaustive fold, no guards
    weak,   // cut when alpha + v ties alpha (the one-threshold guard)
    strict  // cut only when strictly worse: alpha + v = alpha and v != alpha
  };

  struct Outcome {
    V value;
    bool exact;
  };

  Evaluation(GameInstance<P, V> const& game, EvalOptions<P> const& opts,
             MemoTable<P, V>* external_memo)
      : game_(game), opts_(opts), memo_(external_memo ? external_memo : &own_memo_) {}

  EvalStats const& stats() const { return stats_; }
  void finish_stats() { stats_.memo_entries = memo_->size(); }

  Outcome visit(P const& pos, std::optional<V> const& alpha, Cut mode, std::size_t depth) {
    ++stats_.recursive_calls;
    if (opts_.depth_budget && depth > *opts_.depth_budget) {
      throw EvalError("depth budget exceeded along successor path " + path_string());
    }
    bool memoize = opts_.memo && (!opts_.memo_filter || opts_.memo_filter(pos));
    if (memoize) {
      auto it = memo_->find(pos);
      if (it != memo_->end() && reusable(it->second, alpha, mode)) {
        ++stats_.memo_hits;
        return {it->second.value, it->second.exact};
      }
    }
    auto succ = game_.arena.succ(pos);
    Outcome out;
    if (succ.empty()) {
      out = {game_.payoff(pos), true};
    } else {
      ++stats_.expanded_positions;
      out = game_.arena.turn(pos) == Turn::player ? fold_player(succ, alpha, mode, depth)
                                                  : fold_opponent(succ, alpha, mode, depth);
    }
    if (memoize) store(pos, out);
    return out;
  }

  /// Classic two-threshold pruning: thresholds on both sides, guards phrased
  /// through the order derived from oplus (x <= y iff x + y = x).
  V visit_two_threshold(P const& pos, V const& alpha, V const& beta, std::size_t depth) {
    ++stats_.recursive_calls;
    if (opts_.depth_budget && depth > *opts_.depth_budget) {
      throw EvalError("depth budget exceeded along successor path " + path_string());
    }
    auto succ = game_.arena.succ(pos);
    if (succ.empty()) return game_.payoff(pos);
    ++stats_.expanded_positions;
    auto const& a = game_.algebra;
    if (game_.arena.turn(pos) == Turn::player) {
      V v = alpha;
      for (std::size_t i = 0; i < succ.size(); ++i) {
        if (!below(beta, v)) {
          ++stats_.cuts;
          break;
        }
        path_.push_back(i);
        V child = visit_two_threshold(succ[i], v, beta, depth + 1);
        path_.pop_back();
        v = a.oplus(v, child);
      }
      return v;
    }
    V v = beta;
    for (std::size_t i = 0; i < succ.size(); ++i) {
      if (!below(v, alpha)) {
        ++stats_.cuts;
        break;
      }
      path_.push_back(i);
      V child = visit_two_threshold(succ[i], alpha, v, depth + 1);
      path_.pop_back();
      v = a.otimes(v, child);
    }
    return v;
  }

  /// Enumerates the strategies whose restricted-game value is exactly
  /// `target`, in successor order (so the first one is the first-minimal
  /// strategy). `target` must be the exact value of `pos`. Children are
  /// re-examined with strict-cut probes, which keep tied lines alive — the
  /// weak guard cannot tell a tie from a strictly worse line, and ties are
  /// exactly what all_minimals must keep.
  std::vector<Strategy<P>> strategies_for(P const& pos, V const& target, Policy policy,
                                          std::size_t cap, bool& truncated) {
    Cut probe = probe_mode();
    auto succ = game_.arena.succ(pos);
    if (succ.empty()) {
      if (!(game_.payoff(pos) == target))
        throw EvalError("strategy extraction reached a terminal whose payoff misses the target");
      return {Strategy<P>{}};
    }
    std::optional<V> palpha;
    if (probe != Cut::none) palpha = target;

    if (game_.arena.turn(pos) == Turn::player) {
      std::vector<Strategy<P>> all;
      for (std::size_t i = 0; i < succ.size(); ++i) {
        V got = visit(succ[i], palpha, probe, 0).value;
        if (!(got == target)) continue;
        auto subs = strategies_for(succ[i], target, policy, cap, truncated);
        for (auto& s : subs) {
          if (all.size() >= cap) {
            truncated = true;
            return all;
          }
          s.emplace(pos, i);
          all.push_back(std::move(s));
        }
        if (policy == Policy::first_minimal) break;
      }
      if (all.empty())
        throw EvalError(
            "strategy extraction found no successor attaining the node value; "
            "extraction needs oplus to return one of its operands");
      return all;
    }

    // Opponent: every child is kept; rationality makes each factor tie or
    // beat the fold, so strict probes return the children's exact values.
    std::vector<std::vector<Strategy<P>>> parts;
    for (std::size_t i = 0; i < succ.size(); ++i) {
      V child_value = visit(succ[i], palpha, probe, 0).value;
      parts.push_back(strategies_for(succ[i], child_value, policy, cap, truncated));
    }
    return cross_product(parts, cap, truncated);
  }

private:
  bool below(V const& x, V const& y) const {
    // Strict order derived from oplus: x < y iff x + y = x and x != y.
    return game_.algebra.oplus(x, y) == x && !(x == y);
  }

  Cut probe_mode() const { return game_.algebra.rational ? Cut::strict : Cut::none; }

  bool reusable(MemoEntry<V> const& e, std::optional<V> const& alpha, Cut mode) const {
    if (e.exact) return true;
    if (mode == Cut::none || !alpha) return false;
    // A bound stays usable only while it is irrelevant at the querying
    // threshold; strict probes additionally reject tied bounds, which could
    // mask a genuinely attaining line.
    if (!(game_.algebra.oplus(*alpha, e.value) == *alpha)) return false;
    return mode == Cut::weak || !(e.value == *alpha);
  }

  void store(P const& pos, Outcome const& out) {
    auto [it, inserted] = memo_->try_emplace(pos, MemoEntry<V>{out.value, out.exact});
    if (!inserted && !it->second.exact) it->second = MemoEntry<V>{out.value, out.exact};
  }

  Outcome fold_player(std::vector<P> const& succ, std::optional<V> const& alpha, Cut mode,
                      std::size_t depth) {
    auto const& a = game_.algebra;
    V acc;
    bool exact = true;
    std::size_t first = 0;
    if (a.zero) {
      acc = *a.zero;
    } else {
      // No neutral for oplus: unroll the first child, as the opponent loop
      // does for the missing otimes neutral.
      path_.push_back(0);
      Outcome c = visit(succ[0], alpha, mode, depth + 1);
      path_.pop_back();
      acc = c.value;
      exact = exact && c.exact;
      first = 1;
    }
    for (std::size_t i = first; i < succ.size(); ++i) {
      // Never prune at the player's level; children inherit the best
      // threshold seen so far (insertion property keeps this sound).
      std::optional<V> eff;
      if (mode != Cut::none) eff = alpha ? a.oplus(*alpha, acc) : acc;
      path_.push_back(i);
      Outcome c = visit(succ[i], eff, mode, depth + 1);
      path_.pop_back();
      acc = a.oplus(acc, c.value);
      exact = exact && c.exact;
    }
    return {acc, exact};
  }

  Outcome fold_opponent(std::vector<P> const& succ, std::optional<V> const& alpha, Cut mode,
                        std::size_t depth) {
    auto const& a = game_.algebra;
    path_.push_back(0);
    Outcome c0 = visit(succ[0], alpha, mode, depth + 1);
    path_.pop_back();
    V acc = c0.value;
    bool exact = c0.exact;
    bool cut = false;
    for (std::size_t i = 1; i < succ.size(); ++i) {
      if (mode != Cut::none && alpha && guard_fires(*alpha, acc, mode)) {
        ++stats_.cuts;
        cut = true;
        break;
      }
      path_.push_back(i);
      Outcome c = visit(succ[i], alpha, mode, depth + 1);
      path_.pop_back();
      acc = a.otimes(acc, c.value);
      exact = exact && c.exact;
    }
    return {acc, exact && !cut};
  }

  bool guard_fires(V const& alpha, V const& v, Cut mode) const {
    if (!(game_.algebra.oplus(alpha, v) == alpha)) return false;
    return mode == Cut::weak || !(v == alpha);
  }

  static std::optional<Strategy<P>> merge(Strategy<P> const& a, Strategy<P> const& b) {
    Strategy<P> out = a;
    for (auto const& [pos, idx] : b) {
      auto [it, inserted] = out.emplace(pos, idx);
      if (!inserted && it->second != idx) return std::nullopt;  // conflicting choice
    }
    return out;
  }

  static std::vector<Strategy<P>> cross_product(std::vector<std::vector<Strategy<P>>> const& parts,
                                                std::size_t cap, bool& truncated) {
    std::vector<Strategy<P>> acc{Strategy<P>{}};
    for (auto const& part : parts) {
      std::vector<Strategy<P>> next;
      for (auto const& base : acc) {
        for (auto const& s : part) {
          if (next.size() >= cap) {
            truncated = true;
            return next;
          }
          if (auto merged = merge(base, s)) next.push_back(std::move(*merged));
        }
      }
      acc = std::move(next);
    }
    return acc;
  }

  std::string path_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < path_.size(); ++i) os << (i ? " " : "") << path_[i];
    os << "]";
    return os.str();
  }

  GameInstance<P, V> const& game_;
  EvalOptions<P> const& opts_;
  MemoTable<P, V> own_memo_;
  MemoTable<P, V>* memo_;
  EvalStats stats_;
  std::vector<std::size_t> path_;
};

}  // namespace detail

/// General evaluation gateway. With prune off this is the plain fold of
/// payoffs (oplus over player successors, otimes over opponent successors,
/// strictly left to right); with prune on it is the one-threshold pruning
/// procedure, which requires a rational algebra. Strategy collection runs as
/// a post-pass over the exact root value.
template <class P, class V>
EvalResult<P, V> evaluate(GameInstance<P, V> const& game, P const& root,
                          EvalOptions<P> const& opts, MemoTable<P, V>* external_memo = nullptr) {
  using Eval = detail::Evaluation<P, V>;
  if (opts.prune && !game.algebra.rational)
    throw std::invalid_argument("pruning requires a rational algebra; '" + game.algebra.name +
                                "' is not flagged rational");
  Eval ev(game, opts, external_memo);
  auto mode = opts.prune ? Eval::Cut::weak : Eval::Cut::none;
  std::optional<V> alpha;
  if (opts.prune) alpha = game.algebra.zero;
  EvalResult<P, V> res{ev.visit(root, alpha, mode, 0).value, {}, false, {}};
  if (opts.collect_strategies) {
    std::size_t cap = opts.policy == Policy::first_minimal ? 1 : opts.max_strategies;
    res.strategies =
        ev.strategies_for(root, res.value, opts.policy, cap, res.strategies_truncated);
  }
  ev.finish_stats();
  res.stats = ev.stats();
  return res;
}

/// Plain exhaustive game value (no guards, no memo).
template <class P, class V>
EvalResult<P, V> eval_exhaustive(GameInstance<P, V> const& game, P const& root,
                                 std::optional<std::size_t> depth_budget = std::nullopt) {
  EvalOptions<P> o;
  o.depth_budget = depth_budget;
  return evaluate(game, root, o);
}

/// One-threshold pruning with the root threshold chosen by convention: the
/// oplus neutral when the algebra has one, otherwise no threshold at the root
/// (the player fold then unrolls its first child). Either way the returned
/// value equals the exhaustive one.
template <class P, class V>
EvalResult<P, V> eval_tropical(GameInstance<P, V> const& game, P const& root) {
  EvalOptions<P> o;
  o.prune = true;
  return evaluate(game, root, o);
}

/// One-threshold pruning from an explicit caller threshold. The returned
/// value v only promises alpha + v = alpha + exhaustive-value; callers
/// wanting the game value should use the root-convention overload.
template <class P, class V>
EvalResult<P, V> eval_tropical(GameInstance<P, V> const& game, P const& root, V const& alpha) {
  using Eval = detail::Evaluation<P, V>;
  if (!game.algebra.rational)
    throw std::invalid_argument("pruning requires a rational algebra; '" + game.algebra.name +
                                "' is not flagged rational");
  EvalOptions<P> o;
  o.prune = true;
  Eval ev(game, o, nullptr);
  EvalResult<P, V> res{ev.visit(root, alpha, Eval::Cut::weak, 0).value, {}, false, {}};
  ev.finish_stats();
  res.stats = ev.stats();
  return res;
}

/// Classic two-threshold pruning over a bi-tropical algebra, explicit window.
template <class P, class V>
EvalResult<P, V> eval_alpha_beta(GameInstance<P, V> const& game, P const& root, V const& alpha,
                                 V const& beta) {
  using Eval = detail::Evaluation<P, V>;
  if (!game.algebra.bi_tropical)
    throw std::invalid_argument("two-threshold pruning requires a bi-tropical algebra; '" +
                                game.algebra.name + "' is not flagged bi-tropical");
  EvalOptions<P> o;
  Eval ev(game, o, nullptr);
  EvalResult<P, V> res{ev.visit_two_threshold(root, alpha, beta, 0), {}, false, {}};
  ev.finish_stats();
  res.stats = ev.stats();
  return res;
}

/// Two-threshold pruning with the full window (the neutral of each
/// operation); the result equals the exhaustive value.
template <class P, class V>
EvalResult<P, V> eval_alpha_beta(GameInstance<P, V> const& game, P const& root) {
  if (!game.algebra.zero || !game.algebra.one)
    throw std::invalid_argument(
        "full-window two-threshold pruning needs both neutral elements; pass the window "
        "explicitly");
  return eval_alpha_beta(game, root, *game.algebra.zero, *game.algebra.one);
}

/// Memoizing evaluation. Pass an external table to share solved positions
/// across evaluations of the same game.
template <class P, class V>
EvalResult<P, V> eval_memo(GameInstance<P, V> const& game, P const& root, bool prune,
                           Policy policy, MemoTable<P, V>* table = nullptr,
                           std::function<bool(P const&)> memo_filter = nullptr) {
  EvalOptions<P> o;
  o.prune = prune;
  o.memo = true;
  o.policy = policy;
  o.collect_strategies = true;
  o.memo_filter = std::move(memo_filter);
  return evaluate(game, root, o, table);
}

template <class P, class V>
Strategy<P> const& extract_fm(EvalResult<P, V> const& r) {
  if (r.strategies.empty())
    throw EvalError("extract_fm: the evaluation did not collect strategies");
  return r.strategies.front();
}

template <class P, class V>
std::vector<Strategy<P>> const& extract_am(EvalResult<P, V> const& r) {
  if (r.strategies.empty())
    throw EvalError("extract_am: the evaluation did not collect strategies");
  return r.strategies;
}

/// Exhaustively evaluates the game restricted to a strategy's choices: the
/// strategy picks the single successor at player positions, opponents keep
/// all of theirs.
template <class P, class V>
V replay_value(GameInstance<P, V> const& game, P const& root, Strategy<P> const& strat) {
  auto const& a = game.algebra;
  auto rec = [&](auto&& self, P const& pos) -> V {
    auto succ = game.arena.succ(pos);
    if (succ.empty()) return game.payoff(pos);
    if (game.arena.turn(pos) == Turn::player) {
      auto it = strat.find(pos);
      if (it == strat.end()) throw EvalError("replay: strategy undefined at a reached player position");
      if (it->second >= succ.size()) throw EvalError("replay: strategy index out of range");
      return self(self, succ[it->second]);
    }
    V acc = self(self, succ[0]);
    for (std::size_t i = 1; i < succ.size(); ++i) acc = a.otimes(acc, self(self, succ[i]));
    return acc;
  };
  return rec(rec, root);
}

/// Terminal positions reached when playing `strat` from `root`, in
/// depth-first order.
template <class P, class V>
std::vector<P> strategy_leaves(GameInstance<P, V> const& game, P const& root,
                               Strategy<P> const& strat) {
  std::vector<P> out;
  auto rec = [&](auto&& self, P const& pos) -> void {
    auto succ = game.arena.succ(pos);
    if (succ.empty()) {
      out.push_back(pos);
      return;
    }
    if (game.arena.turn(pos) == Turn::player) {
      auto it = strat.find(pos);
      if (it == strat.end()) throw EvalError("strategy_leaves: strategy undefined at a reached player position");
      self(self, succ.at(it->second));
      return;
    }
    for (auto const& next : succ) self(self, next);
  };
  rec(rec, root);
  return out;
}

}  // namespace tropic
