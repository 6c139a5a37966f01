#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropic {

/// Natural numbers extended with +infinity; carrier of the min-plus instance.
/// Addition saturates at infinity (and on unsigned overflow), min treats
/// infinity as the largest element.
class NatInf {
public:
  constexpr NatInf() = default;
  constexpr explicit NatInf(std::uint64_t n) : raw_(n) {}

  static constexpr NatInf infinity() {
    NatInf n;
    n.raw_ = kInf;
    return n;
  }

  constexpr bool is_infinite() const { return raw_ == kInf; }

  /// Finite magnitude; only meaningful when !is_infinite().
  constexpr std::uint64_t finite() const { return raw_; }

  friend constexpr bool operator==(NatInf a, NatInf b) { return a.raw_ == b.raw_; }
  friend constexpr bool operator!=(NatInf a, NatInf b) { return a.raw_ != b.raw_; }
  friend constexpr bool operator<(NatInf a, NatInf b) { return a.raw_ < b.raw_; }
  friend constexpr bool operator<=(NatInf a, NatInf b) { return a.raw_ <= b.raw_; }

  friend constexpr NatInf operator+(NatInf a, NatInf b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    std::uint64_t s = a.raw_ + b.raw_;
    if (s < a.raw_) return infinity();
    NatInf r;
    r.raw_ = s;
    return r;
  }

  std::size_t hash() const { return std::hash<std::uint64_t>{}(raw_); }

private:
  static constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t raw_ = 0;
};

inline std::string to_string(NatInf v) {
  return v.is_infinite() ? "inf" : std::to_string(v.finite());
}

inline std::ostream& operator<<(std::ostream& os, NatInf v) { return os << to_string(v); }

/// Integers extended with -infinity and +infinity; carrier of the min-max
/// instance. Only ordering is defined (the instance needs no arithmetic).
class IntExt {
public:
  constexpr IntExt() = default;
  constexpr explicit IntExt(std::int64_t n) : raw_(n) {}

  static constexpr IntExt neg_infinity() { return IntExt(kNegInf); }
  static constexpr IntExt pos_infinity() { return IntExt(kPosInf); }

  constexpr bool is_neg_infinite() const { return raw_ == kNegInf; }
  constexpr bool is_pos_infinite() const { return raw_ == kPosInf; }
  constexpr std::int64_t value() const { return raw_; }

  friend constexpr bool operator==(IntExt a, IntExt b) { return a.raw_ == b.raw_; }
  friend constexpr bool operator!=(IntExt a, IntExt b) { return a.raw_ != b.raw_; }
  friend constexpr bool operator<(IntExt a, IntExt b) { return a.raw_ < b.raw_; }

  std::size_t hash() const { return std::hash<std::int64_t>{}(raw_); }

private:
  static constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
  static constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();
  std::int64_t raw_ = 0;
};

inline std::string to_string(IntExt v) {
  if (v.is_neg_infinite()) return "-inf";
  if (v.is_pos_infinite()) return "+inf";
  return std::to_string(v.value());
}

inline std::ostream& operator<<(std::ostream& os, IntExt v) { return os << to_string(v); }

/// A carrier with two associative operations: oplus combines alternatives at
/// player positions, otimes accumulates sequences at opponent positions, and
/// otimes must distribute over oplus on both sides. Neutral elements are
/// optional: the pruning evaluator never needs `one`, and `zero` is only used
/// to seed player folds when present.
///
/// The `rational` and `bi_tropical` fields are claims made by whoever builds
/// the instance; check_rationality / check_laws validate them on samples, and
/// the evaluators refuse to prune when the needed claim is absent.
template <class V>
struct Algebra {
  using value_type = V;

  std::string name;
  std::function<V(V const&, V const&)> oplus;
  std::function<V(V const&, V const&)> otimes;
  std::optional<V> zero;  ///< neutral element of oplus, if any
  std::optional<V> one;   ///< neutral element of otimes, if any

  /// x ⊕ (y ⊗ x ⊗ z) = x: the player never prefers a value worsened by
  /// opponent accumulation. Required for one-threshold pruning.
  bool rational = false;
  /// The operation-swapped dual is also a rational tropical algebra.
  /// Required for two-threshold (classic) pruning and the opponent cut rules.
  bool bi_tropical = false;
};

/// The operation-swapped dual. The dual of a bi-tropical algebra is rational;
/// the dual is itself bi-tropical only when the original was both.
template <class V>
Algebra<V> dual(Algebra<V> const& a) {
  Algebra<V> d;
  d.name = a.name + "-dual";
  d.oplus = a.otimes;
  d.otimes = a.oplus;
  d.zero = a.one;
  d.one = a.zero;
  d.rational = a.bi_tropical;
  d.bi_tropical = a.bi_tropical && a.rational;
  return d;
}

/// Min-plus over naturals with +infinity: oplus = min, otimes = saturating
/// addition, zero = +inf, one = 0. Rational but not bi-tropical (min does not
/// distribute over +).
inline Algebra<NatInf> min_plus() {
  Algebra<NatInf> a;
  a.name = "min-plus";
  a.oplus = [](NatInf const& x, NatInf const& y) { return x < y ? x : y; };
  a.otimes = [](NatInf const& x, NatInf const& y) { return x + y; };
  a.zero = NatInf::infinity();
  a.one = NatInf(0);
  a.rational = true;
  a.bi_tropical = false;
  return a;
}

/// Min-max over integers with both infinities: oplus = min, otimes = max.
/// Bi-tropical (min and max distribute over each other), so the classic
/// two-threshold pruning applies.
inline Algebra<IntExt> min_max() {
  Algebra<IntExt> a;
  a.name = "min-max";
  a.oplus = [](IntExt const& x, IntExt const& y) { return x < y ? x : y; };
  a.otimes = [](IntExt const& x, IntExt const& y) { return x < y ? y : x; };
  a.zero = IntExt::pos_infinity();
  a.one = IntExt::neg_infinity();
  a.rational = true;
  a.bi_tropical = true;
  return a;
}

/// Outcome of a law-check run: one entry per law, carrying the first
/// violating sample when a law fails.
template <class V>
struct LawReport {
  struct Entry {
    std::string law;
    bool passed = true;
    std::vector<V> counterexample;  ///< first violating sample; empty when passed
  };

  std::vector<Entry> entries;

  bool all_passed() const {
    for (auto const& e : entries)
      if (!e.passed) return false;
    return true;
  }

  Entry const* first_failure() const {
    for (auto const& e : entries)
      if (!e.passed) return &e;
    return nullptr;
  }
};

namespace detail {

template <class V, std::size_t N, class Pred>
typename LawReport<V>::Entry check_law(std::string law,
                                       std::span<std::array<V, N> const> samples,
                                       Pred&& holds) {
  for (auto const& s : samples) {
    if (!holds(s)) {
      return {std::move(law), false, std::vector<V>(s.begin(), s.end())};
    }
  }
  return {std::move(law), true, {}};
}

}  // namespace detail

/// Checks the four defining laws — associativity of both operations and
/// two-sided distributivity of otimes over oplus — on every sampled triple.
/// When the algebra supplies neutral elements their laws are checked too.
/// Equality is exact carrier equality.
template <class V>
LawReport<V> check_laws(Algebra<V> const& a, std::span<std::array<V, 3> const> samples) {
  if (samples.empty()) throw std::invalid_argument("check_laws: samples must be non-empty");
  auto const& p = a.oplus;
  auto const& t = a.otimes;
  LawReport<V> rep;
  rep.entries.push_back(detail::check_law<V, 3>(
      "oplus-associativity", samples,
      [&](auto const& s) { return p(s[0], p(s[1], s[2])) == p(p(s[0], s[1]), s[2]); }));
  rep.entries.push_back(detail::check_law<V, 3>(
      "otimes-associativity", samples,
      [&](auto const& s) { return t(s[0], t(s[1], s[2])) == t(t(s[0], s[1]), s[2]); }));
  rep.entries.push_back(detail::check_law<V, 3>(
      "left-distributivity", samples,
      [&](auto const& s) { return t(s[0], p(s[1], s[2])) == p(t(s[0], s[1]), t(s[0], s[2])); }));
  rep.entries.push_back(detail::check_law<V, 3>(
      "right-distributivity", samples,
      [&](auto const& s) { return t(p(s[0], s[1]), s[2]) == p(t(s[0], s[2]), t(s[1], s[2])); }));
  if (a.zero) {
    rep.entries.push_back(detail::check_law<V, 3>(
        "zero-neutrality", samples,
        [&](auto const& s) { return p(*a.zero, s[0]) == s[0] && p(s[0], *a.zero) == s[0]; }));
  }
  if (a.one) {
    rep.entries.push_back(detail::check_law<V, 3>(
        "one-neutrality", samples,
        [&](auto const& s) { return t(*a.one, s[0]) == s[0] && t(s[0], *a.one) == s[0]; }));
  }
  return rep;
}

/// Checks x ⊕ (y ⊗ x ⊗ z) = x on every sampled (x, y, z).
template <class V>
LawReport<V> check_rationality(Algebra<V> const& a, std::span<std::array<V, 3> const> samples) {
  if (samples.empty())
    throw std::invalid_argument("check_rationality: samples must be non-empty");
  auto const& p = a.oplus;
  auto const& t = a.otimes;
  LawReport<V> rep;
  rep.entries.push_back(detail::check_law<V, 3>(
      "rationality", samples,
      [&](auto const& s) { return p(s[0], t(t(s[1], s[0]), s[2])) == s[0]; }));
  return rep;
}

/// Checks the insertion identity
///   α ⊕ (β ⊗ x ⊗ y) = α ⊕ (β ⊗ (α ⊕ x) ⊗ y)
/// on every sampled quadruple (x, y, α, β). Holds in every rational tropical
/// algebra; it is what justifies handing a player's accumulator down to a
/// grandchild fold.
template <class V>
LawReport<V> check_insertion(Algebra<V> const& a, std::span<std::array<V, 4> const> samples) {
  if (samples.empty()) throw std::invalid_argument("check_insertion: samples must be non-empty");
  auto const& p = a.oplus;
  auto const& t = a.otimes;
  LawReport<V> rep;
  rep.entries.push_back(detail::check_law<V, 4>(
      "insertion", samples, [&](auto const& s) {
        auto const& x = s[0];
        auto const& y = s[1];
        auto const& al = s[2];
        auto const& be = s[3];
        return p(al, t(t(be, x), y)) == p(al, t(t(be, p(al, x)), y));
      }));
  return rep;
}

/// x is irrelevant for the player w.r.t. α and β when α ⊕ (β ⊗ x) = α: the
/// accumulated β already rules the whole opponent line out, whatever x turns
/// out to be. When α ⊕ β = α this holds for every x.
template <class V>
bool is_irrelevant(Algebra<V> const& a, V const& alpha, V const& beta, V const& x) {
  return a.oplus(alpha, a.otimes(beta, x)) == alpha;
}

}  // namespace tropic

template <>
struct std::hash<tropic::NatInf> {
  std::size_t operator()(tropic::NatInf v) const { return v.hash(); }
};

template <>
struct std::hash<tropic::IntExt> {
  std::size_t operator()(tropic::IntExt v) const { return v.hash(); }
};
