#pragma once

// D-ary Package-Merge for the Coin Collector's problem: choose a minimum
// weight set of coins, each of width D^-e, whose widths sum to a target.
//
// The engine walks width classes from the smallest width upward. In each
// class the live elements (coins of that width merged with packages carried
// from the class below) are ordered by weight, ties going to the higher rank.
// A coin's rank is its id; packages rank below every coin and below every
// earlier package. The class's base-D digit of the remaining target decides
// how many elements are selected outright; the rest are bundled D at a time
// into packages of the next width, and fewer than D leftovers are dropped.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bhc/model.hpp"
#include "bhc/rational.hpp"

namespace bhc {

struct Coin {
  std::int64_t id = 0;  // unique, >= 0
  int exponent = 0;     // width D^-exponent
  Rational weight = 0;

  WidthValue width(Radix radix) const { return WidthValue::power(exponent, radix); }
};

struct CoinInstance {
  Radix radix{2};
  std::vector<Coin> coins;
  WidthValue total_width = WidthValue::zero(Radix{2});
};

struct CoinSolution {
  std::vector<std::int64_t> selected;  // ascending ids
  Rational weight = 0;
};

/// Aggregates of a node or coin set S: total weight, total width, number of
/// members in the middle class and total width of members in the high class.
struct PackageAttr {
  Rational mu = 0;
  WidthValue rho = WidthValue::zero(Radix{2});
  std::int64_t nu = 0;
  WidthValue psi = WidthValue::zero(Radix{2});

  friend bool operator==(const PackageAttr&, const PackageAttr&) = default;
};

enum class NodeClass { Low, Mid, High };

namespace detail {

template <class Int>
std::size_t to_size(const Int& v) {
  if constexpr (std::is_integral_v<Int>) {
    return static_cast<std::size_t>(v);
  } else {
    return v.template convert_to<std::size_t>();
  }
}

template <class Int>
Int int_pow(int base, int exponent) {
  Int r = 1;
  for (int k = 0; k < exponent; ++k) r *= base;
  return r;
}

/// scaled * D^-exponent with scaled not divisible by D (or zero).
template <class Int>
struct Target {
  Int scaled = 0;
  int exponent = 0;

  bool is_zero() const { return scaled == 0; }

  void normalize(int radix) {
    if (scaled == 0) {
      exponent = 0;
      return;
    }
    while (scaled % radix == 0) {
      scaled /= radix;
      --exponent;
    }
  }

  static Target from(const WidthValue& w) {
    Target t;
    t.scaled = Int(w.scaled());
    t.exponent = w.exponent();
    return t;
  }
};

template <class Int, class Payload>
struct Element {
  Int weight;
  std::int64_t rank;
  Payload payload;
};

template <class Int, class Payload>
bool precedes(const Element<Int, Payload>& a, const Element<Int, Payload>& b) {
  if (a.weight != b.weight) return a.weight < b.weight;
  return a.rank > b.rank;
}

struct ClassTrace {
  int exponent;
  std::size_t live;      // elements in the class after merging
  std::size_t selected;  // elements taken whole (the target's digit)
  std::size_t packaged;  // packages carried to the next class
};

struct EngineStats {
  std::size_t peak_live = 0;
  std::size_t packages = 0;
  bool trace_classes = false;
  std::vector<ClassTrace> classes;
};

/// Runs Package-Merge. Returns false when no subset reaches the target.
///
/// Source:  empty(), top_exponent(), next_exponent_below(e) -> optional<int>,
///          emit(e, sink) calling sink(weight, id, key) in class order.
/// Policy:  leaf(key, e) -> Payload, combine(span<Element>, e) -> Payload,
///          select(const Element&, e).
template <class Int, class Source, class Policy>
bool package_merge(Source& source, Target<Int> target, int radix, Policy& policy,
                   EngineStats* stats = nullptr) {
  using Payload = typename Policy::Payload;
  using Elem = Element<Int, Payload>;

  target.normalize(radix);
  if (target.is_zero()) return true;
  if (source.empty()) return false;

  int e = source.top_exponent();
  std::vector<Elem> coins, carried, live, next;
  std::int64_t package_rank = -1;
  const std::size_t d_size = static_cast<std::size_t>(radix);

  while (true) {
    coins.clear();
    source.emit(e, [&](Int weight, std::int64_t id, std::uint64_t key) {
      coins.push_back(Elem{std::move(weight), id, policy.leaf(key, e)});
    });
    live.clear();
    live.reserve(coins.size() + carried.size());
    std::merge(coins.begin(), coins.end(), carried.begin(), carried.end(),
               std::back_inserter(live), precedes<Int, Payload>);
    if (stats) stats->peak_live = std::max(stats->peak_live, live.size());

    if (live.empty()) {
      auto below = source.next_exponent_below(e);
      if (!below) return false;
      e = *below;
      if (target.exponent > e) return false;
      continue;
    }
    // The smallest remaining width exceeds the target's lowest digit.
    if (target.exponent > e) return false;

    std::size_t pos = 0;
    if (target.exponent == e) {
      const Int digit = target.scaled % radix;
      const std::size_t take = to_size(digit);
      if (take > live.size()) return false;
      for (; pos < take; ++pos) policy.select(live[pos], e);
      target.scaled -= digit;
      target.scaled /= radix;
      --target.exponent;
      target.normalize(radix);
      if (stats && stats->trace_classes) stats->classes.push_back({e, live.size(), take, 0});
      if (target.is_zero()) return true;
    } else if (stats && stats->trace_classes) {
      stats->classes.push_back({e, live.size(), 0, 0});
    }

    next.clear();
    for (; pos + d_size <= live.size(); pos += d_size) {
      std::span<const Elem> members(live.data() + pos, d_size);
      Int w = members[0].weight;
      for (std::size_t k = 1; k < d_size; ++k) w += members[k].weight;
      next.push_back(Elem{std::move(w), package_rank--, policy.combine(members, e)});
    }
    if (stats) {
      stats->packages += next.size();
      if (stats->trace_classes) stats->classes.back().packaged = next.size();
    }
    carried.swap(next);
    --e;
  }
}

/// Keeps package membership so the selected coins can be listed afterwards.
/// Payload is a coin key, or a package index with the top bit set.
struct MembershipPolicy {
  using Payload = std::uint64_t;
  static constexpr Payload kPackageBit = Payload{1} << 63;

  std::vector<std::size_t> package_first_child;
  std::vector<Payload> children;
  std::vector<Payload> selected;

  Payload leaf(std::uint64_t key, int) { return key; }

  template <class Elem>
  Payload combine(std::span<const Elem> members, int) {
    package_first_child.push_back(children.size());
    for (const auto& m : members) children.push_back(m.payload);
    return (package_first_child.size() - 1) | kPackageBit;
  }

  template <class Elem>
  void select(const Elem& el, int) {
    selected.push_back(el.payload);
  }

  /// Calls f(key) for every coin inside the selected elements.
  template <class F>
  void for_each_selected_coin(std::size_t radix, F&& f) const {
    std::vector<Payload> stack(selected.begin(), selected.end());
    while (!stack.empty()) {
      const Payload p = stack.back();
      stack.pop_back();
      if (p & kPackageBit) {
        const std::size_t first = package_first_child[p & ~kPackageBit];
        for (std::size_t k = 0; k < radix; ++k) stack.push_back(children[first + k]);
      } else {
        f(p);
      }
    }
  }
};

/// Keeps only (nu, psi) per element; mu is the element weight and rho its width.
template <class Int>
struct AttributePolicy {
  struct Payload {
    std::int64_t nu = 0;
    Int psi = 0;
  };

  int radix;
  int unit_exponent;  // psi and rho are counted in units of D^-unit_exponent
  std::function<NodeClass(std::uint64_t key, int exponent)> classify;

  Int mu = 0;
  Int rho = 0;
  std::int64_t nu = 0;
  Int psi = 0;

  std::map<int, Int> unit_cache{};

  const Int& units_of(int exponent) {
    auto it = unit_cache.find(exponent);
    if (it == unit_cache.end())
      it = unit_cache.emplace(exponent, int_pow<Int>(radix, unit_exponent - exponent)).first;
    return it->second;
  }

  Payload leaf(std::uint64_t key, int e) {
    switch (classify(key, e)) {
      case NodeClass::Low: return {0, Int(0)};
      case NodeClass::Mid: return {1, Int(0)};
      case NodeClass::High: return {0, units_of(e)};
    }
    return {};
  }

  template <class Elem>
  Payload combine(std::span<const Elem> members, int) {
    Payload p;
    for (const auto& m : members) {
      p.nu += m.payload.nu;
      p.psi += m.payload.psi;
    }
    return p;
  }

  template <class Elem>
  void select(const Elem& el, int e) {
    mu += el.weight;
    rho += units_of(e);
    nu += el.payload.nu;
    psi += el.payload.psi;
  }
};

/// Coins of a CoinInstance bucketed by exponent, each bucket in class order.
template <class Int>
class BucketSource {
 public:
  struct Entry {
    Int weight;
    std::int64_t id;
    std::uint64_t key;
  };

  void add(int exponent, Int weight, std::int64_t id, std::uint64_t key) {
    buckets_[exponent].push_back(Entry{std::move(weight), id, key});
  }

  void finalize() {
    for (auto& [e, bucket] : buckets_) {
      auto order = [](const Entry& a, const Entry& b) {
        if (a.weight != b.weight) return a.weight < b.weight;
        return a.id > b.id;
      };
      if (!std::is_sorted(bucket.begin(), bucket.end(), order))
        std::sort(bucket.begin(), bucket.end(), order);
    }
  }

  bool empty() const { return buckets_.empty(); }
  int top_exponent() const { return buckets_.rbegin()->first; }
  std::optional<int> next_exponent_below(int e) const {
    auto it = buckets_.lower_bound(e);
    if (it == buckets_.begin()) return std::nullopt;
    return std::prev(it)->first;
  }

  template <class Sink>
  void emit(int e, Sink&& sink) const {
    auto it = buckets_.find(e);
    if (it == buckets_.end()) return;
    for (const auto& c : it->second) sink(c.weight, c.id, c.key);
  }

 private:
  std::map<int, std::vector<Entry>> buckets_;
};

/// Integer image of a CoinInstance: weights over a common denominator.
struct ScaledCoins {
  std::vector<BigInt> weights;
  BigInt denominator = 1;
  BigInt weight_bound = 0;  // sum of |weights|
  int unit_exponent = 0;    // widths in units of D^-unit_exponent
  BigInt width_bound = 0;   // all coin widths plus the target, in those units
};

inline ScaledCoins scale_instance(const CoinInstance& inst) {
  ScaledCoins s;
  std::vector<std::int64_t> ids;
  ids.reserve(inst.coins.size());
  s.unit_exponent = inst.total_width.exponent();
  for (const auto& c : inst.coins) {
    if (c.id < 0) throw InvalidArgument("coin ids must be nonnegative");
    ids.push_back(c.id);
    s.denominator = lcm(s.denominator, denominator_of(c.weight));
    s.unit_exponent = std::max(s.unit_exponent, c.exponent);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw InvalidArgument("coin ids must be unique");
  const BigInt d = inst.radix.value();
  for (const auto& c : inst.coins) {
    BigInt w = numerator_of(c.weight) * (s.denominator / denominator_of(c.weight));
    s.weight_bound += abs(w);
    s.weights.push_back(std::move(w));
    s.width_bound += ipow(d, s.unit_exponent - c.exponent);
  }
  s.width_bound += inst.total_width.in_units(s.unit_exponent);
  return s;
}

constexpr std::int64_t kInt64Headroom = std::int64_t{1} << 61;

inline bool int64_is_enough(const BigInt& weight_bound, const BigInt& width_bound) {
  return weight_bound < kInt64Headroom && width_bound < kInt64Headroom;
}

template <class Int>
BucketSource<Int> bucket_instance(const CoinInstance& inst, const ScaledCoins& s) {
  BucketSource<Int> src;
  for (std::size_t k = 0; k < inst.coins.size(); ++k)
    src.add(inst.coins[k].exponent, Int(s.weights[k]), inst.coins[k].id, k);
  src.finalize();
  return src;
}

template <class Int>
CoinSolution cc_solve_as(const CoinInstance& inst, const ScaledCoins& s, EngineStats* stats) {
  auto src = bucket_instance<Int>(inst, s);
  MembershipPolicy policy;
  if (!package_merge<Int>(src, Target<Int>::from(inst.total_width), inst.radix.value(), policy,
                          stats))
    throw Infeasible("no subset of the coins has the requested total width");
  CoinSolution sol;
  BigInt total = 0;
  policy.for_each_selected_coin(static_cast<std::size_t>(inst.radix.value()),
                                [&](std::uint64_t key) {
                                  sol.selected.push_back(inst.coins[key].id);
                                  total += s.weights[key];
                                });
  std::sort(sol.selected.begin(), sol.selected.end());
  sol.weight = Rational(total, s.denominator);
  return sol;
}

template <class Int>
PackageAttr cc_solve_tracked_as(const CoinInstance& inst, const ScaledCoins& s,
                                const std::function<NodeClass(const Coin&)>& classifier) {
  auto src = bucket_instance<Int>(inst, s);
  AttributePolicy<Int> policy{inst.radix.value(), s.unit_exponent,
                              [&](std::uint64_t key, int) { return classifier(inst.coins[key]); }};
  if (!package_merge<Int>(src, Target<Int>::from(inst.total_width), inst.radix.value(), policy))
    throw Infeasible("no subset of the coins has the requested total width");
  PackageAttr a;
  a.mu = Rational(BigInt(policy.mu), s.denominator);
  a.rho = WidthValue(BigInt(policy.rho), s.unit_exponent, inst.radix);
  a.nu = policy.nu;
  a.psi = WidthValue(BigInt(policy.psi), s.unit_exponent, inst.radix);
  return a;
}

}  // namespace detail

/// Minimum-weight coin subset with widths summing exactly to total_width.
/// Throws Infeasible when no such subset exists.
inline CoinSolution cc_solve(const CoinInstance& inst, detail::EngineStats* stats = nullptr) {
  const auto s = detail::scale_instance(inst);
  if (detail::int64_is_enough(s.weight_bound, s.width_bound))
    return detail::cc_solve_as<std::int64_t>(inst, s, stats);
  return detail::cc_solve_as<BigInt>(inst, s, stats);
}

/// Same selection as cc_solve, reporting only the aggregate attributes.
inline PackageAttr cc_solve_tracked(const CoinInstance& inst,
                                    const std::function<NodeClass(const Coin&)>& classifier) {
  const auto s = detail::scale_instance(inst);
  if (detail::int64_is_enough(s.weight_bound, s.width_bound))
    return detail::cc_solve_tracked_as<std::int64_t>(inst, s, classifier);
  return detail::cc_solve_tracked_as<BigInt>(inst, s, classifier);
}

}  // namespace bhc
