#pragma once

// Exhaustive references for tests. Nothing here is used by the solvers.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

#include "bhc/model.hpp"
#include "bhc/packmerge.hpp"
#include "bhc/solver.hpp"

namespace bhc::oracle {

struct CodeOptimum {
  std::optional<Rational> best;        // empty when no vector is feasible
  std::vector<LengthVector> argmin;    // nondecreasing vectors reaching `best`
};

namespace detail {

// Visits every nondecreasing vector of `n` values in [lo, hi].
inline void for_each_nondecreasing(std::size_t n, int lo, int hi,
                                   const std::function<void(const LengthVector&)>& visit) {
  LengthVector v(n, lo);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int from) {
    if (pos == n) {
      visit(v);
      return;
    }
    for (int l = from; l <= hi; ++l) {
      v[pos] = l;
      rec(pos + 1, l);
    }
  };
  rec(0, lo);
}

inline bool kraft_is_one(const LengthVector& v, int deepest, const BigInt& radix) {
  BigInt acc = 0;
  for (int l : v) acc += boost::multiprecision::pow(radix, static_cast<unsigned>(deepest - l));
  return acc == boost::multiprecision::pow(radix, static_cast<unsigned>(deepest));
}

inline void consider(CodeOptimum& out, const Rational& value, const LengthVector& v) {
  if (!out.best || value < *out.best) {
    out.best = value;
    out.argmin.clear();
  }
  if (value == *out.best) out.argmin.push_back(v);
}

}  // namespace detail

/// Minimum of sum p_i phi(l_i - l_min) over padded length vectors with Kraft
/// sum exactly 1 and l_min <= l_i <= l_max. Weights are sorted nonincreasing,
/// so only nondecreasing vectors need visiting.
inline CodeOptimum brute_force_code(const CodingProblem& p) {
  if (p.n() > 10 || p.bounds.max > 6)
    throw InvalidArgument("brute_force_code: instance too large (n <= 10, l_max <= 6)");
  std::vector<Rational> phi;
  for (int d = 0; d <= p.bounds.span(); ++d)
    phi.push_back(penalty_eval(p.penalty, d, p.bounds.min, p.radix));
  const BigInt radix = p.radix.value();
  CodeOptimum out;
  detail::for_each_nondecreasing(p.n(), p.bounds.min, p.bounds.max, [&](const LengthVector& v) {
    if (!detail::kraft_is_one(v, p.bounds.max, radix)) return;
    Rational value = 0;
    for (std::size_t i = 0; i < v.size(); ++i) value += p.weights[i] * phi[v[i] - p.bounds.min];
    detail::consider(out, value, v);
  });
  return out;
}

/// Minimum of sum p_i phi(l_i) (phi measured from length 0) over padded
/// vectors with Kraft sum exactly 1 and max l_i - min l_i <= max_fringe.
inline CodeOptimum brute_force_fringe(const WeightVector& weights, Radix radix, int max_fringe,
                                      const Penalty& penalty) {
  const std::size_t n = weights.n_padded();
  const int cap = static_cast<int>((n - 1) / static_cast<std::size_t>(radix.value() - 1));
  if (n > 10 || cap > 9) throw InvalidArgument("brute_force_fringe: instance too large");
  std::vector<Rational> phi;
  for (int l = 0; l <= cap; ++l) phi.push_back(penalty_eval(penalty, l, 0, radix));
  const BigInt d = radix.value();
  CodeOptimum out;
  detail::for_each_nondecreasing(n, 0, cap, [&](const LengthVector& v) {
    if (v.back() - v.front() > max_fringe) return;
    if (!detail::kraft_is_one(v, cap, d)) return;
    Rational value = 0;
    for (std::size_t i = 0; i < n; ++i) value += weights[i] * phi[v[i]];
    detail::consider(out, value, v);
  });
  return out;
}

/// Minimum weight over all coin subsets whose widths sum to the target, or
/// nullopt when none does.
inline std::optional<Rational> brute_force_cc(const CoinInstance& inst) {
  const std::size_t m = inst.coins.size();
  if (m > 20) throw InvalidArgument("brute_force_cc: at most 20 coins");
  int unit = inst.total_width.exponent();
  BigInt den = 1;
  for (const auto& c : inst.coins) {
    unit = std::max(unit, c.exponent);
    den = lcm(den, denominator_of(c.weight));
  }
  const BigInt d = inst.radix.value();
  std::vector<BigInt> width(m), weight(m);
  for (std::size_t k = 0; k < m; ++k) {
    width[k] = boost::multiprecision::pow(d, static_cast<unsigned>(unit - inst.coins[k].exponent));
    weight[k] = numerator_of(inst.coins[k].weight) * (den / denominator_of(inst.coins[k].weight));
  }
  const BigInt target = inst.total_width.in_units(unit);

  // Subset sums built from the subset without its lowest member.
  std::vector<BigInt> sum_width(std::size_t{1} << m), sum_weight(std::size_t{1} << m);
  std::optional<BigInt> best;
  for (std::size_t mask = 0; mask < sum_width.size(); ++mask) {
    if (mask != 0) {
      const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
      const std::size_t rest = mask & (mask - 1);
      sum_width[mask] = sum_width[rest] + width[low];
      sum_weight[mask] = sum_weight[rest] + weight[low];
    }
    if (sum_width[mask] == target && (!best || sum_weight[mask] < *best)) best = sum_weight[mask];
  }
  if (!best) return std::nullopt;
  return Rational(*best, den);
}

/// Classic D-ary Huffman code lengths (merge the D lightest repeatedly) for
/// the padded, sorted weights.
inline LengthVector reference_huffman(const WeightVector& weights, Radix radix) {
  const std::size_t n = weights.n_padded();
  if (n == 1) return LengthVector{0};
  BigInt den = 1;
  for (const auto& w : weights.weights()) den = lcm(den, denominator_of(w));

  struct Item {
    BigInt weight;
    std::size_t node;
    bool operator>(const Item& o) const {
      return weight != o.weight ? weight > o.weight : node > o.node;
    }
  };
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<std::size_t> parent(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    heap.push({numerator_of(weights[i]) * (den / denominator_of(weights[i])), i});
  const auto d = static_cast<std::size_t>(radix.value());
  while (heap.size() > 1) {
    const std::size_t node = parent.size();
    parent.push_back(node);  // root points at itself until merged
    BigInt sum = 0;
    for (std::size_t k = 0; k < d; ++k) {
      Item it = heap.top();
      heap.pop();
      sum += it.weight;
      parent[it.node] = node;
    }
    heap.push({sum, node});
  }
  LengthVector lengths(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    int depth = 0;
    for (std::size_t v = i; parent[v] != v; v = parent[v]) ++depth;
    lengths[i] = depth;
  }
  return lengths;
}

}  // namespace bhc::oracle
