#pragma once

// Bounded-length coding as a Coin Collector instance.
//
// Node (i, l), l in [l_min+1, l_max], stands for the l-th digit of codeword
// i. It has width D^-l and weight p_i (phi(l-l_min) - phi(l-l_min-1)). A
// minimum-weight node set of total width (n - D^l_min) / (D-1) * D^-l_min
// holds, in every column, the levels l_min+1 .. l_i of an optimal code.
//
// Symbol indices in this module are 0-based positions in the sorted, padded
// weight vector.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bhc/model.hpp"
#include "bhc/packmerge.hpp"
#include "bhc/rational.hpp"

namespace bhc {

struct CodingProblem {
  WeightVector weights;
  Radix radix;
  LengthBounds bounds;
  Penalty penalty;

  static CodingProblem make(std::vector<Rational> caller, Radix radix, LengthBounds bounds,
                            Penalty penalty = Penalty::linear(),
                            std::size_t extra_dummy_blocks = 0) {
    auto wv = WeightVector::from_caller(std::move(caller), radix, extra_dummy_blocks);
    return CodingProblem{std::move(wv), radix, bounds, std::move(penalty)};
  }

  std::size_t n() const noexcept { return weights.n_padded(); }
};

struct SolveResult {
  LengthVector lengths;         // caller order, dummies removed
  LengthVector padded_lengths;  // sorted order, dummies included
  Rational penalty_value = 0;   // sum p_i phi(l_i - l_min)
  Rational nodeset_weight = 0;  // mu(N)
  Rational kraft = 0;           // over real symbols only
  std::size_t dummies = 0;

  friend bool operator==(const SolveResult&, const SolveResult&) = default;
};

/// Throws Infeasible unless D^l_min <= n_padded <= D^l_max.
inline void check_feasible(const CodingProblem& p) {
  const BigInt n = p.n();
  const BigInt d = p.radix.value();
  const BigInt lo = ipow(d, p.bounds.min);
  if (lo > n)
    throw Infeasible("minimum length " + std::to_string(p.bounds.min) + " needs at least " +
                     lo.str() + " symbols at radix " + std::to_string(p.radix.value()) +
                     ", have " + n.str() + " (including dummies)");
  // D^l_max can be astronomically large; stop multiplying once it passes n.
  BigInt hi = 1;
  for (int k = 0; k < p.bounds.max && hi < n; ++k) hi *= d;
  if (hi < n)
    throw Infeasible("maximum length " + std::to_string(p.bounds.max) + " holds at most " +
                     hi.str() + " codewords at radix " + std::to_string(p.radix.value()) +
                     ", need " + n.str());
}

inline Rational node_weight(std::size_t i, int l, const CodingProblem& p) {
  if (i >= p.n() || l <= p.bounds.min || l > p.bounds.max)
    throw InvalidArgument("node (" + std::to_string(i) + ", " + std::to_string(l) +
                          ") is outside the grid");
  const int delta = l - p.bounds.min;
  return p.weights[i] * (penalty_eval(p.penalty, delta, p.bounds.min, p.radix) -
                         penalty_eval(p.penalty, delta - 1, p.bounds.min, p.radix));
}

/// (n - D^l_min) / (D - 1) * D^-l_min.
inline WidthValue total_width(std::size_t n_padded, Radix radix, int l_min) {
  const int d = radix.value();
  if (d > 2 && (n_padded % static_cast<std::size_t>(d - 1)) != 1 % static_cast<std::size_t>(d - 1))
    throw InvalidArgument("total_width: symbol count " + std::to_string(n_padded) +
                          " is not 1 mod " + std::to_string(d - 1));
  const BigInt lo = ipow(BigInt(d), l_min);
  const BigInt n = n_padded;
  if (n < lo)
    throw Infeasible("total_width: " + std::to_string(n_padded) + " symbols are fewer than D^" +
                     std::to_string(l_min));
  return WidthValue((n - lo) / (d - 1), l_min, radix);
}

/// One coin per grid node, width D^-l, id l * n + i.
inline CoinInstance build_instance(const CodingProblem& p) {
  check_feasible(p);
  const auto phi = penalty_table(p.penalty, p.bounds, p.radix);
  CoinInstance inst{p.radix, {}, total_width(p.n(), p.radix, p.bounds.min)};
  inst.coins.reserve(p.n() * static_cast<std::size_t>(p.bounds.span()));
  for (int l = p.bounds.min + 1; l <= p.bounds.max; ++l) {
    const Rational step = phi[l - p.bounds.min] - phi[l - p.bounds.min - 1];
    for (std::size_t i = 0; i < p.n(); ++i) {
      inst.coins.push_back(Coin{static_cast<std::int64_t>(l) * static_cast<std::int64_t>(p.n()) +
                                    static_cast<std::int64_t>(i),
                                l, p.weights[i] * step});
    }
  }
  return inst;
}

/// l_i = l_min + h_i (sorted, padded order).
inline LengthVector recover_lengths(const NodeSet& nodes, const CodingProblem& p) {
  if (nodes.heights.size() != p.n())
    throw InvalidArgument("nodeset has " + std::to_string(nodes.heights.size()) +
                          " columns, problem has " + std::to_string(p.n()));
  LengthVector lengths(nodes.heights.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const int h = nodes.heights[i];
    if (h < 0 || h > p.bounds.span())
      throw std::logic_error("column height out of range at symbol " + std::to_string(i));
    lengths[i] = p.bounds.min + h;
  }
  return lengths;
}

/// Nondecreasing lengths over nonincreasing weights, i.e. a monotone nodeset.
inline bool is_monotone(std::span<const int> padded_lengths) {
  return std::is_sorted(padded_lengths.begin(), padded_lengths.end());
}

namespace detail {

/// Integer node weights: mu(i, l) = symbol[i] * step[l - l_min] / (symbol_den * step_den).
struct ProblemScaling {
  std::vector<Rational> phi;
  std::vector<BigInt> symbol;
  std::vector<BigInt> step;
  BigInt symbol_den = 1;
  BigInt step_den = 1;
  BigInt weight_bound = 0;
  BigInt width_bound = 0;
};

inline ProblemScaling scale_problem(const CodingProblem& p) {
  ProblemScaling s;
  s.phi = penalty_table(p.penalty, p.bounds, p.radix);
  for (const auto& w : p.weights.weights()) s.symbol_den = lcm(s.symbol_den, denominator_of(w));
  s.symbol.reserve(p.n());
  BigInt symbol_sum = 0;
  for (const auto& w : p.weights.weights()) {
    s.symbol.push_back(numerator_of(w) * (s.symbol_den / denominator_of(w)));
    symbol_sum += s.symbol.back();
  }
  std::vector<Rational> steps(s.phi.size(), Rational(0));
  for (std::size_t d = 1; d < s.phi.size(); ++d) {
    steps[d] = s.phi[d] - s.phi[d - 1];
    s.step_den = lcm(s.step_den, denominator_of(steps[d]));
  }
  BigInt step_sum = 0;
  for (const auto& st : steps) {
    s.step.push_back(numerator_of(st) * (s.step_den / denominator_of(st)));
    step_sum += s.step.back();
  }
  s.weight_bound = symbol_sum * step_sum;
  s.width_bound = BigInt(p.n()) * ipow(BigInt(p.radix.value()), p.bounds.span() + 1);
  return s;
}

template <class Int>
struct Grid {
  std::vector<Int> symbol;
  std::vector<Int> step;
  std::size_t n = 0;
  int l_min = 0;

  explicit Grid(const ProblemScaling& s, std::size_t n_padded, int l_min_)
      : n(n_padded), l_min(l_min_) {
    symbol.reserve(s.symbol.size());
    for (const auto& v : s.symbol) symbol.push_back(Int(v));
    for (const auto& v : s.step) step.push_back(Int(v));
  }

  std::uint64_t key(std::size_t i, int l) const {
    return static_cast<std::uint64_t>(l) * n + i;
  }
  std::size_t symbol_of(std::uint64_t key) const { return static_cast<std::size_t>(key % n); }
  int level_of(std::uint64_t key) const { return static_cast<int>(key / n); }
};

/// Nodes [first, first+count) x [lo, hi], emitted in class order: since
/// weights fall with the symbol index, walking symbols downward gives
/// ascending weight with ties to the higher id.
template <class Int>
struct GridSource {
  const Grid<Int>* grid;
  std::size_t first;
  std::size_t count;
  int lo;
  int hi;

  bool empty() const { return count == 0 || lo > hi; }
  int top_exponent() const { return hi; }
  std::optional<int> next_exponent_below(int e) const {
    if (e - 1 >= lo) return std::min(e - 1, hi);
    return std::nullopt;
  }

  template <class Sink>
  void emit(int e, Sink&& sink) const {
    if (e < lo || e > hi) return;
    const Int& factor = grid->step[static_cast<std::size_t>(e - grid->l_min)];
    for (std::size_t k = count; k-- > 0;) {
      const std::size_t i = first + k;
      const std::uint64_t key = grid->key(i, e);
      sink(Int(grid->symbol[i] * factor), static_cast<std::int64_t>(key), key);
    }
  }
};

/// Full-space Package-Merge over a grid region; adds the selected nodes'
/// column counts to `heights`. Returns false when infeasible.
template <class Int>
bool select_region_nodes(const Grid<Int>& grid, std::size_t first, std::size_t count, int lo,
                         int hi, const WidthValue& target, int radix,
                         std::vector<int>& heights, EngineStats* stats = nullptr) {
  GridSource<Int> src{&grid, first, count, lo, hi};
  MembershipPolicy policy;
  if (!package_merge<Int>(src, Target<Int>::from(target), radix, policy, stats)) return false;
  // Columns must be contiguous from `lo`: track count and deepest level.
  std::vector<int> deepest(count, lo - 1);
  std::vector<int> taken(count, 0);
  policy.for_each_selected_coin(static_cast<std::size_t>(radix), [&](std::uint64_t key) {
    const std::size_t k = grid.symbol_of(key) - first;
    ++taken[k];
    deepest[k] = std::max(deepest[k], grid.level_of(key));
  });
  for (std::size_t k = 0; k < count; ++k) {
    if (deepest[k] - lo + 1 != taken[k])
      throw std::logic_error("selected nodes of column " + std::to_string(first + k) +
                             " are not contiguous");
    heights[first + k] += taken[k];
  }
  return true;
}

inline SolveResult finish(const CodingProblem& p, const ProblemScaling& s, const NodeSet& nodes) {
  SolveResult r;
  r.padded_lengths = recover_lengths(nodes, p);
  r.dummies = p.weights.dummies();
  const int span = p.bounds.span();

  std::vector<BigInt> mass_at(static_cast<std::size_t>(span) + 1, BigInt(0));
  std::vector<BigInt> count_at(static_cast<std::size_t>(span) + 1, BigInt(0));
  std::vector<BigInt> real_count_at(static_cast<std::size_t>(span) + 1, BigInt(0));
  for (std::size_t i = 0; i < p.n(); ++i) {
    const auto h = static_cast<std::size_t>(nodes.heights[i]);
    mass_at[h] += s.symbol[i];
    count_at[h] += 1;
    if (i < p.weights.n_real()) real_count_at[h] += 1;
  }

  Rational penalty = 0;
  BigInt nodeset = 0;
  BigInt mass_at_least = 0;
  for (std::size_t h = mass_at.size(); h-- > 0;) {
    penalty += s.phi[h] * mass_at[h];
    mass_at_least += mass_at[h];
    if (h >= 1) nodeset += s.step[h] * mass_at_least;
  }
  r.penalty_value = penalty / s.symbol_den;
  r.nodeset_weight = Rational(nodeset, s.symbol_den * s.step_den);

  const BigInt d = p.radix.value();
  BigInt padded_kraft = 0;
  BigInt real_kraft = 0;
  for (std::size_t h = 0; h < count_at.size(); ++h) {
    const BigInt unit = ipow(d, span - static_cast<int>(h));
    padded_kraft += count_at[h] * unit;
    real_kraft += real_count_at[h] * unit;
  }
  const BigInt full = ipow(d, p.bounds.max);
  if (padded_kraft != full) throw std::logic_error("padded code does not meet Kraft equality");
  r.kraft = Rational(real_kraft, full);

  r.lengths = p.weights.to_caller_order(std::span<const int>(r.padded_lengths));
  return r;
}

template <class Int>
SolveResult solve_full_as(const CodingProblem& p, const ProblemScaling& s,
                          EngineStats* stats) {
  const Grid<Int> grid(s, p.n(), p.bounds.min);
  NodeSet nodes{std::vector<int>(p.n(), 0)};
  if (!select_region_nodes(grid, 0, p.n(), p.bounds.min + 1, p.bounds.max,
                           total_width(p.n(), p.radix, p.bounds.min), p.radix.value(),
                           nodes.heights, stats))
    throw Infeasible("no code satisfies the length bounds");
  return finish(p, s, nodes);
}

}  // namespace detail

/// Optimal code with all lengths in [l_min, l_max]; among optimal monotone
/// codes it has the smallest maximum length. Uses O(n (l_max - l_min)) space.
inline SolveResult solve(const CodingProblem& p, detail::EngineStats* stats = nullptr) {
  check_feasible(p);
  const auto s = detail::scale_problem(p);
  if (detail::int64_is_enough(s.weight_bound, s.width_bound))
    return detail::solve_full_as<std::int64_t>(p, s, stats);
  return detail::solve_full_as<BigInt>(p, s, stats);
}

}  // namespace bhc
