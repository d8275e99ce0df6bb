#pragma once

// Optimal code whose longest and shortest codewords differ by at most d:
// one bounded-length solve per candidate maximum length l', with lengths
// confined to [l' - d, l'], keeping the cheapest.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bhc/linspace.hpp"
#include "bhc/model.hpp"
#include "bhc/solver.hpp"

namespace bhc {

struct FringeProblem {
  WeightVector weights;  // padding, including any extra dummy blocks, already applied
  Radix radix;
  int max_fringe = 0;
  Penalty penalty;

  static FringeProblem make(std::vector<Rational> caller, Radix radix, int max_fringe,
                            Penalty penalty = Penalty::linear(),
                            std::size_t extra_dummy_blocks = 0) {
    if (max_fringe < 0) throw InvalidArgument("maximum fringe must be nonnegative");
    auto wv = WeightVector::from_caller(std::move(caller), radix, extra_dummy_blocks);
    return FringeProblem{std::move(wv), radix, max_fringe, std::move(penalty)};
  }
};

struct FringeOptions {
  bool linear_space = true;
};

struct SweepEntry {
  LengthBounds bounds;
  bool feasible = false;
  Rational objective = 0;
};

struct FringeResult {
  SolveResult code;
  LengthBounds bounds;   // the winning [l' - d, l'] (lower end clamped)
  Rational objective = 0;  // sum p_i phi(l_i), phi measured from length 0
  std::vector<SweepEntry> sweep;
};

/// floor(log_D n) and ceil(log_D n) for n >= 1.
inline std::pair<int, int> integer_log_bounds(std::size_t n, Radix radix) {
  const BigInt target = n;
  const BigInt d = radix.value();
  int floor_log = 0;
  BigInt p = 1;
  while (p * d <= target) {
    p *= d;
    ++floor_log;
  }
  return {floor_log, p == target ? floor_log : floor_log + 1};
}

/// sum p_i phi(l_i) over sorted padded lengths, phi taken with l_min = 0.
inline Rational absolute_objective(const WeightVector& weights, std::span<const int> padded,
                                   const Penalty& penalty, Radix radix) {
  Rational total = 0;
  std::vector<std::optional<Rational>> cache;
  for (std::size_t i = 0; i < padded.size(); ++i) {
    if (weights[i] == 0) continue;
    const auto l = static_cast<std::size_t>(padded[i]);
    if (cache.size() <= l) cache.resize(l + 1);
    if (!cache[l]) cache[l] = penalty_eval(penalty, padded[i], 0, radix);
    total += weights[i] * *cache[l];
  }
  return total;
}

inline FringeResult fringe_solve(const FringeProblem& fp, FringeOptions opts = {}) {
  const std::size_t n = fp.weights.n_padded();
  const auto [floor_log, ceil_log] = integer_log_bounds(n, fp.radix);
  const int floor_len = fp.weights.n_real() >= 2 ? 1 : 0;

  std::optional<FringeResult> best;
  std::vector<SweepEntry> sweep;
  for (int top = ceil_log; top <= floor_log + fp.max_fringe; ++top) {
    const LengthBounds bounds(std::max(top - fp.max_fringe, floor_len), top);
    CodingProblem p{fp.weights, fp.radix, bounds, fp.penalty.shifted(bounds.min)};
    SweepEntry entry{bounds, false, 0};
    try {
      SolveResult r = opts.linear_space ? solve_linear_space(p) : solve(p);
      entry.feasible = true;
      entry.objective = absolute_objective(fp.weights, r.padded_lengths, fp.penalty, fp.radix);
      if (!best || entry.objective < best->objective)
        best = FringeResult{std::move(r), bounds, entry.objective, {}};
    } catch (const Infeasible&) {
    }
    sweep.push_back(std::move(entry));
  }
  if (!best)
    throw Infeasible("no code with fringe at most " + std::to_string(fp.max_fringe) + " for " +
                     std::to_string(n) + " symbols at radix " +
                     std::to_string(fp.radix.value()) +
                     (sweep.empty() ? " (empty range of maximum lengths)" : ""));
  best->sweep = std::move(sweep);
  return std::move(*best);
}

}  // namespace bhc
