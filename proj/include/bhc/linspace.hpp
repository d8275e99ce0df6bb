#pragma once

// O(n)-space variant of solve().
//
// A first Package-Merge pass over a grid region keeps only four aggregates
// per element (weight, width, count of nodes on the middle level, width of
// nodes above it). For the optimal node set N these split the region, by
// monotonicity of N, into
//
//   A      unknown nodes of the first count-nu columns below the middle level
//   B      full columns below the middle level for the last nu symbols
//   Gamma  the middle level for the last nu symbols
//   Delta  unknown nodes of the last nu columns above the middle level
//
// with known widths for all four. A and Delta are then solved as smaller
// Coin Collector instances of at most half the area, recursively.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhc/model.hpp"
#include "bhc/packmerge.hpp"
#include "bhc/solver.hpp"

namespace bhc {

/// Symbols [first, first+count) by levels [lo, hi]. lo plays the role of l_min+1.
struct GridRegion {
  std::size_t first = 0;
  std::size_t count = 0;
  int lo = 1;
  int hi = 0;

  int mid() const { return (lo + hi) / 2; }
  std::size_t levels() const { return hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0; }
  std::size_t area() const { return count * levels(); }
  bool empty() const { return area() == 0; }

  friend bool operator==(const GridRegion&, const GridRegion&) = default;
};

struct Decomposition {
  std::size_t n_nu = 0;
  GridRegion a, b, gamma, delta;
  WidthValue a_width, b_width, gamma_width, delta_width;
};

/// Splits a region's optimal node set, known only through its aggregates.
inline Decomposition decompose(const PackageAttr& attrs, const GridRegion& region, Radix radix) {
  if (attrs.nu < 0 || static_cast<std::size_t>(attrs.nu) > region.count)
    throw std::logic_error("middle-level count " + std::to_string(attrs.nu) +
                           " does not fit a region of " + std::to_string(region.count) +
                           " columns");
  const int mid = region.mid();
  const auto n_nu = static_cast<std::size_t>(attrs.nu);
  const std::size_t split = region.first + region.count - n_nu;

  // sum_{l=lo}^{mid-1} D^-l in units of D^-(mid-1)
  BigInt column = 0;
  BigInt unit = 1;
  for (int l = mid - 1; l >= region.lo; --l) {
    column += unit;
    unit *= radix.value();
  }

  Decomposition out{n_nu,
                    GridRegion{region.first, region.count - n_nu, region.lo, mid - 1},
                    GridRegion{split, n_nu, region.lo, mid - 1},
                    GridRegion{split, n_nu, mid, mid},
                    GridRegion{split, n_nu, mid + 1, region.hi},
                    WidthValue::zero(radix),
                    WidthValue(column * n_nu, mid - 1, radix),
                    WidthValue(BigInt(n_nu), mid, radix),
                    attrs.psi};
  const WidthValue known = out.b_width + out.gamma_width + out.delta_width;
  if (attrs.rho < known)
    throw std::logic_error("decomposition leaves a negative width for the low-left block");
  out.a_width = attrs.rho - known;
  return out;
}

struct LinearSpaceStats {
  std::size_t attribute_passes = 0;
  std::size_t base_solves = 0;
  std::size_t peak_live_attribute_pass = 0;
  std::size_t peak_live_base = 0;
  /// Per split: parent area and the summed area of the two recursive children.
  std::vector<std::pair<std::size_t, std::size_t>> splits;
  /// Every decomposition's four widths summed back to its parent's width.
  bool widths_balanced = true;
};

namespace detail {

// Regions with at most this many levels are solved directly.
inline constexpr std::size_t kBaseLevels = 2;

template <class Int>
class LinearSpaceRun {
 public:
  LinearSpaceRun(const Grid<Int>& grid, Radix radix, std::vector<int>& heights,
                 const BigInt& weight_den, LinearSpaceStats* stats)
      : grid_(grid), radix_(radix), heights_(heights), weight_den_(weight_den), stats_(stats) {}

  void run(const GridRegion& region, const WidthValue& target) {
    if (target.is_zero()) return;
    if (region.empty())
      throw std::logic_error("nonzero width assigned to an empty region");

    if (region.levels() <= kBaseLevels) {
      EngineStats es;
      if (!select_region_nodes(grid_, region.first, region.count, region.lo, region.hi, target,
                               radix_.value(), heights_, &es))
        throw std::logic_error("base region has no subset of the requested width");
      if (stats_) {
        ++stats_->base_solves;
        stats_->peak_live_base = std::max(stats_->peak_live_base, es.peak_live);
      }
      return;
    }

    const PackageAttr attrs = attributes(region, target);
    const Decomposition parts = decompose(attrs, region, radix_);
    if (stats_) {
      stats_->splits.emplace_back(region.area(), parts.a.area() + parts.delta.area());
      if (!(parts.a_width + parts.b_width + parts.gamma_width + parts.delta_width == target))
        stats_->widths_balanced = false;
    }
    const int rows = region.mid() - region.lo + 1;  // B and Gamma together
    for (std::size_t k = 0; k < parts.n_nu; ++k) heights_[parts.b.first + k] += rows;
    run(parts.a, parts.a_width);
    run(parts.delta, parts.delta_width);
  }

 private:
  PackageAttr attributes(const GridRegion& region, const WidthValue& target) {
    const int mid = region.mid();
    GridSource<Int> src{&grid_, region.first, region.count, region.lo, region.hi};
    AttributePolicy<Int> policy{radix_.value(), region.hi, [mid](std::uint64_t, int level) {
                                  if (level < mid) return NodeClass::Low;
                                  return level == mid ? NodeClass::Mid : NodeClass::High;
                                }};
    EngineStats es;
    if (!package_merge<Int>(src, Target<Int>::from(target), radix_.value(), policy, &es))
      throw std::logic_error("region has no subset of the requested width");
    if (stats_) {
      ++stats_->attribute_passes;
      stats_->peak_live_attribute_pass = std::max(stats_->peak_live_attribute_pass, es.peak_live);
    }
    PackageAttr a;
    a.mu = Rational(BigInt(policy.mu), weight_den_);
    a.rho = WidthValue(BigInt(policy.rho), region.hi, radix_);
    a.nu = policy.nu;
    a.psi = WidthValue(BigInt(policy.psi), region.hi, radix_);
    if (!(a.rho == target)) throw std::logic_error("attribute pass width mismatch");
    return a;
  }

  const Grid<Int>& grid_;
  Radix radix_;
  std::vector<int>& heights_;
  const BigInt& weight_den_;
  LinearSpaceStats* stats_;
};

template <class Int>
SolveResult solve_linear_space_as(const CodingProblem& p, const ProblemScaling& s,
                                  LinearSpaceStats* stats) {
  const Grid<Int> grid(s, p.n(), p.bounds.min);
  NodeSet nodes{std::vector<int>(p.n(), 0)};
  const BigInt weight_den = s.symbol_den * s.step_den;
  LinearSpaceRun<Int> run(grid, p.radix, nodes.heights, weight_den, stats);
  run.run(GridRegion{0, p.n(), p.bounds.min + 1, p.bounds.max},
          total_width(p.n(), p.radix, p.bounds.min));
  return finish(p, s, nodes);
}

}  // namespace detail

/// Same result as solve(), in O(n) working space.
inline SolveResult solve_linear_space(const CodingProblem& p, LinearSpaceStats* stats = nullptr) {
  if (static_cast<std::size_t>(p.bounds.span()) <= detail::kBaseLevels) return solve(p);
  check_feasible(p);
  const auto s = detail::scale_problem(p);
  if (detail::int64_is_enough(s.weight_bound, s.width_bound))
    return detail::solve_linear_space_as<std::int64_t>(p, s, stats);
  return detail::solve_linear_space_as<BigInt>(p, s, stats);
}

}  // namespace bhc
