#pragma once

// Domain types for bounded-length D-ary prefix coding: radix, sorted and
// padded weight vectors, length bounds, convex penalties and exact widths.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bhc/rational.hpp"

namespace bhc {

using LengthVector = std::vector<int>;

class Radix {
 public:
  explicit Radix(int value) : value_(value) {
    if (value < 2) throw InvalidArgument("radix must be at least 2, got " + std::to_string(value));
  }
  int value() const noexcept { return value_; }
  friend bool operator==(Radix, Radix) = default;

 private:
  int value_;
};

/// Smallest n' >= n_real with n' = 1 (mod D-1). Binary codes never need dummies.
inline std::size_t pad_dummies(std::size_t n_real, Radix radix) {
  if (n_real < 1) throw InvalidArgument("pad_dummies: need at least one symbol");
  const std::size_t m = static_cast<std::size_t>(radix.value() - 1);
  if (m == 1) return n_real;
  const std::size_t rem = (n_real - 1) % m;
  return rem == 0 ? n_real : n_real + (m - rem);
}

/// Caller weights sorted nonincreasing (stable), followed by zero-weight
/// dummies. `original_order()[k]` is the caller position of sorted entry k;
/// dummies have no caller position and are not listed there.
class WeightVector {
 public:
  static WeightVector from_caller(std::vector<Rational> caller, Radix radix,
                                  std::size_t extra_dummy_blocks = 0) {
    if (caller.empty()) throw InvalidArgument("weight vector is empty");
    for (std::size_t i = 0; i < caller.size(); ++i) {
      if (caller[i] <= 0)
        throw InvalidArgument("weight " + std::to_string(i + 1) + " is not strictly positive");
    }
    WeightVector wv;
    wv.n_real_ = caller.size();
    wv.order_.resize(caller.size());
    std::iota(wv.order_.begin(), wv.order_.end(), std::size_t{0});
    std::stable_sort(wv.order_.begin(), wv.order_.end(),
                     [&](std::size_t a, std::size_t b) { return caller[a] > caller[b]; });
    wv.weights_.reserve(caller.size());
    for (std::size_t k : wv.order_) wv.weights_.push_back(caller[k]);
    std::size_t padded = pad_dummies(caller.size(), radix) +
                         extra_dummy_blocks * static_cast<std::size_t>(radix.value() - 1);
    wv.weights_.resize(padded, Rational(0));
    return wv;
  }

  std::span<const Rational> weights() const noexcept { return weights_; }
  const Rational& operator[](std::size_t i) const { return weights_[i]; }
  std::span<const std::size_t> original_order() const noexcept { return order_; }
  std::size_t n_real() const noexcept { return n_real_; }
  std::size_t n_padded() const noexcept { return weights_.size(); }
  std::size_t dummies() const noexcept { return weights_.size() - n_real_; }

  Rational total() const {
    Rational s = 0;
    for (const auto& w : weights_) s += w;
    return s;
  }

  /// Maps a per-sorted-position vector back to caller order, dropping dummies.
  template <class T>
  std::vector<T> to_caller_order(std::span<const T> sorted) const {
    std::vector<T> out(n_real_);
    for (std::size_t k = 0; k < n_real_; ++k) out[order_[k]] = sorted[k];
    return out;
  }

 private:
  WeightVector() = default;
  std::vector<Rational> weights_;
  std::vector<std::size_t> order_;
  std::size_t n_real_ = 0;
};

struct LengthBounds {
  int min = 0;
  int max = 0;

  LengthBounds() = default;
  LengthBounds(int lo, int hi) : min(lo), max(hi) {
    if (lo < 0) throw InvalidArgument("minimum length must be nonnegative");
    if (hi < lo)
      throw InvalidArgument("maximum length " + std::to_string(hi) + " is below minimum length " +
                            std::to_string(lo));
  }
  int span() const noexcept { return max - min; }
  friend bool operator==(const LengthBounds&, const LengthBounds&) = default;
};

enum class PenaltyKind { Linear, Quadratic, Exponential, CustomTable };

/// Convex, nondecreasing penalty phi(delta), delta = l - l_min.
///
/// Linear:      phi(delta) = delta
/// Quadratic:   phi(delta) = (delta + l_min)^2
/// Exponential: phi(delta) = D^(t (delta + l_min)), rounded to a multiple of
///              1/precision once, before solving
/// CustomTable: phi(delta) = table[delta]
class Penalty {
 public:
  static constexpr std::int64_t kDefaultPrecision = 1'000'000;

  static Penalty linear() { return Penalty(PenaltyKind::Linear); }
  static Penalty quadratic() { return Penalty(PenaltyKind::Quadratic); }
  static Penalty exponential(Rational t, std::int64_t precision = kDefaultPrecision) {
    if (t <= 0) throw InvalidArgument("exponential penalty needs t > 0");
    if (precision < 1) throw InvalidArgument("exponential penalty precision must be positive");
    Penalty p(PenaltyKind::Exponential);
    p.t_ = std::move(t);
    p.precision_ = precision;
    return p;
  }
  static Penalty custom(std::vector<Rational> table) {
    if (table.empty()) throw InvalidArgument("custom penalty table is empty");
    Penalty p(PenaltyKind::CustomTable);
    p.table_ = std::move(table);
    return p;
  }

  PenaltyKind kind() const noexcept { return kind_; }
  const Rational& t() const noexcept { return t_; }
  std::int64_t precision() const noexcept { return precision_; }
  std::span<const Rational> table() const noexcept { return table_; }

  std::string name() const {
    switch (kind_) {
      case PenaltyKind::Linear: return "linear";
      case PenaltyKind::Quadratic: return "quadratic";
      case PenaltyKind::Exponential: return "exp";
      case PenaltyKind::CustomTable: return "table";
    }
    return "?";
  }

  /// Table entries [shift, ...): the same absolute-length penalty seen from a
  /// problem whose minimum length is `shift` larger. Only custom tables carry
  /// an explicit origin; the other kinds are already written in terms of l_min.
  Penalty shifted(int shift) const {
    if (kind_ != PenaltyKind::CustomTable || shift == 0) return *this;
    if (shift < 0 || static_cast<std::size_t>(shift) >= table_.size())
      throw InvalidArgument("custom penalty table too short for shift " + std::to_string(shift));
    return custom(std::vector<Rational>(table_.begin() + shift, table_.end()));
  }

  friend bool operator==(const Penalty&, const Penalty&) = default;

 private:
  explicit Penalty(PenaltyKind kind) : kind_(kind) {}
  PenaltyKind kind_;
  Rational t_ = 0;
  std::int64_t precision_ = kDefaultPrecision;
  std::vector<Rational> table_;
};

namespace detail {

inline Rational rationalized_power(int radix, const Rational& exponent, std::int64_t precision) {
  using Float = boost::multiprecision::cpp_bin_float_100;
  Float e = Float(numerator_of(exponent)) / Float(denominator_of(exponent));
  Float x = boost::multiprecision::pow(Float(radix), e) * Float(precision);
  BigInt scaled = boost::multiprecision::round(x).convert_to<BigInt>();
  return Rational(scaled, BigInt(precision));
}

}  // namespace detail

/// phi(delta) for a problem with the given minimum length and radix.
inline Rational penalty_eval(const Penalty& penalty, int delta, int l_min, Radix radix) {
  if (delta < 0) throw InvalidArgument("penalty_eval: negative delta");
  switch (penalty.kind()) {
    case PenaltyKind::Linear: return Rational(delta);
    case PenaltyKind::Quadratic: {
      const BigInt s = BigInt(delta) + l_min;
      return Rational(s * s);
    }
    case PenaltyKind::Exponential:
      return detail::rationalized_power(radix.value(), penalty.t() * (delta + l_min),
                                        penalty.precision());
    case PenaltyKind::CustomTable:
      if (static_cast<std::size_t>(delta) >= penalty.table().size())
        throw InvalidArgument("custom penalty table has no entry for delta " +
                              std::to_string(delta));
      return penalty.table()[static_cast<std::size_t>(delta)];
  }
  return 0;
}

/// phi(0..bounds.span()), rejected unless nondecreasing and convex on that range.
inline std::vector<Rational> penalty_table(const Penalty& penalty, LengthBounds bounds,
                                           Radix radix) {
  std::vector<Rational> phi;
  phi.reserve(static_cast<std::size_t>(bounds.span()) + 1);
  for (int d = 0; d <= bounds.span(); ++d) phi.push_back(penalty_eval(penalty, d, bounds.min, radix));
  for (std::size_t d = 1; d < phi.size(); ++d) {
    const Rational step = phi[d] - phi[d - 1];
    if (step < 0)
      throw InvalidArgument(penalty.name() + " penalty decreases at delta " + std::to_string(d));
    if (d >= 2 && step < phi[d - 1] - phi[d - 2])
      throw InvalidArgument(penalty.name() + " penalty is not convex at delta " +
                            std::to_string(d - 1));
  }
  return phi;
}

/// Sum of D^-l over the lengths.
inline Rational kraft_sum(std::span<const int> lengths, Radix radix) {
  if (lengths.empty()) return 0;
  const int deepest = *std::max_element(lengths.begin(), lengths.end());
  BigInt acc = 0;
  for (int l : lengths) {
    if (l < 0) throw InvalidArgument("kraft_sum: negative length");
    acc += ipow(BigInt(radix.value()), deepest - l);
  }
  return Rational(acc, ipow(BigInt(radix.value()), deepest));
}

/// Exact width scaled * D^-exponent. Values compare by what they represent.
class WidthValue {
 public:
  WidthValue(BigInt scaled, int exponent, Radix radix)
      : scaled_(std::move(scaled)), exponent_(exponent), radix_(radix) {
    if (scaled_ < 0) throw InvalidArgument("width must be nonnegative");
    normalize();
  }
  static WidthValue zero(Radix radix) { return WidthValue(0, 0, radix); }
  /// The single power D^-exponent.
  static WidthValue power(int exponent, Radix radix) { return WidthValue(1, exponent, radix); }

  const BigInt& scaled() const noexcept { return scaled_; }
  int exponent() const noexcept { return exponent_; }
  Radix radix() const noexcept { return radix_; }
  bool is_zero() const noexcept { return scaled_ == 0; }
  bool is_power() const noexcept { return scaled_ == 1; }

  /// scaled value when expressed in units of D^-exponent (exponent >= this->exponent()).
  BigInt in_units(int exponent) const {
    if (exponent < exponent_) throw InvalidArgument("WidthValue::in_units: precision loss");
    return scaled_ * ipow(BigInt(radix_.value()), exponent - exponent_);
  }

  Rational to_rational() const {
    const BigInt d = radix_.value();
    if (exponent_ >= 0) return Rational(scaled_, ipow(d, exponent_));
    return Rational(scaled_ * ipow(d, -exponent_));
  }

  friend WidthValue operator+(const WidthValue& a, const WidthValue& b) {
    const int e = std::max(a.exponent_, b.exponent_);
    return WidthValue(a.in_units(e) + b.in_units(e), e, a.radix_);
  }
  friend WidthValue operator-(const WidthValue& a, const WidthValue& b) {
    const int e = std::max(a.exponent_, b.exponent_);
    BigInt diff = a.in_units(e) - b.in_units(e);
    if (diff < 0) throw InvalidArgument("negative width difference");
    return WidthValue(std::move(diff), e, a.radix_);
  }
  friend WidthValue operator*(const WidthValue& a, const BigInt& k) {
    return WidthValue(a.scaled_ * k, a.exponent_, a.radix_);
  }
  friend bool operator==(const WidthValue& a, const WidthValue& b) {
    return a.scaled_ == b.scaled_ && (a.scaled_ == 0 || a.exponent_ == b.exponent_);
  }
  friend bool operator<(const WidthValue& a, const WidthValue& b) {
    const int e = std::max(a.exponent_, b.exponent_);
    return a.in_units(e) < b.in_units(e);
  }
  friend bool operator<=(const WidthValue& a, const WidthValue& b) { return !(b < a); }

 private:
  void normalize() {
    if (scaled_ == 0) {
      exponent_ = 0;
      return;
    }
    const int d = radix_.value();
    while (scaled_ % d == 0) {
      scaled_ /= d;
      --exponent_;
    }
  }

  BigInt scaled_;
  int exponent_;
  Radix radix_;
};

/// Column heights h_i: the nodeset holds levels l_min+1 .. l_min+h_i of column i.
struct NodeSet {
  std::vector<int> heights;
};

}  // namespace bhc
