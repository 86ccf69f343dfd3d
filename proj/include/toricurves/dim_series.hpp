#pragma once

// Elements of the dimensional completion, known exactly above a precision floor.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

#include "toricurves/laurent.hpp"

namespace toricurves {

/// A Laurent series in L^{-1} whose terms of degree >= floor are known exactly.
///
/// The unknown tail only contains terms of degree strictly below the floor.
/// A missing floor marks an exact value. Floors propagate conservatively:
/// an operation may lose precision but never claims an unknown degree as known.
class DimSeries {
 public:
  DimSeries() = default;

  static DimSeries exact(LaurentClass value) {
    DimSeries out;
    out.known_ = std::move(value);
    return out;
  }

  /// Keeps only the terms of degree >= floor.
  static DimSeries truncated(const LaurentClass& value, int floor) {
    DimSeries out;
    out.known_ = value.truncated_below(floor);
    out.floor_ = floor;
    return out;
  }

  const LaurentClass& known() const { return known_; }
  const std::optional<int>& floor() const { return floor_; }
  bool is_exact() const { return !floor_.has_value(); }

  Dimension virtual_dimension() const { return known_.virtual_dimension(); }

  /// Coarsens the precision to `floor` (no-op when already coarser).
  DimSeries truncate(int floor) const {
    if (floor_ && *floor_ >= floor) return *this;
    return truncated(known_, floor);
  }

  /// True when `value` agrees with this series on every degree >= floor.
  bool agrees_with(const LaurentClass& value) const {
    if (!floor_) return known_ == value;
    return known_ == value.truncated_below(*floor_);
  }

  /// True when both agree on every degree at or above both floors.
  bool agrees_with(const DimSeries& other) const {
    std::optional<int> f = floor_;
    if (other.floor_) f = f ? std::max(*f, *other.floor_) : other.floor_;
    if (!f) return known_ == other.known_;
    return known_.truncated_below(*f) == other.known_.truncated_below(*f);
  }

  /// Value of the known part at L = q.
  Rational evaluate(const BigInt& q) const { return known_.evaluate(q); }

  DimSeries shifted(int k) const {
    DimSeries out;
    out.known_ = known_.shifted(k);
    if (floor_) out.floor_ = *floor_ + k;
    return out;
  }

  friend DimSeries operator+(const DimSeries& a, const DimSeries& b) { return combine(a, b, false); }
  friend DimSeries operator-(const DimSeries& a, const DimSeries& b) { return combine(a, b, true); }
  friend DimSeries operator-(const DimSeries& a) {
    DimSeries out = a;
    out.known_ = -a.known_;
    return out;
  }

  friend DimSeries operator*(const DimSeries& a, const DimSeries& b) {
    const LaurentClass product = a.known_ * b.known_;
    if (a.is_exact() && b.is_exact()) return exact(product);
    if (a.is_exact() || b.is_exact()) {
      const DimSeries& ex = a.is_exact() ? a : b;
      const DimSeries& inexact = a.is_exact() ? b : a;
      if (ex.known_.is_zero()) return exact({});
      return truncated(product, *inexact.floor_ + ex.virtual_dimension().value());
    }
    int floor = *a.floor_ + *b.floor_;
    if (!b.known_.is_zero()) floor = std::max(floor, *a.floor_ + b.virtual_dimension().value());
    if (!a.known_.is_zero()) floor = std::max(floor, *b.floor_ + a.virtual_dimension().value());
    return truncated(product, floor);
  }

  friend bool operator==(const DimSeries&, const DimSeries&) = default;

  std::string to_string() const {
    std::string out = known_.to_string();
    if (!floor_) return out + " (exact)";
    const std::string f = *floor_ < 0 ? "−" + std::to_string(-*floor_) : std::to_string(*floor_);
    return out + " (floor " + f + ")";
  }

 private:
  static DimSeries combine(const DimSeries& a, const DimSeries& b, bool subtract) {
    LaurentClass sum = subtract ? a.known_ - b.known_ : a.known_ + b.known_;
    if (!a.floor_ && !b.floor_) return exact(std::move(sum));
    int floor = std::max(a.floor_.value_or(*b.floor_), b.floor_.value_or(*a.floor_));
    return truncated(sum, floor);
  }

  LaurentClass known_;
  std::optional<int> floor_;
};

inline std::ostream& operator<<(std::ostream& os, const DimSeries& x) { return os << x.to_string(); }

inline DimSeries dimser_mul(const DimSeries& a, const DimSeries& b) { return a * b; }

/// (1 - L^{-1})^{-r} = sum_i binom(r - 1 + i, i) L^{-i}, truncated at floor.
inline DimSeries inverse_one_minus_Linv_pow(int r, int floor) {
  if (r < 1) throw std::invalid_argument("inverse_one_minus_Linv_pow: r must be >= 1");
  LaurentClass out;
  BigInt binom = 1;
  for (int i = 0; -i >= floor; ++i) {
    out += LaurentClass::monomial(-i, binom);
    binom = binom * (r + i) / (i + 1);
  }
  return DimSeries::truncated(out, floor);
}

}  // namespace toricurves
