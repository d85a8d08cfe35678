#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace densemet {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A subset S of [0, inf) containing 0, in one of three closed forms:
///   explicit            a finite sorted list
///   geometric           {0} u { scale * ratio^n : n in Z }
///   double_exponential  {0} u { base^(2^n) : n >= 0 }
/// Elements of the parametric kinds are always produced by element(), so
/// membership and least_geq agree bit for bit with generated values.
class RangeSet {
 public:
  enum class Kind { explicit_list, geometric, double_exponential };

  static RangeSet explicit_values(std::vector<double> values);
  static RangeSet geometric(double scale, double ratio);
  static RangeSet double_exponential(double base);

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double scale() const noexcept { return scale_; }
  double ratio() const noexcept { return ratio_; }
  double base() const noexcept { return ratio_; }

  /// Parametric element with index n (n may be negative for geometric).
  double element(std::int64_t n) const;

  /// Smallest s in S with s >= x, or +infinity.
  double least_geq(double x) const;
  /// Largest s in S with s <= x (0 at worst).
  double greatest_leq(double x) const;
  /// Largest s in S with s < x; nullopt when x <= 0.
  std::optional<double> next_below(double x) const;

  bool contains(double x) const { return least_geq(x) == x; }
  /// S meets [lo, hi].
  bool intersects(double lo, double hi) const { return least_geq(lo) <= hi; }

  bool operator==(const RangeSet&) const = default;

 private:
  RangeSet() = default;

  // Index of the smallest parametric element >= x, x > 0; nullopt if none.
  std::optional<std::int64_t> ceil_index(double x) const;

  Kind kind_ = Kind::explicit_list;
  std::vector<double> values_;
  double scale_ = 1.0;
  double ratio_ = 0.5;
};

}  // namespace densemet
