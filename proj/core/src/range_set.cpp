#include "densemet/range_set.hpp"

#include <algorithm>
#include <cmath>

#include "densemet/error.hpp"

namespace densemet {

RangeSet RangeSet::explicit_values(std::vector<double> values) {
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::BadRangeSet, "explicit range set values must be finite and >= 0");
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty() || values.front() != 0.0) {
    throw Error(ErrorCode::BadRangeSet, "range set must contain 0");
  }
  RangeSet s;
  s.kind_ = Kind::explicit_list;
  s.values_ = std::move(values);
  return s;
}

RangeSet RangeSet::geometric(double scale, double ratio) {
  if (!(scale > 0.0) || !std::isfinite(scale) || !(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::BadRangeSet, "geometric range set needs scale > 0 and ratio in (0, 1)");
  }
  RangeSet s;
  s.kind_ = Kind::geometric;
  s.scale_ = scale;
  s.ratio_ = ratio;
  return s;
}

RangeSet RangeSet::double_exponential(double base) {
  if (!(base > 0.0 && base < 1.0)) {
    throw Error(ErrorCode::BadRangeSet, "double exponential range set needs base in (0, 1)");
  }
  RangeSet s;
  s.kind_ = Kind::double_exponential;
  s.ratio_ = base;
  return s;
}

double RangeSet::element(std::int64_t n) const {
  switch (kind_) {
    case Kind::geometric:
      return scale_ * std::pow(ratio_, static_cast<double>(n));
    case Kind::double_exponential:
      if (n < 0) throw Error(ErrorCode::BadRangeSet, "double exponential index must be >= 0");
      return std::pow(ratio_, std::ldexp(1.0, static_cast<int>(std::min<std::int64_t>(n, 4096))));
    case Kind::explicit_list:
      break;
  }
  if (n < 0 || static_cast<std::size_t>(n) >= values_.size()) {
    throw Error(ErrorCode::BadRangeSet, "explicit range set index out of bounds");
  }
  return values_[static_cast<std::size_t>(n)];
}

std::optional<std::int64_t> RangeSet::ceil_index(double x) const {
  if (kind_ == Kind::geometric) {
    if (std::isinf(x)) return std::nullopt;
    auto n = static_cast<std::int64_t>(std::floor(std::log(x / scale_) / std::log(ratio_)));
    // element() is decreasing in n; repair the floating estimate.
    while (element(n + 1) >= x) ++n;
    while (element(n) < x) --n;
    return n;
  }
  // double exponential
  if (element(0) < x) return std::nullopt;
  std::int64_t n = 0;
  while (n < 64) {
    const double next = element(n + 1);
    if (next <= 0.0 || next < x) break;
    ++n;
  }
  return n;
}

double RangeSet::least_geq(double x) const {
  if (x <= 0.0) return 0.0;
  if (kind_ == Kind::explicit_list) {
    auto it = std::lower_bound(values_.begin(), values_.end(), x);
    return it == values_.end() ? kInfinity : *it;
  }
  auto n = ceil_index(x);
  return n ? element(*n) : kInfinity;
}

double RangeSet::greatest_leq(double x) const {
  if (x <= 0.0) return 0.0;
  if (kind_ == Kind::explicit_list) {
    auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return *(it - 1);
  }
  if (kind_ == Kind::double_exponential && x >= element(0)) return element(0);
  auto n = ceil_index(x);
  if (!n) return 0.0;
  const double at = element(*n);
  return at == x ? at : element(*n + 1);
}

std::optional<double> RangeSet::next_below(double x) const {
  if (x <= 0.0) return std::nullopt;
  if (kind_ == Kind::explicit_list) {
    auto it = std::lower_bound(values_.begin(), values_.end(), x);
    return *(it - 1);
  }
  if (kind_ == Kind::double_exponential && x > element(0)) return element(0);
  auto n = ceil_index(x);
  if (!n) return 0.0;
  return element(*n + 1);
}

}  // namespace densemet
