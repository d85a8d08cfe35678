#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "densemet/moduli.hpp"
#include "densemet/range_set.hpp"
#include "densemet/space.hpp"

namespace densemet {

/// A point of the depth-n truncation of 2^omega, as a string of '0'/'1'.
using BinaryString = std::string;

/// All 2^depth strings in lexicographic order.
std::vector<BinaryString> binary_points(std::size_t depth);

/// `count` distinct strings of a common length ceil(log2 count), chosen by
/// splitting the set in halves at every level so that every leaf block is
/// as full as possible. For count == 2^k this is binary_points(k).
std::vector<BinaryString> balanced_codes(std::size_t count);

/// First index where x and y differ; nullopt stands for infinity (x == y).
std::optional<std::size_t> valuation(std::string_view x, std::string_view y);

/// M^-1 a^k <= s(k) <= M a^k.
struct Envelope {
  double a = 0.5;
  double M = 1.0;

  double lower(std::size_t k) const;
  double upper(std::size_t k) const;
  bool operator==(const Envelope&) const = default;
};

class ShrinkingSequence {
 public:
  /// Throws NotShrinking unless strictly decreasing and positive, and
  /// EnvelopeViolation if an envelope is given and fails (1e-12 relative).
  explicit ShrinkingSequence(std::vector<double> values, std::optional<Envelope> envelope = std::nullopt);

  /// s(k) = first * ratio^k, k < length, with envelope (ratio, 1) if first == 1.
  static ShrinkingSequence geometric(double first, double ratio, std::size_t length);

  const std::vector<double>& values() const noexcept { return values_; }
  const std::optional<Envelope>& envelope() const noexcept { return envelope_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }

  /// min_k s(k+1) / s(k).
  double min_ratio() const;

  bool operator==(const ShrinkingSequence&) const = default;

 private:
  std::vector<double> values_;
  std::optional<Envelope> envelope_;
};

/// s^{m}(n) = s(m + n); envelope becomes (a, M a^-m).
ShrinkingSequence shift(const ShrinkingSequence& s, std::size_t m);

/// d(x, y) = s(v(x, y)) on binary_points(depth), ultrametric flavor.
FiniteMetricSpace sequential_metric(const ShrinkingSequence& s, std::size_t depth);

/// Same construction on arbitrary equal-length codes with external labels.
FiniteMetricSpace sequential_metric_on(const std::vector<BinaryString>& codes, const ShrinkingSequence& s,
                                       std::vector<std::string> labels);

/// Point x -> sum_i 2 x(i) / 3^(i+1); distance = scale * |difference|.
FiniteMetricSpace euclidean_cantor_metric(std::size_t depth, double scale);
FiniteMetricSpace euclidean_cantor_on(const std::vector<BinaryString>& codes, double scale,
                                      std::vector<std::string> labels);

inline double least_geq(const RangeSet& range, double x) { return range.least_geq(x); }

struct WindowCheck {
  bool ok = true;
  /// least_geq(S, M^-1 a^n) for every n examined.
  std::vector<double> witnesses;
  std::optional<std::size_t> failing_n;
};

/// [M^-1 a^n, M a^n] meets S for every n = 0..N. One-sided: a true answer
/// says nothing about n > N.
WindowCheck is_exponential_window(const RangeSet& range, double a, double M, std::size_t N);

/// a = b^(2p + 1) with p = -log M / log b, s(n) = least_geq(S, M^-1 a^n).
ShrinkingSequence exponential_sequence(const RangeSet& range, double b, double M, std::size_t length);

/// Least n <= N with [c^(n+1), c^(n-1)] disjoint from S. When `ceiling` is
/// given, windows whose top c^(n-1) is not below it are skipped, so the
/// returned radius lies inside a space of that diameter.
std::optional<std::size_t> up_obstruction(const RangeSet& range, double c, std::size_t N,
                                          double ceiling = kInfinity);

struct TypeBits {
  bool u1 = true;
  bool u2 = true;
  bool u3 = true;

  bool operator==(const TypeBits&) const = default;
  std::string str() const;
  static TypeBits parse(std::string_view text);  // "1,0,1" or "(1,0,1)"
  static std::vector<TypeBits> all();
};

struct TypeTarget {
  TypeBits bits;
  std::string recipe;
};

struct GeneratedType {
  FiniteMetricSpace space;
  TypeTarget target;
  Classification classification;
};

/// Emits a space on 2^depth points whose classification at `thresholds`
/// equals `target`; throws GenerationFailed otherwise. The seed permutes
/// the points.
GeneratedType generate_type(TypeBits target, std::size_t depth, std::uint64_t seed,
                            const Thresholds& thresholds = {});

}  // namespace densemet
