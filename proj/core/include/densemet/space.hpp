#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "densemet/error.hpp"

namespace densemet {

class RangeSet;

enum class Flavor { metric, ultrametric };

std::string_view to_string(Flavor flavor);

using IndexSet = std::vector<std::size_t>;

/// Dense row-major square matrix of distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  /// Throws Error{NotSquare} unless every row has rows.size() entries.
  static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  std::span<const double> data() const noexcept { return data_; }

  double max_entry() const;
  std::vector<std::vector<double>> to_rows() const;

  bool operator==(const DistanceMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// The first axiom a matrix fails. For triangle failures (i, j, k) means
/// m(i, j) exceeds m(i, k) + m(k, j) (or their max, for the strong form).
struct Violation {
  ErrorCode code;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;

  std::string describe() const;
};

inline constexpr double kDefaultTolerance = 1e-9;

/// A labeled finite point set with a distance matrix that passed validation.
/// Instances are only produced by validate() and by operations that preserve
/// the axioms.
class FiniteMetricSpace {
 public:
  std::size_t size() const noexcept { return matrix_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const DistanceMatrix& matrix() const noexcept { return matrix_; }
  Flavor flavor() const noexcept { return flavor_; }
  double operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }

  double diameter() const { return matrix_.max_entry(); }
  /// Smallest off-diagonal entry; 0 for a single point.
  double min_positive_distance() const;

  /// Subspace on the given indices, in the given order.
  FiniteMetricSpace restrict_to(const IndexSet& indices) const;
  /// lambda * d, lambda > 0.
  FiniteMetricSpace scaled(double lambda) const;
  /// Same distances read as a plain metric.
  FiniteMetricSpace as_metric() const;

  bool operator==(const FiniteMetricSpace&) const = default;

 private:
  friend FiniteMetricSpace validate(std::vector<std::string>, DistanceMatrix, Flavor, double);

  FiniteMetricSpace(std::vector<std::string> labels, DistanceMatrix matrix, Flavor flavor)
      : labels_(std::move(labels)), matrix_(std::move(matrix)), flavor_(flavor) {}

  std::vector<std::string> labels_;
  DistanceMatrix matrix_;
  Flavor flavor_ = Flavor::metric;
};

/// Checks shape, zero diagonal, symmetry, positivity and the (strong) triangle
/// inequality with slack tolerance * max entry. Returns the first failure.
std::optional<Violation> find_violation(const DistanceMatrix& matrix, Flavor flavor,
                                        double tolerance = kDefaultTolerance);

/// Throws Error carrying the violated axiom and its witness indices.
FiniteMetricSpace validate(std::vector<std::string> labels, DistanceMatrix matrix, Flavor flavor,
                           double tolerance = kDefaultTolerance);

/// Labels "0", "1", ..., "n-1".
std::vector<std::string> index_labels(std::size_t n);

struct SubsetStats {
  double diameter = 0.0;
  std::size_t cardinality = 0;
  std::optional<double> min_separation;

  /// alpha(A); throws SeparationUndefined for a single point.
  double separation() const;
};

SubsetStats subset_stats(const FiniteMetricSpace& space, const IndexSet& subset);

enum class DistanceKind { sup_metric, ultra_metric_over_range };

struct MetricDistance {
  double value = 0.0;  // may be +infinity
  DistanceKind kind = DistanceKind::sup_metric;

  bool is_infinite() const;
};

/// max over pairs of |d(x, y) - e(x, y)|. Label lists must match exactly.
MetricDistance sup_distance(const FiniteMetricSpace& d, const FiniteMetricSpace& e);

/// Least element of S (or infinity) that is >= every max(d, e) over pairs
/// where d and e disagree; 0 when d == e.
MetricDistance ultra_distance(const FiniteMetricSpace& d, const FiniteMetricSpace& e,
                              const RangeSet& range, double tolerance = kDefaultTolerance);

/// All-pairs shortest path closure of a symmetric positive matrix.
FiniteMetricSpace metric_closure(std::vector<std::string> labels, const DistanceMatrix& raw);

}  // namespace densemet
