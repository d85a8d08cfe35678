#include "densemet/space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "densemet/range_set.hpp"

namespace densemet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::AsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::NonpositiveOffDiagonal: return "NonpositiveOffDiagonal";
    case ErrorCode::TriangleViolation: return "TriangleViolation";
    case ErrorCode::StrongTriangleViolation: return "StrongTriangleViolation";
    case ErrorCode::SeparationUndefined: return "SeparationUndefined";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::ValueOutsideRangeSet: return "ValueOutsideRangeSet";
    case ErrorCode::ZeroOffDiagonal: return "ZeroOffDiagonal";
    case ErrorCode::DegenerateSpace: return "DegenerateSpace";
    case ErrorCode::BadScaleCutoff: return "BadScaleCutoff";
    case ErrorCode::PieceMismatch: return "PieceMismatch";
    case ErrorCode::NotUltrametric: return "NotUltrametric";
    case ErrorCode::NotLipschitzOnSubset: return "NotLipschitzOnSubset";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::BadPartition: return "BadPartition";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SequenceTooShort: return "SequenceTooShort";
    case ErrorCode::NotShrinking: return "NotShrinking";
    case ErrorCode::EnvelopeViolation: return "EnvelopeViolation";
    case ErrorCode::ShiftTooLarge: return "ShiftTooLarge";
    case ErrorCode::WindowMiss: return "WindowMiss";
    case ErrorCode::BadRangeSet: return "BadRangeSet";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

std::string_view to_string(Flavor flavor) {
  return flavor == Flavor::metric ? "metric" : "ultrametric";
}

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  DistanceMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw Error(ErrorCode::NotSquare, "row " + std::to_string(i) + " has " +
                                            std::to_string(rows[i].size()) + " entries, expected " +
                                            std::to_string(rows.size()));
    }
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * m.n_));
  }
  return m;
}

double DistanceMatrix::max_entry() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, v);
  return m;
}

std::vector<std::vector<double>> DistanceMatrix::to_rows() const {
  std::vector<std::vector<double>> rows(n_);
  for (std::size_t i = 0; i < n_; ++i) rows[i].assign(row(i).begin(), row(i).end());
  return rows;
}

std::string Violation::describe() const {
  std::ostringstream out;
  out << to_string(code);
  switch (code) {
    case ErrorCode::NonzeroDiagonal: out << " at (" << i << ',' << i << ')'; break;
    case ErrorCode::AsymmetricMatrix:
    case ErrorCode::NonpositiveOffDiagonal: out << " at (" << i << ',' << j << ')'; break;
    case ErrorCode::TriangleViolation:
    case ErrorCode::StrongTriangleViolation:
      out << " at (" << i << ',' << j << ',' << k << ')';
      break;
    default: break;
  }
  return out.str();
}

std::optional<Violation> find_violation(const DistanceMatrix& m, Flavor flavor, double tolerance) {
  const std::size_t n = m.size();
  if (n == 0) return Violation{ErrorCode::NotSquare};
  for (std::size_t i = 0; i < n; ++i) {
    if (m(i, i) != 0.0) return Violation{ErrorCode::NonzeroDiagonal, i, i, i};
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m(i, j) != m(j, i)) return Violation{ErrorCode::AsymmetricMatrix, i, j, j};
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(m(i, j) > 0.0) || !std::isfinite(m(i, j))) {
        return Violation{ErrorCode::NonpositiveOffDiagonal, i, j, j};
      }
    }
  }
  const double slack = tolerance * m.max_entry();
  const bool strong = flavor == Flavor::ultrametric;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ri = m.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = ri[j];
      const auto rj = m.row(j);
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (dij > ri[k] + rj[k] + slack) return Violation{ErrorCode::TriangleViolation, i, j, k};
        if (strong && dij > std::max(ri[k], rj[k]) + slack) {
          return Violation{ErrorCode::StrongTriangleViolation, i, j, k};
        }
      }
    }
  }
  return std::nullopt;
}

FiniteMetricSpace validate(std::vector<std::string> labels, DistanceMatrix matrix, Flavor flavor,
                           double tolerance) {
  if (!(tolerance >= 0.0)) throw Error(ErrorCode::BadInput, "tolerance must be >= 0");
  if (labels.size() != matrix.size()) {
    throw Error(ErrorCode::NotSquare, "matrix side " + std::to_string(matrix.size()) +
                                          " does not match " + std::to_string(labels.size()) +
                                          " labels");
  }
  if (auto v = find_violation(matrix, flavor, tolerance)) throw Error(v->code, v->describe());
  return FiniteMetricSpace(std::move(labels), std::move(matrix), flavor);
}

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return labels;
}

double FiniteMetricSpace::min_positive_distance() const {
  double best = kInfinity;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) best = std::min(best, matrix_(i, j));
  }
  return size() < 2 ? 0.0 : best;
}

FiniteMetricSpace FiniteMetricSpace::restrict_to(const IndexSet& indices) const {
  if (indices.empty()) throw Error(ErrorCode::BadInput, "cannot restrict to an empty set");
  DistanceMatrix m(indices.size());
  std::vector<std::string> labels;
  labels.reserve(indices.size());
  for (std::size_t a = 0; a < indices.size(); ++a) {
    if (indices[a] >= size()) throw Error(ErrorCode::BadInput, "index out of range");
    labels.push_back(labels_[indices[a]]);
    for (std::size_t b = 0; b < indices.size(); ++b) m(a, b) = matrix_(indices[a], indices[b]);
  }
  for (std::size_t a = 0; a < indices.size(); ++a) {
    for (std::size_t b = a + 1; b < indices.size(); ++b) {
      if (indices[a] == indices[b]) throw Error(ErrorCode::BadInput, "repeated index in subset");
    }
  }
  return FiniteMetricSpace(std::move(labels), std::move(m), flavor_);
}

FiniteMetricSpace FiniteMetricSpace::scaled(double lambda) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::BadInput, "scale factor must be positive and finite");
  }
  DistanceMatrix m = matrix_;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) m(i, j) = lambda * matrix_(i, j);
  }
  return FiniteMetricSpace(labels_, std::move(m), flavor_);
}

FiniteMetricSpace FiniteMetricSpace::as_metric() const {
  return FiniteMetricSpace(labels_, matrix_, Flavor::metric);
}

double SubsetStats::separation() const {
  if (!min_separation) {
    throw Error(ErrorCode::SeparationUndefined, "separation needs at least two points");
  }
  return *min_separation;
}

SubsetStats subset_stats(const FiniteMetricSpace& space, const IndexSet& subset) {
  if (subset.empty()) throw Error(ErrorCode::BadInput, "subset must be nonempty");
  SubsetStats stats;
  stats.cardinality = subset.size();
  double sep = kInfinity;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    if (subset[a] >= space.size()) throw Error(ErrorCode::BadInput, "index out of range");
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const double v = space(subset[a], subset[b]);
      stats.diameter = std::max(stats.diameter, v);
      sep = std::min(sep, v);
    }
  }
  if (subset.size() >= 2) stats.min_separation = sep;
  return stats;
}

bool MetricDistance::is_infinite() const { return std::isinf(value); }

namespace {

void require_same_labels(const FiniteMetricSpace& d, const FiniteMetricSpace& e) {
  if (d.labels() != e.labels()) {
    throw Error(ErrorCode::LabelMismatch, "metrics are defined on different label lists");
  }
}

}  // namespace

MetricDistance sup_distance(const FiniteMetricSpace& d, const FiniteMetricSpace& e) {
  require_same_labels(d, e);
  double best = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) best = std::max(best, std::abs(d(i, j) - e(i, j)));
  }
  return {best, DistanceKind::sup_metric};
}

MetricDistance ultra_distance(const FiniteMetricSpace& d, const FiniteMetricSpace& e,
                              const RangeSet& range, double tolerance) {
  require_same_labels(d, e);
  if (d.flavor() != Flavor::ultrametric || e.flavor() != Flavor::ultrametric) {
    throw Error(ErrorCode::NotUltrametric, "ultra_distance needs ultrametric inputs");
  }
  auto check_value = [&](double v) {
    if (!range.intersects(v - tolerance * v, v + tolerance * v)) {
      throw Error(ErrorCode::ValueOutsideRangeSet, "distance value outside the range set");
    }
  };
  double worst = 0.0;
  bool differ = false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      check_value(d(i, j));
      check_value(e(i, j));
      if (d(i, j) != e(i, j)) {
        differ = true;
        worst = std::max(worst, std::max(d(i, j), e(i, j)));
      }
    }
  }
  return {differ ? range.least_geq(worst) : 0.0, DistanceKind::ultra_metric_over_range};
}

FiniteMetricSpace metric_closure(std::vector<std::string> labels, const DistanceMatrix& raw) {
  const std::size_t n = raw.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (raw(i, i) != 0.0) throw Error(ErrorCode::NonzeroDiagonal, "diagonal must be zero");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (raw(i, j) != raw(j, i)) throw Error(ErrorCode::AsymmetricMatrix, "raw matrix must be symmetric");
      if (!(raw(i, j) > 0.0)) throw Error(ErrorCode::ZeroOffDiagonal, "off-diagonal entries must be > 0");
    }
  }
  DistanceMatrix m = raw;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dik = m(i, k);
      for (std::size_t j = i + 1; j < n; ++j) {
        const double via = dik + m(k, j);
        if (via < m(i, j)) {
          m(i, j) = via;
          m(j, i) = via;
        }
      }
    }
  }
  return validate(std::move(labels), std::move(m), Flavor::metric);
}

}  // namespace densemet
