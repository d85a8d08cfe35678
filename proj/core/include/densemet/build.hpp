#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "densemet/moduli.hpp"
#include "densemet/range_set.hpp"
#include "densemet/space.hpp"

namespace densemet {

/// Disjoint nonempty pieces covering {0, ..., n-1}, each with a basepoint.
struct ClopenPartition {
  std::vector<IndexSet> pieces;
  IndexSet basepoints;

  /// Throws BadPartition unless the pieces partition {0..n-1} and every
  /// basepoint lies in its piece.
  void check(std::size_t n) const;
  /// piece index of every point.
  std::vector<std::size_t> owner(std::size_t n) const;

  bool operator==(const ClopenPartition&) const = default;
};

/// Coordinates under the max-norm.
struct Embedding {
  std::size_t dimension = 0;
  std::vector<std::vector<double>> coordinates;

  double distance(std::size_t i, std::size_t j) const;
  /// Pairwise max-norm distances, validated as a metric.
  FiniteMetricSpace metric(std::vector<std::string> labels) const;
};

// Sum amalgam: D = e_i inside B_i and e_i(x, p_i) + d(p_i, p_j) + e_j(p_j, y)
// across pieces. pieces_metrics[i] must carry the labels of pieces[i] in
// order. Intra-piece entries are copied, never recomputed.
FiniteMetricSpace amalgamate_metric(const FiniteMetricSpace& d, const ClopenPartition& partition,
                                    std::span<const FiniteMetricSpace> piece_metrics);

// Max amalgam of S-valued ultrametrics.
FiniteMetricSpace amalgamate_ultrametric(const FiniteMetricSpace& d, const ClopenPartition& partition,
                                         std::span<const FiniteMetricSpace> piece_metrics,
                                         const RangeSet& range, double tolerance = 0.0);

/// F(x) = min_a f(a) + l d(x, a) per component, with F = f on A exactly.
/// Throws NotLipschitzOnSubset if f is not l-Lipschitz on A (max-norm).
std::vector<std::vector<double>> mcshane_extend(const FiniteMetricSpace& space, const IndexSet& subset,
                                                const std::vector<std::vector<double>>& values,
                                                double lipschitz);
std::vector<double> mcshane_extend(const FiniteMetricSpace& space, const IndexSet& subset,
                                   std::span<const double> values, double lipschitz);

/// x -> (d(x, p))_{p in landmarks}.
Embedding kuratowski_embed(const FiniteMetricSpace& space, const IndexSet& landmarks);

/// A metric on the ambient points that restricts to dA on `subset`.
FiniteMetricSpace extend_metric(const FiniteMetricSpace& ambient, const IndexSet& subset,
                                const FiniteMetricSpace& subset_metric);
FiniteMetricSpace extend_ultrametric(const FiniteMetricSpace& ambient, const IndexSet& subset,
                                     const FiniteMetricSpace& subset_metric, const RangeSet& range);

/// Farthest-point net from index 0: stops once every point is within
/// distance < eps of the net. Pairwise net distances are >= eps.
IndexSet greedy_net(const FiniteMetricSpace& space, double eps);

/// Ball carving: the lowest remaining index becomes a center and its closed
/// radius-eps/2 ball among the remaining points becomes a piece.
ClopenPartition carve_partition(const FiniteMetricSpace& space, double eps);

/// Builds a metric of diameter <= eps on the given labels.
using PieceBuilder = std::function<FiniteMetricSpace(const std::vector<std::string>& labels, double eps)>;

/// Geometric sequential ultrametric s(n) = eps 2^-n on balanced binary codes.
FiniteMetricSpace geometric_piece(const std::vector<std::string>& labels, double eps);
/// eps-scaled middle-third Cantor metric on balanced binary codes.
FiniteMetricSpace cantor_piece(const std::vector<std::string>& labels, double eps);
/// S-valued sequential ultrametric using the largest elements of S below eps.
FiniteMetricSpace range_piece(const std::vector<std::string>& labels, double eps, const RangeSet& range);

struct DoublingApproximation {
  FiniteMetricSpace metric;
  Embedding embedding;
  IndexSet net;
};

/// Net + Kuratowski coordinates extended 1-Lipschitz, plus one injective
/// axis of diameter < eps. The metric is the max-norm metric of `embedding`.
DoublingApproximation approximate_doubling(const FiniteMetricSpace& d, double eps);

struct UdApproximation {
  FiniteMetricSpace metric;
  ClopenPartition partition;
  UDReport ud;
};

UdApproximation approximate_ud(const FiniteMetricSpace& d, double eps,
                               const PieceBuilder& piece_builder = geometric_piece);
/// Ultrametric route: S-valued pieces through the max amalgam.
UdApproximation approximate_ud_ultrametric(const FiniteMetricSpace& d, double eps, const RangeSet& range);

struct UpApproximation {
  FiniteMetricSpace metric;
  ClopenPartition partition;
  /// max(eps, largest d-diameter of a piece); singleton merging can push a
  /// piece above eps. The sup-distance guarantee is 4 * effective_epsilon.
  double effective_epsilon = 0.0;
  UPReport up;
  /// Set when r_min >= diam(D); `up` is then a placeholder with c_star 0.
  bool scale_window_empty = false;
  /// min over pieces of their own constant on [r_min, piece diameter);
  /// pieces whose window is empty do not constrain it (1 if none).
  double piece_constant = 1.0;
  double min_piece_diameter = 0.0;
  /// (1/2) min(piece_constant, min_piece_diameter / diam(D)).
  double lower_bound = 0.0;
};

/// Pieces of at least two points replaced by eps-scaled Cantor metrics.
/// r_min is the largest nearest-neighbour distance of the result, the
/// smallest scale at which every point has a neighbour.
UpApproximation approximate_up(const FiniteMetricSpace& d, double eps);

}  // namespace densemet
