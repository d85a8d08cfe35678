#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "densemet/space.hpp"

namespace densemet {

// ---------------------------------------------------------------------------
// Doubling: card(A) <= C * (diam(A) / sep(A))^beta over subsets |A| >= 2.
// ---------------------------------------------------------------------------

enum class DoublingMode { exhaustive, sampled };

std::string_view to_string(DoublingMode mode);

struct DoublingOptions {
  /// Random subsets drawn in sampled mode.
  std::size_t budget = 256;
  std::uint64_t seed = 0;
  /// Spaces with at most this many points are enumerated exhaustively.
  std::size_t exhaustive_limit = 15;
};

struct DoublingReport {
  double beta = 1.0;
  /// Max of card(A) / (diam/sep)^beta over the examined subsets. In sampled
  /// mode this is a lower bound for the true maximum.
  double constant = 0.0;
  IndexSet witness;
  DoublingMode mode = DoublingMode::exhaustive;
};

/// Exhaustive for small spaces. Sampled mode scans all pairs, the full set,
/// every nearest-neighbour ball around every point, and `budget` random
/// subsets. Witness ties go to the lexicographically smallest index set.
DoublingReport doubling_constant(const FiniteMetricSpace& space, double beta,
                                 const DoublingOptions& options = {});

// ---------------------------------------------------------------------------
// Uniform disconnectedness.
// ---------------------------------------------------------------------------

/// Entry (x, y) is the minimax chain cost: the least possible largest step
/// over chains from x to y. Read off a minimum spanning tree.
DistanceMatrix bottleneck_matrix(const FiniteMetricSpace& space);

/// The chain realising bottleneck(x, y): the path between x and y in the
/// minimum spanning tree, endpoints included.
IndexSet minimax_chain(const FiniteMetricSpace& space, std::size_t x, std::size_t y);

struct UDReport {
  /// min over x != y of bottleneck(x, y) / d(x, y); in (0, 1].
  double delta_star = 1.0;
  std::pair<std::size_t, std::size_t> witness_pair{0, 1};
  DistanceMatrix bottleneck;
};

UDReport ud_modulus(const FiniteMetricSpace& space);

// ---------------------------------------------------------------------------
// Uniform perfectness above a scale cutoff.
// ---------------------------------------------------------------------------

struct UPReport {
  /// sup of c such that every x and r in [r_min, diam) admit y with
  /// c r <= d(x, y) <= r.
  double c_star = 0.0;
  double r_min = 0.0;
  /// Point and radius where the constraint binds. The radius is the
  /// supremum of the failing radii (the constraint fails just below it),
  /// or r_min itself when no point lies within r_min.
  std::size_t witness_point = 0;
  double witness_radius = 0.0;
};

/// Throws BadScaleCutoff unless 0 < r_min < diam.
UPReport up_constant(const FiniteMetricSpace& space, double r_min);

// ---------------------------------------------------------------------------
// Type classification.
// ---------------------------------------------------------------------------

struct Thresholds {
  double beta0 = 2.0;
  double c_max = 32.0;
  double delta_min = 0.05;
  double c_min = 0.05;
  DoublingOptions doubling;

  bool operator==(const Thresholds&) const = default;
};

struct TypeVector {
  bool u1 = false;  // doubling
  bool u2 = false;  // uniformly disconnected
  bool u3 = false;  // uniformly perfect
  Thresholds thresholds;

  bool same_bits(const TypeVector& other) const {
    return u1 == other.u1 && u2 == other.u2 && u3 == other.u3;
  }
  /// "(u1,u2,u3)", e.g. "(1,0,1)".
  std::string bits() const;
};

struct Classification {
  TypeVector type;
  DoublingReport doubling;
  UDReport ud;
  UPReport up;
};

/// r_min defaults to the smallest positive distance. When the scale window
/// [r_min, diam) is empty (all distances equal) c_star is reported as 0.
Classification assess(const FiniteMetricSpace& space, const Thresholds& thresholds = {},
                      std::optional<double> r_min = std::nullopt);

TypeVector classify(const FiniteMetricSpace& space, const Thresholds& thresholds = {},
                    std::optional<double> r_min = std::nullopt);

}  // namespace densemet
