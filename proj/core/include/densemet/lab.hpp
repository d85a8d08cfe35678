#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "densemet/cantor.hpp"
#include "densemet/io.hpp"
#include "densemet/moduli.hpp"
#include "densemet/range_set.hpp"
#include "densemet/space.hpp"

namespace densemet::lab {

enum class InstanceMode { closure, points_linf, sequential };

std::string_view to_string(InstanceMode mode);
InstanceMode parse_instance_mode(std::string_view name);

/// closure: uniform(0.5, 2) symmetric matrix through metric_closure.
/// points_linf: uniform points in [0, 1]^2 under the max-norm.
/// sequential: random enveloped sequence on balanced binary codes.
FiniteMetricSpace random_space(InstanceMode mode, std::size_t size, std::uint64_t seed);

/// Subdominant ultrametric of a random points_linf instance, scaled to the
/// largest element of S not above 1 and pushed up into S.
FiniteMetricSpace random_ultrametric(std::size_t size, const RangeSet& range, std::uint64_t seed);

/// s(k) uniform in [M^-1 a^k, min(M a^k, s(k-1))).
ShrinkingSequence random_sequence(std::size_t length, double a, double M, std::uint64_t seed);

/// Per-trial seed derived from the master seed (splitmix64).
std::uint64_t trial_seed(std::uint64_t master, std::size_t index);

/// FNV-1a over the labels and the bit patterns of the matrix, as hex.
std::string digest(const FiniteMetricSpace& space);

FiniteMetricSpace uniform_metric(std::size_t n);
/// Points 1..n on the line.
FiniteMetricSpace progression_metric(std::size_t n);

struct Perturbation {
  FiniteMetricSpace metric;
  double sup_distance = 0.0;
  std::size_t redraws = 0;
  double amplitude = 0.0;
};

/// Adds symmetric uniform(-amplitude, amplitude) noise off the diagonal.
/// Draws that break the triangle inequality are repaired by closure; draws
/// that end up at sup-distance >= 1/2 are redrawn, halving the amplitude
/// after every 10 misses.
Perturbation perturb(const FiniteMetricSpace& base, std::uint64_t seed, double amplitude = 0.49);

struct SubsetCheck {
  std::size_t subsets = 0;
  bool sampled = false;
  bool holds = true;
  /// min over A of delta_e(A) / (delta_D(A) / 2), and of 2 alpha_D(A) / alpha_e(A).
  double diameter_slack = kInfinity;
  double separation_slack = kInfinity;
};

/// delta_D(A)/2 <= delta_e(A) and alpha_e(A) <= 2 alpha_D(A) on every subset
/// for n <= 12, else on all pairs plus 10^4 seeded random subsets.
SubsetCheck check_subset_bounds(const FiniteMetricSpace& D, const FiniteMetricSpace& e, std::uint64_t seed);

enum class Experiment {
  dense_doubling,
  dense_ud,
  dense_up,
  dense_ult_doubling,
  dense_ult_up,
  perturb_uniform,
  perturb_chain,
  type_grid,
};

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

enum class Format { json, csv };

struct ExperimentConfig {
  Experiment experiment = Experiment::dense_doubling;
  /// Point count, or depth for type_grid.
  std::size_t size = 64;
  double epsilon = 0.125;
  /// epsilon is a fraction of the instance diameter.
  bool epsilon_relative = true;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  Thresholds thresholds;
  InstanceMode instance = InstanceMode::closure;
  RangeSet range = RangeSet::geometric(1.0, 0.5);
  std::string out;
  Format format = Format::json;

  /// Throws BadConfig.
  void check() const;
  static ExperimentConfig from_json(const io::Json& j);
  io::Json to_json() const;
};

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string label;
  std::string digest;
  double epsilon = 0.0;
  double achieved = 0.0;
  double bound = 0.0;
  std::map<std::string, double> before;
  std::map<std::string, double> after;
  bool pass = false;
  std::string error;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  std::string note;

  std::size_t passed() const;
  bool all_pass() const { return passed() == trials.size(); }
};

std::vector<TrialRecord> run_dense(const ExperimentConfig& config);
std::vector<TrialRecord> run_perturb(const ExperimentConfig& config);
/// One record per type, in TypeBits::all() order.
std::vector<TrialRecord> run_type_grid(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);

std::string render_json(const ExperimentReport& report);
std::string render_csv(const ExperimentReport& report);
std::string render(const ExperimentReport& report, Format format);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace densemet::lab
