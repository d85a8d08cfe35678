// densemet command line driver.
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "densemet/build.hpp"
#include "densemet/cantor.hpp"
#include "densemet/io.hpp"
#include "densemet/lab.hpp"
#include "densemet/moduli.hpp"

namespace {

using densemet::io::Json;
namespace io = densemet::io;
namespace lab = densemet::lab;

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string format;
  std::string out;
};

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), rows);
  } else if (j.is_number_float()) {
    rows.emplace_back(prefix, lab::format_double(j.get<double>()));
  } else if (j.is_string()) {
    rows.emplace_back(prefix, j.get<std::string>());
  } else {
    rows.emplace_back(prefix, j.dump());
  }
}

void emit(const Common& common, const std::string& text) {
  if (common.out.empty()) {
    std::cout << text;
  } else {
    io::write_text(common.out, text);
  }
}

void emit(const Common& common, const Json& j) {
  if (common.format == "csv") {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(j, "", rows);
    std::string text = "key,value\n";
    for (const auto& [k, v] : rows) text += k + "," + v + "\n";
    emit(common, text);
  } else {
    emit(common, j.dump(2) + "\n");
  }
}

densemet::Thresholds load_thresholds(const std::string& path, const Common& common) {
  densemet::Thresholds t;
  if (!path.empty()) t = io::thresholds_from_json(io::read_json(path));
  if (common.seed) t.doubling.seed = *common.seed;
  return t;
}

int cmd_validate(const Common& common, const std::string& file, double tolerance) {
  const auto j = io::read_json(file);
  try {
    const auto space = io::space_from_json(j, tolerance);
    emit(common, Json{{"valid", true}, {"points", space.size()}, {"flavor", to_string(space.flavor())},
                      {"diameter", space.diameter()}});
    return 0;
  } catch (const densemet::Error& e) {
    emit(common, Json{{"valid", false}, {"error", to_string(e.code())}, {"message", e.what()}});
    return 1;
  }
}

int cmd_moduli(const Common& common, const std::string& file, std::optional<double> beta,
               std::optional<double> r_min, const std::string& thresholds_file, bool bottleneck) {
  const auto space = io::space_from_json(io::read_json(file));
  auto thresholds = load_thresholds(thresholds_file, common);
  if (beta) thresholds.beta0 = *beta;
  const auto c = densemet::assess(space, thresholds, r_min);
  emit(common, io::to_json(c, bottleneck));
  return 0;
}

int cmd_amalgamate(const Common& common, const std::string& host_file, const std::string& partition_file,
                   const std::vector<std::string>& piece_files, const std::string& range_file) {
  const auto d = io::space_from_json(io::read_json(host_file));
  const auto partition = io::partition_from_json(io::read_json(partition_file));
  std::vector<densemet::FiniteMetricSpace> pieces;
  for (const auto& f : piece_files) pieces.push_back(io::space_from_json(io::read_json(f)));
  if (range_file.empty()) {
    const auto D = densemet::amalgamate_metric(d, partition, pieces);
    emit(common, Json{{"metric", io::to_json(D)}, {"sup_distance", io::to_json(densemet::sup_distance(D, d))}});
  } else {
    const auto range = io::range_set_from_json(io::read_json(range_file));
    const auto D = densemet::amalgamate_ultrametric(d, partition, pieces, range);
    emit(common, Json{{"metric", io::to_json(D)},
                      {"ultra_distance", io::to_json(densemet::ultra_distance(D, d, range))}});
  }
  return 0;
}

int cmd_approximate(const Common& common, const std::string& file, const std::string& property, double epsilon,
                    bool relative, const std::string& range_file) {
  const auto d = io::space_from_json(io::read_json(file));
  const double eps = relative ? epsilon * d.diameter() : epsilon;
  Json j{{"property", property}, {"epsilon", eps}};
  bool pass = false;
  if (property == "doubling") {
    const auto a = densemet::approximate_doubling(d, eps);
    const double gap = densemet::sup_distance(a.metric, d).value;
    j["metric"] = io::to_json(a.metric);
    j["embedding"] = io::to_json(a.embedding);
    j["net"] = a.net;
    j["sup_distance"] = gap;
    j["bound"] = 4.0 * eps;
    pass = gap <= 4.0 * eps;
  } else if (property == "ud") {
    if (range_file.empty()) {
      const auto a = densemet::approximate_ud(d, eps);
      const double gap = densemet::sup_distance(a.metric, d).value;
      j["metric"] = io::to_json(a.metric);
      j["partition"] = io::to_json(a.partition);
      j["ud"] = io::to_json(a.ud, false);
      j["sup_distance"] = gap;
      j["bound"] = 4.0 * eps;
      pass = gap <= 4.0 * eps;
    } else {
      const auto range = io::range_set_from_json(io::read_json(range_file));
      const double snapped = range.greatest_leq(eps);
      const auto a = densemet::approximate_ud_ultrametric(d, snapped, range);
      const double gap = densemet::ultra_distance(a.metric, d, range).value;
      j["epsilon"] = snapped;
      j["metric"] = io::to_json(a.metric);
      j["partition"] = io::to_json(a.partition);
      j["ud"] = io::to_json(a.ud, false);
      j["ultra_distance"] = io::number(gap);
      j["bound"] = snapped;
      pass = gap <= snapped;
    }
  } else if (property == "up") {
    const auto a = densemet::approximate_up(d, eps);
    const double gap = densemet::sup_distance(a.metric, d).value;
    j["metric"] = io::to_json(a.metric);
    j["partition"] = io::to_json(a.partition);
    j["effective_epsilon"] = a.effective_epsilon;
    j["up"] = io::to_json(a.up);
    j["scale_window_empty"] = a.scale_window_empty;
    j["piece_constant"] = a.piece_constant;
    j["lower_bound"] = a.lower_bound;
    j["sup_distance"] = gap;
    j["bound"] = 4.0 * a.effective_epsilon;
    pass = gap <= 4.0 * a.effective_epsilon && (a.scale_window_empty || a.up.c_star >= a.lower_bound);
  } else {
    throw densemet::Error(densemet::ErrorCode::BadInput, "property must be doubling, ud or up");
  }
  j["pass"] = pass;
  emit(common, j);
  return pass ? 0 : 1;
}

int cmd_cantor_gen(const Common& common, const std::string& sequence_file, const std::string& type,
                   std::size_t depth, std::optional<double> euclidean_scale, const std::string& thresholds_file) {
  const int chosen = static_cast<int>(!sequence_file.empty()) + static_cast<int>(!type.empty()) +
                     static_cast<int>(euclidean_scale.has_value());
  if (chosen != 1) {
    throw densemet::Error(densemet::ErrorCode::BadInput, "pass exactly one of --sequence, --type, --euclidean");
  }
  if (!sequence_file.empty()) {
    const auto s = io::sequence_from_json(io::read_json(sequence_file));
    emit(common, io::to_json(densemet::sequential_metric(s, depth)));
  } else if (euclidean_scale) {
    emit(common, io::to_json(densemet::euclidean_cantor_metric(depth, *euclidean_scale)));
  } else {
    const auto g = densemet::generate_type(densemet::TypeBits::parse(type), depth, common.seed.value_or(0),
                                           load_thresholds(thresholds_file, common));
    emit(common, Json{{"target", g.target.bits.str()},
                      {"recipe", g.target.recipe},
                      {"classification", io::to_json(g.classification)},
                      {"space", io::to_json(g.space)}});
  }
  return 0;
}

int cmd_rangeset_check(const Common& common, const std::string& file, double a, double M, std::size_t N,
                       std::optional<double> c) {
  const auto range = io::range_set_from_json(io::read_json(file));
  const auto w = densemet::is_exponential_window(range, a, M, N);
  Json witnesses = Json::array();
  for (double v : w.witnesses) witnesses.push_back(io::number(v));
  Json j{{"range", io::to_json(range)}, {"a", a}, {"M", M}, {"N", N}, {"window_ok", w.ok},
         {"witnesses", witnesses}, {"failing_n", nullptr}};
  if (w.failing_n) j["failing_n"] = *w.failing_n;
  if (c) {
    const auto n = densemet::up_obstruction(range, *c, N);
    j["c"] = *c;
    j["obstruction_n"] = n ? Json(*n) : Json(nullptr);
  }
  emit(common, j);
  return w.ok ? 0 : 1;
}

int cmd_rangeset_sequence(const Common& common, const std::string& file, double b, double M, std::size_t length) {
  const auto range = io::range_set_from_json(io::read_json(file));
  emit(common, io::to_json(densemet::exponential_sequence(range, b, M, length)));
  return 0;
}

int cmd_experiment(const Common& common, const std::string& file) {
  auto j = io::read_json(file);
  if (common.seed) j["seed"] = *common.seed;
  if (common.trials) j["trials"] = *common.trials;
  auto config = lab::ExperimentConfig::from_json(j);
  if (!common.format.empty()) config.format = common.format == "csv" ? lab::Format::csv : lab::Format::json;
  if (!common.out.empty()) config.out = common.out;
  const auto report = lab::run_experiment(config);
  const auto text = lab::render(report, config.format);
  if (config.out.empty()) {
    std::cout << text;
  } else {
    io::write_text(config.out, text);
  }
  std::cerr << to_string(config.experiment) << ": " << report.passed() << "/" << report.trials.size()
            << " trials pass\n";
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite metric spaces: validation, moduli, amalgamation and approximation experiments"};
  app.require_subcommand(1);
  Common common;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed");
  auto* trials_opt = app.add_option("--trials", trials, "Trial count override for experiments");
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", common.out, "Write output to this file instead of stdout");

  std::string file;
  double tolerance = densemet::kDefaultTolerance;
  auto* validate = app.add_subcommand("validate", "Validate a metric-space file");
  validate->add_option("file", file)->required();
  validate->add_option("--tolerance", tolerance, "Relative validation slack");

  std::optional<double> beta;
  std::optional<double> r_min;
  std::string thresholds_file;
  bool bottleneck = false;
  auto* moduli = app.add_subcommand("moduli", "Doubling, UD and UP moduli and the type vector");
  moduli->add_option("file", file)->required();
  moduli->add_option("--beta", beta, "Doubling exponent");
  moduli->add_option("--rmin", r_min, "Scale cutoff for the UP constant");
  moduli->add_option("--thresholds", thresholds_file, "Thresholds JSON file");
  moduli->add_flag("--bottleneck", bottleneck, "Include the bottleneck matrix");

  std::string partition_file;
  std::vector<std::string> piece_files;
  std::string range_file;
  auto* amalgamate = app.add_subcommand("amalgamate", "Glue piece metrics over a partition");
  amalgamate->add_option("d", file, "Host metric")->required();
  amalgamate->add_option("partition", partition_file)->required();
  amalgamate->add_option("pieces", piece_files)->required();
  amalgamate->add_option("--range", range_file, "Range set file; selects the ultrametric amalgam");

  std::string property;
  double epsilon = 0.125;
  bool absolute = false;
  auto* approximate = app.add_subcommand("approximate", "Approximate a metric by one with a given property");
  approximate->add_option("file", file)->required();
  approximate->add_option("--property", property)->required()->check(CLI::IsMember({"doubling", "ud", "up"}));
  approximate->add_option("--epsilon", epsilon, "Fraction of the diameter (absolute with --absolute)");
  approximate->add_flag("--absolute", absolute, "Read --epsilon as an absolute distance");
  approximate->add_option("--range", range_file, "Range set file for the ultrametric ud route");

  std::string sequence_file;
  std::string type;
  std::size_t depth = 7;
  std::optional<double> euclidean_scale;
  auto* cantor = app.add_subcommand("cantor", "Truncated Cantor spaces");
  cantor->require_subcommand(1);
  auto* gen = cantor->add_subcommand("gen", "Generate a space");
  gen->add_option("--sequence", sequence_file, "Sequence JSON file");
  gen->add_option("--type", type, "Target type, e.g. 1,0,1");
  gen->add_option("--euclidean", euclidean_scale, "Middle-third metric with this scale");
  gen->add_option("--depth", depth, "Depth");
  gen->add_option("--thresholds", thresholds_file, "Thresholds JSON file");

  double a = 0.5;
  double M = 1.0;
  std::size_t N = 16;
  std::optional<double> c;
  std::size_t length = 8;
  auto* rangeset = app.add_subcommand("rangeset", "Range-set window tools");
  rangeset->require_subcommand(1);
  auto* check = rangeset->add_subcommand("check", "Exponential window check");
  check->add_option("file", file)->required();
  check->add_option("--a", a);
  check->add_option("--M", M);
  check->add_option("--N", N);
  check->add_option("--c", c, "Also search for a UP obstruction at this c");
  auto* sequence = rangeset->add_subcommand("sequence", "S-valued exponential sequence");
  sequence->add_option("file", file)->required();
  sequence->add_option("--b", a);
  sequence->add_option("--M", M);
  sequence->add_option("--length", length);

  auto* experiment = app.add_subcommand("experiment", "Run an experiment config");
  experiment->add_option("config", file)->required();

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) common.seed = seed;
  if (trials_opt->count() > 0) common.trials = trials;

  try {
    if (validate->parsed()) return cmd_validate(common, file, tolerance);
    if (moduli->parsed()) return cmd_moduli(common, file, beta, r_min, thresholds_file, bottleneck);
    if (amalgamate->parsed()) return cmd_amalgamate(common, file, partition_file, piece_files, range_file);
    if (approximate->parsed()) return cmd_approximate(common, file, property, epsilon, !absolute, range_file);
    if (gen->parsed()) return cmd_cantor_gen(common, sequence_file, type, depth, euclidean_scale, thresholds_file);
    if (check->parsed()) return cmd_rangeset_check(common, file, a, M, N, c);
    if (sequence->parsed()) return cmd_rangeset_sequence(common, file, a, M, length);
    if (experiment->parsed()) return cmd_experiment(common, file);
  } catch (const densemet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
