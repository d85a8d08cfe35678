#include "densemet/lab.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "densemet/build.hpp"

namespace densemet::lab {

namespace {

constexpr std::array<std::pair<InstanceMode, std::string_view>, 3> kModes{{
    {InstanceMode::closure, "closure"},
    {InstanceMode::points_linf, "points_linf"},
    {InstanceMode::sequential, "sequential"},
}};

constexpr std::array<std::pair<Experiment, std::string_view>, 8> kExperiments{{
    {Experiment::dense_doubling, "dense_doubling"},
    {Experiment::dense_ud, "dense_ud"},
    {Experiment::dense_up, "dense_up"},
    {Experiment::dense_ult_doubling, "dense_ult_doubling"},
    {Experiment::dense_ult_up, "dense_ult_up"},
    {Experiment::perturb_uniform, "perturb_uniform"},
    {Experiment::perturb_chain, "perturb_chain"},
    {Experiment::type_grid, "type_grid"},
}};

bool is_dense(Experiment e) {
  return e == Experiment::dense_doubling || e == Experiment::dense_ud || e == Experiment::dense_up ||
         e == Experiment::dense_ult_doubling || e == Experiment::dense_ult_up;
}

bool is_ultrametric(Experiment e) {
  return e == Experiment::dense_ult_doubling || e == Experiment::dense_ult_up;
}

std::size_t default_size(Experiment e) {
  switch (e) {
    case Experiment::perturb_uniform:
      return 32;
    case Experiment::perturb_chain:
      return 33;
    case Experiment::type_grid:
      return 7;
    default:
      return 64;
  }
}

FiniteMetricSpace linf_points(std::size_t size, std::size_t dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<std::vector<double>> pts(size, std::vector<double>(dim));
  for (auto& p : pts) {
    for (auto& c : p) c = coord(rng);
  }
  DistanceMatrix m(size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < dim; ++k) v = std::max(v, std::abs(pts[i][k] - pts[j][k]));
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return validate(index_labels(size), std::move(m), Flavor::metric);
}

void add_moduli(std::map<std::string, double>& out, const Classification& c) {
  out["doubling_constant"] = c.doubling.constant;
  out["delta_star"] = c.ud.delta_star;
  out["c_star"] = c.up.c_star;
  out["r_min"] = c.up.r_min;
  out["u1"] = c.type.u1 ? 1.0 : 0.0;
  out["u2"] = c.type.u2 ? 1.0 : 0.0;
  out["u3"] = c.type.u3 ? 1.0 : 0.0;
}

bool embedding_matches(const FiniteMetricSpace& metric, const Embedding& embedding) {
  const double slack = 1e-12 * metric.diameter();
  for (std::size_t i = 0; i < metric.size(); ++i) {
    for (std::size_t j = i + 1; j < metric.size(); ++j) {
      if (std::abs(metric(i, j) - embedding.distance(i, j)) > slack) return false;
    }
  }
  return true;
}

bool net_is_valid(const FiniteMetricSpace& d, const IndexSet& net, double eps) {
  for (std::size_t a = 0; a < net.size(); ++a) {
    for (std::size_t b = a + 1; b < net.size(); ++b) {
      if (d(net[a], net[b]) < eps) return false;
    }
  }
  for (std::size_t x = 0; x < d.size(); ++x) {
    const bool covered = std::any_of(net.begin(), net.end(), [&](std::size_t p) { return d(x, p) < eps; });
    if (!covered) return false;
  }
  return true;
}

TrialRecord dense_trial(const ExperimentConfig& config, std::size_t index) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = trial_seed(config.seed, index);
  rec.label = std::string(to_string(config.experiment));
  try {
    const bool ultra = is_ultrametric(config.experiment);
    const auto d = ultra ? random_ultrametric(config.size, config.range, rec.seed)
                         : random_space(config.instance, config.size, rec.seed);
    rec.digest = digest(d);
    double eps = config.epsilon_relative ? config.epsilon * d.diameter() : config.epsilon;
    if (ultra) {
      eps = config.range.greatest_leq(eps);
      if (!(eps > 0.0)) throw Error(ErrorCode::BadRangeSet, "no positive element of S below epsilon");
    }
    rec.epsilon = eps;
    add_moduli(rec.before, assess(d, config.thresholds));

    switch (config.experiment) {
      case Experiment::dense_doubling: {
        const auto a = approximate_doubling(d, eps);
        rec.achieved = sup_distance(a.metric, d).value;
        rec.bound = 4.0 * eps;
        const bool iso = embedding_matches(a.metric, a.embedding);
        const bool net = net_is_valid(d, a.net, eps);
        rec.after["embedding_exact"] = iso ? 1.0 : 0.0;
        rec.after["net_valid"] = net ? 1.0 : 0.0;
        rec.after["net_size"] = static_cast<double>(a.net.size());
        rec.after["dimension"] = static_cast<double>(a.embedding.dimension);
        add_moduli(rec.after, assess(a.metric, config.thresholds));
        rec.pass = rec.achieved <= rec.bound && iso && net;
        break;
      }
      case Experiment::dense_ud: {
        const auto a = approximate_ud(d, eps);
        rec.achieved = sup_distance(a.metric, d).value;
        rec.bound = 4.0 * eps;
        rec.after["pieces"] = static_cast<double>(a.partition.pieces.size());
        add_moduli(rec.after, assess(a.metric, config.thresholds));
        rec.pass = rec.achieved <= rec.bound && a.ud.delta_star > 0.0;
        break;
      }
      case Experiment::dense_up: {
        const auto a = approximate_up(d, eps);
        rec.achieved = sup_distance(a.metric, d).value;
        rec.bound = 4.0 * a.effective_epsilon;
        rec.after["pieces"] = static_cast<double>(a.partition.pieces.size());
        rec.after["effective_epsilon"] = a.effective_epsilon;
        rec.after["up_lower_bound"] = a.lower_bound;
        rec.after["up_c_star"] = a.up.c_star;
        rec.after["up_r_min"] = a.up.r_min;
        rec.after["scale_window_empty"] = a.scale_window_empty ? 1.0 : 0.0;
        add_moduli(rec.after, assess(a.metric, config.thresholds));
        rec.pass = rec.achieved <= rec.bound && (a.scale_window_empty || a.up.c_star >= a.lower_bound);
        break;
      }
      case Experiment::dense_ult_doubling:
      case Experiment::dense_ult_up: {
        const auto a = approximate_ud_ultrametric(d, eps, config.range);
        rec.achieved = ultra_distance(a.metric, d, config.range).value;
        rec.bound = eps;
        rec.after["pieces"] = static_cast<double>(a.partition.pieces.size());
        add_moduli(rec.after, assess(a.metric, config.thresholds));
        rec.pass = rec.achieved <= rec.bound && a.ud.delta_star == 1.0;
        break;
      }
      default:
        throw Error(ErrorCode::BadConfig, "not a dense experiment");
    }
  } catch (const Error& e) {
    rec.pass = false;
    rec.error = e.what();
  }
  return rec;
}

TrialRecord perturb_trial(const ExperimentConfig& config, std::size_t index) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = trial_seed(config.seed, index);
  rec.label = std::string(to_string(config.experiment));
  rec.bound = 0.5;
  try {
    const bool uniform = config.experiment == Experiment::perturb_uniform;
    const auto D = uniform ? uniform_metric(config.size) : progression_metric(config.size);
    const auto p = perturb(D, rec.seed);
    rec.digest = digest(p.metric);
    rec.achieved = p.sup_distance;
    rec.epsilon = p.amplitude;
    rec.after["redraws"] = static_cast<double>(p.redraws);
    bool ok = rec.achieved < rec.bound;
    if (uniform) {
      const auto check = check_subset_bounds(D, p.metric, rec.seed);
      rec.after["subsets"] = static_cast<double>(check.subsets);
      rec.after["sampled"] = check.sampled ? 1.0 : 0.0;
      rec.after["diameter_slack"] = check.diameter_slack;
      rec.after["separation_slack"] = check.separation_slack;
      ok = ok && check.holds;
    } else {
      const double before = ud_modulus(D).delta_star;
      const double after = ud_modulus(p.metric).delta_star;
      rec.before["delta_star"] = before;
      rec.after["delta_star"] = after;
      rec.after["delta_star_bound"] = 4.0 * before;
      ok = ok && after <= 4.0 * before;
    }
    rec.pass = ok;
  } catch (const Error& e) {
    rec.pass = false;
    rec.error = e.what();
  }
  return rec;
}

void append_csv_field(std::string& line, std::string_view text) {
  if (!line.empty()) line += ',';
  if (text.find_first_of(",\"\n") == std::string_view::npos) {
    line += text;
    return;
  }
  line += '"';
  for (char ch : text) {
    if (ch == '"') line += '"';
    line += ch;
  }
  line += '"';
}

}  // namespace

std::string_view to_string(InstanceMode mode) {
  for (const auto& [m, name] : kModes) {
    if (m == mode) return name;
  }
  return "?";
}

InstanceMode parse_instance_mode(std::string_view name) {
  for (const auto& [m, n] : kModes) {
    if (n == name) return m;
  }
  throw Error(ErrorCode::BadConfig, "unknown instance mode \"" + std::string(name) + "\"");
}

std::string_view to_string(Experiment e) {
  for (const auto& [x, name] : kExperiments) {
    if (x == e) return name;
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  for (const auto& [x, n] : kExperiments) {
    if (n == name) return x;
  }
  throw Error(ErrorCode::BadConfig, "unknown experiment \"" + std::string(name) + "\"");
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string digest(const FiniteMetricSpace& space) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& label : space.labels()) {
    mix(label.data(), label.size());
    mix("\0", 1);
  }
  for (double v : space.matrix().data()) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    mix(&bits, sizeof bits);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ShrinkingSequence random_sequence(std::size_t length, double a, double M, std::uint64_t seed) {
  const Envelope env{a, M};
  std::mt19937_64 rng(seed);
  std::vector<double> values;
  for (std::size_t k = 0; k < length; ++k) {
    const double lo = env.lower(k);
    const double hi = k == 0 ? env.upper(0) : std::min(env.upper(k), values.back());
    values.push_back(hi > lo ? std::uniform_real_distribution<double>(lo, hi)(rng) : lo);
  }
  return ShrinkingSequence(std::move(values), env);
}

FiniteMetricSpace random_space(InstanceMode mode, std::size_t size, std::uint64_t seed) {
  if (size < 2) throw Error(ErrorCode::TooFewPoints, "random spaces need at least two points");
  std::mt19937_64 rng(seed);
  switch (mode) {
    case InstanceMode::closure: {
      std::uniform_real_distribution<double> entry(0.5, 2.0);
      DistanceMatrix raw(size);
      for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = i + 1; j < size; ++j) {
          raw(i, j) = entry(rng);
          raw(j, i) = raw(i, j);
        }
      }
      return metric_closure(index_labels(size), raw);
    }
    case InstanceMode::points_linf:
      return linf_points(size, 2, rng);
    case InstanceMode::sequential: {
      const double a = std::uniform_real_distribution<double>(0.3, 0.7)(rng);
      const double M = std::uniform_real_distribution<double>(1.0, 3.0)(rng);
      const auto codes = balanced_codes(size);
      const auto s = random_sequence(codes.front().size(), a, M, rng());
      return sequential_metric_on(codes, s, index_labels(size));
    }
  }
  throw Error(ErrorCode::BadInput, "unknown instance mode");
}

FiniteMetricSpace random_ultrametric(std::size_t size, const RangeSet& range, std::uint64_t seed) {
  const auto base = random_space(InstanceMode::points_linf, size, seed);
  const auto bottleneck = bottleneck_matrix(base);
  const double top = bottleneck.max_entry();
  const double target = range.greatest_leq(1.0);
  if (!(target > 0.0)) throw Error(ErrorCode::BadRangeSet, "range set has no positive element <= 1");
  DistanceMatrix m(size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      if (i != j) m(i, j) = range.least_geq(target * (bottleneck(i, j) / top));
    }
  }
  return validate(index_labels(size), std::move(m), Flavor::ultrametric, 0.0);
}

FiniteMetricSpace uniform_metric(std::size_t n) {
  DistanceMatrix m(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.0;
  return validate(index_labels(n), std::move(m), Flavor::metric, 0.0);
}

FiniteMetricSpace progression_metric(std::size_t n) {
  DistanceMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = std::abs(static_cast<double>(i) - static_cast<double>(j));
  }
  return validate(index_labels(n), std::move(m), Flavor::metric, 0.0);
}

Perturbation perturb(const FiniteMetricSpace& base, std::uint64_t seed, double amplitude) {
  const std::size_t n = base.size();
  std::mt19937_64 rng(seed);
  std::size_t redraws = 0;
  for (;;) {
    std::uniform_real_distribution<double> noise(-amplitude, amplitude);
    DistanceMatrix raw(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        raw(i, j) = base(i, j) + noise(rng);
        raw(j, i) = raw(i, j);
      }
    }
    const bool positive = std::all_of(raw.data().begin(), raw.data().end(), [](double v) { return v >= 0.0; });
    if (positive) {
      auto e = find_violation(raw, Flavor::metric, 0.0) ? metric_closure(base.labels(), raw)
                                                         : validate(base.labels(), raw, Flavor::metric, 0.0);
      const double gap = sup_distance(e, base).value;
      if (gap < 0.5) return {std::move(e), gap, redraws, amplitude};
    }
    ++redraws;
    if (redraws % 10 == 0) amplitude /= 2.0;
  }
}

SubsetCheck check_subset_bounds(const FiniteMetricSpace& D, const FiniteMetricSpace& e, std::uint64_t seed) {
  const std::size_t n = D.size();
  SubsetCheck out;
  auto test = [&](const IndexSet& subset) {
    const auto sd = subset_stats(D, subset);
    const auto se = subset_stats(e, subset);
    ++out.subsets;
    if (!(sd.diameter / 2.0 <= se.diameter)) out.holds = false;
    if (!(se.separation() <= 2.0 * sd.separation())) out.holds = false;
    out.diameter_slack = std::min(out.diameter_slack, se.diameter / (sd.diameter / 2.0));
    out.separation_slack = std::min(out.separation_slack, 2.0 * sd.separation() / se.separation());
  };
  IndexSet subset;
  if (n <= 12) {
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
      if (std::popcount(mask) < 2) continue;
      subset.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::uint32_t{1} << i)) subset.push_back(i);
      }
      test(subset);
    }
    return out;
  }
  out.sampled = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) test({i, j});
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size_dist(2, n);
  IndexSet pool(n);
  for (std::size_t trial = 0; trial < 10000; ++trial) {
    std::iota(pool.begin(), pool.end(), 0);
    const std::size_t k = size_dist(rng);
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[std::uniform_int_distribution<std::size_t>(i, n - 1)(rng)]);
    }
    subset.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(subset.begin(), subset.end());
    test(subset);
  }
  return out;
}

void ExperimentConfig::check() const {
  if (trials < 1) throw Error(ErrorCode::BadConfig, "trials must be >= 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorCode::BadConfig, "epsilon must be positive");
  if (experiment == Experiment::type_grid) {
    if (size < 6 || size > 10) throw Error(ErrorCode::BadConfig, "type_grid depth must lie in [6, 10]");
    return;
  }
  if (size < 2) throw Error(ErrorCode::BadConfig, "n must be >= 2");
  if (experiment == Experiment::dense_up && size < 3) {
    throw Error(ErrorCode::BadConfig, "dense_up needs n >= 3 so that pieces have two points");
  }
  if (is_ultrametric(experiment) && range.kind() == RangeSet::Kind::explicit_list && range.values().size() < 2) {
    throw Error(ErrorCode::BadConfig, "range set needs a positive element");
  }
}

ExperimentConfig ExperimentConfig::from_json(const io::Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::BadConfig, "config must be a JSON object");
  ExperimentConfig c;
  try {
    c.experiment = parse_experiment(j.at("experiment").get<std::string>());
    c.size = default_size(c.experiment);
    if (j.contains("n")) c.size = j.at("n").get<std::size_t>();
    if (j.contains("depth")) c.size = j.at("depth").get<std::size_t>();
    c.epsilon = j.value("epsilon", c.epsilon);
    const auto mode = j.value("epsilon_mode", std::string("fraction"));
    if (mode != "fraction" && mode != "absolute") throw Error(ErrorCode::BadConfig, "epsilon_mode must be fraction or absolute");
    c.epsilon_relative = mode == "fraction";
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    if (j.contains("thresholds")) c.thresholds = io::thresholds_from_json(j.at("thresholds"));
    if (j.contains("instance")) c.instance = parse_instance_mode(j.at("instance").get<std::string>());
    if (j.contains("range")) c.range = io::range_set_from_json(j.at("range"));
    c.out = j.value("out", std::string());
    const auto format = j.value("format", std::string("json"));
    if (format == "json") {
      c.format = Format::json;
    } else if (format == "csv") {
      c.format = Format::csv;
    } else {
      throw Error(ErrorCode::BadConfig, "format must be json or csv");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadConfig, e.what());
  }
  c.check();
  return c;
}

io::Json ExperimentConfig::to_json() const {
  io::Json j;
  j["experiment"] = to_string(experiment);
  j[experiment == Experiment::type_grid ? "depth" : "n"] = size;
  j["epsilon"] = epsilon;
  j["epsilon_mode"] = epsilon_relative ? "fraction" : "absolute";
  j["trials"] = trials;
  j["seed"] = seed;
  j["thresholds"] = io::to_json(thresholds);
  j["instance"] = to_string(instance);
  j["range"] = io::to_json(range);
  j["format"] = format == Format::json ? "json" : "csv";
  return j;
}

std::size_t ExperimentReport::passed() const {
  return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.pass; }));
}

std::vector<TrialRecord> run_dense(const ExperimentConfig& config) {
  config.check();
  if (!is_dense(config.experiment)) throw Error(ErrorCode::BadConfig, "not a dense experiment");
  std::vector<TrialRecord> out;
  for (std::size_t i = 0; i < config.trials; ++i) out.push_back(dense_trial(config, i));
  return out;
}

std::vector<TrialRecord> run_perturb(const ExperimentConfig& config) {
  config.check();
  if (config.experiment != Experiment::perturb_uniform && config.experiment != Experiment::perturb_chain) {
    throw Error(ErrorCode::BadConfig, "not a perturbation experiment");
  }
  std::vector<TrialRecord> out;
  for (std::size_t i = 0; i < config.trials; ++i) out.push_back(perturb_trial(config, i));
  return out;
}

std::vector<TrialRecord> run_type_grid(const ExperimentConfig& config) {
  config.check();
  const std::size_t depth = config.size;
  const std::size_t per_piece = std::size_t{1} << depth;
  constexpr std::size_t clusters = 4;
  constexpr double cluster_width = 1e-3;
  std::vector<TrialRecord> out;
  const auto targets = TypeBits::all();
  for (std::size_t row = 0; row < targets.size(); ++row) {
    const auto target = targets[row];
    TrialRecord rec;
    rec.index = row;
    rec.seed = trial_seed(config.seed, row);
    rec.label = target.str();
    try {
      const auto generated = generate_type(target, depth, rec.seed, config.thresholds);
      add_moduli(rec.before, generated.classification);

      // Host: four tight clusters whose centres sit at random distances in [1, 2].
      std::mt19937_64 rng(rec.seed);
      std::uniform_real_distribution<double> gap(1.0, 2.0);
      DistanceMatrix centres(clusters);
      for (std::size_t a = 0; a < clusters; ++a) {
        for (std::size_t b = a + 1; b < clusters; ++b) {
          centres(a, b) = gap(rng);
          centres(b, a) = centres(a, b);
        }
      }
      const std::size_t n = clusters * per_piece;
      DistanceMatrix host_matrix(n);
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          if (x != y) host_matrix(x, y) = centres(x / per_piece, y / per_piece) + cluster_width;
        }
      }
      const auto host = validate(index_labels(n), std::move(host_matrix), Flavor::metric);
      rec.digest = digest(host);
      const double eps = config.epsilon_relative ? config.epsilon * host.diameter() : config.epsilon;
      rec.epsilon = eps;
      const auto partition = carve_partition(host, eps);

      std::vector<FiniteMetricSpace> pieces;
      for (std::size_t p = 0; p < partition.pieces.size(); ++p) {
        const auto& piece = partition.pieces[p];
        std::vector<std::string> labels;
        for (std::size_t idx : piece) labels.push_back(host.labels()[idx]);
        if (piece.size() != per_piece) {
          pieces.push_back(validate(labels, host.restrict_to(piece).matrix(), Flavor::metric));
          continue;
        }
        const auto recipe = generate_type(target, depth, trial_seed(rec.seed, p + 1), config.thresholds).space;
        pieces.push_back(validate(labels, recipe.scaled(eps / recipe.diameter()).matrix(), Flavor::metric));
      }
      const auto amalgam = amalgamate_metric(host, partition, pieces);
      const auto after = assess(amalgam, config.thresholds);
      add_moduli(rec.after, after);
      rec.after["pieces"] = static_cast<double>(partition.pieces.size());
      rec.achieved = sup_distance(amalgam, host).value;
      rec.bound = 4.0 * eps;
      const auto& before = generated.classification.type;
      const TypeBits before_bits{before.u1, before.u2, before.u3};
      const TypeBits after_bits{after.type.u1, after.type.u2, after.type.u3};
      rec.pass = before_bits == target && after_bits == target && rec.achieved <= rec.bound;
    } catch (const Error& e) {
      rec.pass = false;
      rec.error = e.what();
    }
    out.push_back(std::move(rec));
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport report;
  report.config = config;
  if (is_dense(config.experiment)) {
    report.trials = run_dense(config);
  } else if (config.experiment == Experiment::type_grid) {
    report.trials = run_type_grid(config);
  } else {
    report.trials = run_perturb(config);
  }
  report.note =
      "Each trial checks a constructive approximation bound on one finite instance "
      "(sup-distance within 4 epsilon, ultrametric distance within epsilon, or a perturbation "
      "inequality). Passing trials show these bounds, not denseness of a class of metrics, "
      "which concerns infinite spaces.";
  return report;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string render_json(const ExperimentReport& report) {
  io::Json j;
  j["config"] = report.config.to_json();
  j["note"] = report.note;
  j["passed"] = report.passed();
  j["total"] = report.trials.size();
  j["all_pass"] = report.all_pass();
  io::Json trials = io::Json::array();
  for (const auto& t : report.trials) {
    io::Json before = io::Json::object();
    io::Json after = io::Json::object();
    for (const auto& [k, v] : t.before) before[k] = io::number(v);
    for (const auto& [k, v] : t.after) after[k] = io::number(v);
    trials.push_back(io::Json{{"index", t.index},
                              {"seed", t.seed},
                              {"label", t.label},
                              {"digest", t.digest},
                              {"epsilon", io::number(t.epsilon)},
                              {"achieved", io::number(t.achieved)},
                              {"bound", io::number(t.bound)},
                              {"before", before},
                              {"after", after},
                              {"pass", t.pass},
                              {"error", t.error}});
  }
  j["trials"] = std::move(trials);
  return j.dump(2) + "\n";
}

std::string render_csv(const ExperimentReport& report) {
  std::set<std::string> before_keys;
  std::set<std::string> after_keys;
  for (const auto& t : report.trials) {
    for (const auto& [k, v] : t.before) before_keys.insert(k);
    for (const auto& [k, v] : t.after) after_keys.insert(k);
  }
  std::string header;
  for (const char* col : {"index", "seed", "label", "digest", "epsilon", "achieved", "bound", "pass", "error"}) {
    append_csv_field(header, col);
  }
  for (const auto& k : before_keys) append_csv_field(header, "before." + k);
  for (const auto& k : after_keys) append_csv_field(header, "after." + k);
  std::string text = header + "\n";
  for (const auto& t : report.trials) {
    std::string line;
    append_csv_field(line, std::to_string(t.index));
    append_csv_field(line, std::to_string(t.seed));
    append_csv_field(line, t.label);
    append_csv_field(line, t.digest);
    append_csv_field(line, format_double(t.epsilon));
    append_csv_field(line, format_double(t.achieved));
    append_csv_field(line, format_double(t.bound));
    append_csv_field(line, t.pass ? "true" : "false");
    append_csv_field(line, t.error);
    for (const auto& k : before_keys) {
      const auto it = t.before.find(k);
      append_csv_field(line, it == t.before.end() ? "" : format_double(it->second));
    }
    for (const auto& k : after_keys) {
      const auto it = t.after.find(k);
      append_csv_field(line, it == t.after.end() ? "" : format_double(it->second));
    }
    text += line + "\n";
  }
  return text;
}

std::string render(const ExperimentReport& report, Format format) {
  return format == Format::json ? render_json(report) : render_csv(report);
}

}  // namespace densemet::lab
