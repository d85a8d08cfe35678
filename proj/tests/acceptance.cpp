// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "densemet/build.hpp"
#include "densemet/cantor.hpp"
#include "densemet/lab.hpp"
#include "oracles.hpp"

using namespace densemet;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr std::size_t kTrials = 100;
constexpr std::size_t kPoints = 64;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Construction outputs, re-validated by criterion 9.
std::vector<FiniteMetricSpace> collected;

void keep(const FiniteMetricSpace& s) {
  if (collected.size() < 2000) collected.push_back(s);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> labels_of(const FiniteMetricSpace& d, const IndexSet& piece) {
  std::vector<std::string> out;
  for (std::size_t i : piece) out.push_back(d.labels()[i]);
  return out;
}

bool restriction_identity(const FiniteMetricSpace& D, const ClopenPartition& partition,
                          const std::vector<FiniteMetricSpace>& pieces) {
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    if (!(D.restrict_to(partition.pieces[p]).matrix() == pieces[p].matrix())) return false;
  }
  return true;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct AmalgamRun {
  std::size_t ok = 0;
  double worst = 0.0;
  std::size_t multi_pieces = 0;
};

// Carve at eps = diam/8, put a random metric of diameter eps on every piece, glue.
AmalgamRun amalgam_protocol(lab::InstanceMode mode) {
  AmalgamRun run;
  for (std::size_t t = 0; t < kTrials; ++t) {
    const auto seed = lab::trial_seed(kSeed, t);
    const auto d = lab::random_space(mode, kPoints, seed);
    const double eps = d.diameter() / 8.0;
    const auto partition = carve_partition(d, eps);
    std::vector<FiniteMetricSpace> pieces;
    for (std::size_t p = 0; p < partition.pieces.size(); ++p) {
      const auto labels = labels_of(d, partition.pieces[p]);
      if (labels.size() == 1) {
        pieces.push_back(d.restrict_to(partition.pieces[p]));
        continue;
      }
      ++run.multi_pieces;
      const auto raw = lab::random_space(lab::InstanceMode::closure, labels.size(), lab::trial_seed(seed, p + 1));
      pieces.push_back(validate(labels, raw.scaled(eps / raw.diameter()).matrix(), Flavor::metric));
    }
    const auto D = amalgamate_metric(d, partition, pieces);
    keep(D);
    const double gap = sup_distance(D, d).value;
    run.worst = std::max(run.worst, gap / eps);
    if (gap <= 4.0 * eps && restriction_identity(D, partition, pieces)) ++run.ok;
  }
  return run;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto closure = amalgam_protocol(lab::InstanceMode::closure);
  const double elapsed = seconds_since(t0);
  // Closure instances have all distances >= 1/2 > eps/2, so every piece is a
  // singleton; the max-norm variant exercises multi-point pieces.
  const auto linf = amalgam_protocol(lab::InstanceMode::points_linf);
  o.pass = closure.ok == kTrials && elapsed < 10.0 && linf.ok == kTrials;
  o.detail = "closure " + std::to_string(closure.ok) + "/100 (" + std::to_string(closure.multi_pieces) +
             " multi-point pieces, max sup/eps " + fmt("%.4f", closure.worst) + ", " + fmt("%.2f s", elapsed) +
             "); points_linf " + std::to_string(linf.ok) + "/100 (" + std::to_string(linf.multi_pieces) +
             " multi-point pieces, max sup/eps " + fmt("%.4f", linf.worst) + ")";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto S = RangeSet::geometric(1.0, 0.5);
  std::size_t ok = 0;
  for (std::size_t t = 0; t < kTrials; ++t) {
    const auto d = lab::random_ultrametric(kPoints, S, lab::trial_seed(kSeed, t));
    const double eps = S.greatest_leq(d.diameter() / 8.0);
    const auto partition = carve_partition(d, eps);
    std::vector<FiniteMetricSpace> pieces;
    for (const auto& piece : partition.pieces) pieces.push_back(range_piece(labels_of(d, piece), eps, S));
    const auto D = amalgamate_ultrametric(d, partition, pieces, S);
    keep(D);
    const bool strong = !find_violation(D.matrix(), Flavor::ultrametric, 0.0);
    if (ultra_distance(D, d, S).value <= eps && strong && restriction_identity(D, partition, pieces)) ++ok;
  }
  o.pass = ok == kTrials;
  o.detail = std::to_string(ok) + "/100 trials with UD(D, d) <= eps and exact strong triangle";
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::size_t ok = 0;
  double worst_embed = 0.0;
  for (std::size_t t = 0; t < kTrials; ++t) {
    const auto d = lab::random_space(lab::InstanceMode::closure, kPoints, lab::trial_seed(kSeed + 1, t));
    const double eps = d.diameter() / 8.0;
    const auto a = approximate_doubling(d, eps);
    keep(a.metric);
    const bool bound = sup_distance(a.metric, d).value <= 4.0 * eps;
    bool embed = true;
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = 0; j < d.size(); ++j) {
        const double want = a.embedding.distance(i, j);
        const double rel = want == 0.0 ? std::abs(a.metric(i, j)) : std::abs(a.metric(i, j) - want) / want;
        worst_embed = std::max(worst_embed, rel);
        embed = embed && rel <= 1e-12;
      }
    }
    bool separated = true;
    for (std::size_t p : a.net) {
      for (std::size_t q : a.net) separated = separated && (p == q || d(p, q) >= eps);
    }
    bool covered = true;
    for (std::size_t x = 0; x < d.size(); ++x) {
      double near = kInfinity;
      for (std::size_t p : a.net) near = std::min(near, d(x, p));
      covered = covered && near <= eps;
    }
    if (bound && embed && separated && covered) ++ok;
  }
  o.pass = ok == kTrials;
  o.detail = std::to_string(ok) + "/100 trials, max relative embedding gap " + fmt("%.3g", worst_embed);
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  std::size_t bottleneck_ok = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t) % 7;
    const auto s = metric_closure(index_labels(n), DistanceMatrix::from_rows(oracle::random_raw(n, rng)));
    keep(s);
    if (bottleneck_matrix(s) == DistanceMatrix::from_rows(oracle::chain_minimax(oracle::rows(s)))) ++bottleneck_ok;
  }
  std::size_t up_ok = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 3 + static_cast<std::size_t>(t) % 30;
    const auto s = metric_closure(index_labels(n), DistanceMatrix::from_rows(oracle::random_raw(n, rng)));
    const double r_min = s.min_positive_distance();
    const double got = r_min < s.diameter() ? up_constant(s, r_min).c_star : 0.0;
    const double want = r_min < s.diameter() ? oracle::up_grid(oracle::rows(s), r_min, 200) : 0.0;
    worst = std::max(worst, std::abs(got - want));
    if (std::abs(got - want) <= 1e-6) ++up_ok;
  }
  const std::vector<double> values{0, 0.125, 0.25, 0.5, 1, 2, 4};
  const auto S = RangeSet::explicit_values(values);
  std::size_t ultra_ok = 0;
  auto random_ultra = [&](std::size_t n) {
    const auto mm = oracle::chain_minimax(oracle::random_raw(n, rng, 0.1, 4.0));
    DistanceMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = i == j ? 0.0 : S.least_geq(mm[i][j]);
    }
    return validate(index_labels(n), std::move(m), Flavor::ultrametric, 0.0);
  };
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t) % 5;
    const auto d = random_ultra(n);
    const auto e = random_ultra(n);
    if (ultra_distance(d, e, S).value == oracle::ultra_by_definition(oracle::rows(d), oracle::rows(e), values)) {
      ++ultra_ok;
    }
  }
  o.pass = bottleneck_ok == 200 && up_ok == 50 && ultra_ok == 100;
  o.detail = "bottleneck " + std::to_string(bottleneck_ok) + "/200, up_constant " + std::to_string(up_ok) +
             "/50 (max gap " + fmt("%.2g", worst) + "), ultra_distance " + std::to_string(ultra_ok) + "/100";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(kSeed + 5);
  std::uniform_real_distribution<double> ua(0.3, 0.7);
  std::uniform_real_distribution<double> um(1.0, 3.0);
  std::size_t ok = 0;
  double slack = kInfinity;
  for (std::size_t t = 0; t < 20; ++t) {
    const double a = ua(rng);
    const double M = um(rng);
    const auto s = lab::random_sequence(7, a, M, lab::trial_seed(kSeed, t));
    const auto space = sequential_metric(s, 7);
    keep(space);
    const double c = up_constant(space, s[5]).c_star;
    slack = std::min(slack, c / (a / (M * M)));
    if (c >= a / (M * M) * (1 - 1e-12)) ++ok;
  }
  const auto g = ShrinkingSequence::geometric(1.0, 0.5, 7);
  const double cg = up_constant(sequential_metric(g, 7), g[5]).c_star;
  const bool geometric = cg == 0.5 && cg == g.min_ratio();
  o.pass = ok == 20 && geometric;
  o.detail = std::to_string(ok) + "/20 random envelopes (min c*/bound " + fmt("%.3f", slack) +
             "), geometric c* = " + fmt("%.17g", cg);
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::size_t built = 0;
  std::size_t configs = 0;
  for (double b : {0.3, 0.4, 0.5, 0.6, 0.7}) {
    for (double M : {1.0, 2.0, 3.0, 4.0}) {
      ++configs;
      const auto S = RangeSet::geometric(1.0, b);
      try {
        const auto s = exponential_sequence(S, b, M, 8);
        bool good = s.size() == 8 && s.envelope().has_value();
        for (std::size_t n = 0; good && n < s.size(); ++n) {
          good = S.contains(s[n]) && s[n] >= s.envelope()->lower(n) && s[n] <= s.envelope()->upper(n);
          if (n > 0) good = good && s[n] < s[n - 1];
        }
        if (good) ++built;
      } catch (const Error&) {
      }
    }
  }
  const auto S = RangeSet::double_exponential(0.5);
  std::size_t obstructions = 0;
  std::size_t spaces = 0;
  std::size_t below = 0;
  for (double c : {0.3, 0.5, 0.7}) {
    std::vector<FiniteMetricSpace> instances{range_piece(index_labels(128), 1.0, S)};
    for (std::uint64_t seed = 0; seed < 4; ++seed) instances.push_back(lab::random_ultrametric(128, S, seed));
    bool found_all = true;
    for (const auto& u : instances) {
      keep(u);
      const auto n = up_obstruction(S, c, 6, u.diameter());
      if (!n) {
        found_all = false;
        continue;
      }
      const double r_min = std::pow(c, static_cast<double>(*n - 1)) * c;
      ++spaces;
      if (r_min < u.diameter() && up_constant(u, r_min).c_star < c) ++below;
    }
    if (found_all) ++obstructions;
  }
  o.pass = built == configs && obstructions == 3 && below == spaces && spaces == 15;
  o.detail = "exponential_sequence " + std::to_string(built) + "/" + std::to_string(configs) +
             ", obstruction found for " + std::to_string(obstructions) + "/3 values of c, up_constant < c on " +
             std::to_string(below) + "/" + std::to_string(spaces) + " spaces";
  return o;
}

Outcome criterion7() {
  Outcome o;
  lab::ExperimentConfig uniform;
  uniform.experiment = lab::Experiment::perturb_uniform;
  uniform.size = 32;
  uniform.trials = kTrials;
  uniform.seed = kSeed;
  const auto u = lab::run_perturb(uniform);
  lab::ExperimentConfig chain = uniform;
  chain.experiment = lab::Experiment::perturb_chain;
  chain.size = 33;
  const auto c = lab::run_perturb(chain);
  auto passed = [](const std::vector<lab::TrialRecord>& r) {
    return static_cast<std::size_t>(std::count_if(r.begin(), r.end(), [](const auto& t) { return t.pass; }));
  };
  for (std::uint64_t s = 0; s < 5; ++s) keep(lab::perturb(lab::uniform_metric(32), s).metric);
  const double base = ud_modulus(lab::progression_metric(33)).delta_star;
  o.pass = passed(u) == kTrials && passed(c) == kTrials && base == 1.0 / 32;
  o.detail = "uniform n=32 " + std::to_string(passed(u)) + "/100, progression n=33 " + std::to_string(passed(c)) +
             "/100, delta*(D) = " + fmt("%.17g", base);
  return o;
}

Outcome criterion8() {
  Outcome o;
  lab::ExperimentConfig config;
  config.experiment = lab::Experiment::type_grid;
  config.size = 7;
  config.seed = kSeed;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = lab::run_type_grid(config);
  const double elapsed = seconds_since(t0);
  std::size_t ok = 0;
  std::string failed;
  for (const auto& r : rows) {
    if (r.pass) {
      ++ok;
    } else {
      failed += " " + r.label + (r.error.empty() ? "" : "[" + r.error + "]");
    }
  }
  for (const auto& t : TypeBits::all()) keep(generate_type(t, 7, kSeed).space);
  o.pass = ok == 8 && elapsed < 60.0;
  o.detail = std::to_string(ok) + "/8 types preserved, " + fmt("%.2f s", elapsed) + failed;
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::size_t valid = 0;
  for (const auto& s : collected) {
    try {
      validate(s.labels(), s.matrix(), s.flavor(), 1e-9);
      ++valid;
    } catch (const Error&) {
    }
  }
  std::mt19937_64 rng(kSeed + 9);
  std::size_t detected = 0;
  constexpr std::size_t fuzz = 500;
  for (std::size_t t = 0; t < fuzz; ++t) {
    const std::size_t n = 3 + t % 10;
    const auto base = lab::random_space(lab::InstanceMode::closure, n, rng());
    auto m = base.matrix();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    bool correct = false;
    switch (t % 4) {
      case 0: {
        m(i, j) = m(j, i) = 3.0 * m.max_entry();
        const auto w = find_violation(m, Flavor::metric);
        correct = w && w->code == ErrorCode::TriangleViolation && m(w->i, w->j) > m(w->i, w->k) + m(w->k, w->j);
        break;
      }
      case 1: {
        m(i, j) *= 1.5;
        const auto w = find_violation(m, Flavor::metric);
        correct = w && w->code == ErrorCode::AsymmetricMatrix && w->i == std::min(i, j) && w->j == std::max(i, j);
        break;
      }
      case 2: {
        m(i, i) = 0.25;
        const auto w = find_violation(m, Flavor::metric);
        correct = w && w->code == ErrorCode::NonzeroDiagonal && w->i == i;
        break;
      }
      default: {
        m(i, j) = m(j, i) = -0.5;
        const auto w = find_violation(m, Flavor::metric);
        correct = w && w->code == ErrorCode::NonpositiveOffDiagonal && w->i == std::min(i, j) &&
                  w->j == std::max(i, j);
        break;
      }
    }
    if (correct) ++detected;
  }
  o.pass = valid == collected.size() && detected == fuzz;
  o.detail = std::to_string(valid) + "/" + std::to_string(collected.size()) + " outputs valid at 1e-9, " +
             std::to_string(detected) + "/" + std::to_string(fuzz) + " fuzzed violations caught with witness";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu: %s  %s\n", k + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
