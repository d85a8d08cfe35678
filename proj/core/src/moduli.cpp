#include "densemet/moduli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "densemet/range_set.hpp"

namespace densemet {

std::string_view to_string(DoublingMode mode) {
  return mode == DoublingMode::exhaustive ? "exhaustive" : "sampled";
}

namespace {

double doubling_ratio(std::size_t card, double diameter, double separation, double beta) {
  return static_cast<double>(card) / std::pow(diameter / separation, beta);
}

IndexSet mask_to_set(std::uint32_t mask) {
  IndexSet s;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1U) s.push_back(i);
  }
  return s;
}

// Tracks the best ratio and the lexicographically smallest set attaining it.
struct BestSubset {
  double ratio = -1.0;
  IndexSet set;

  void offer(double r, const IndexSet& candidate) {
    if (r > ratio || (r == ratio && candidate < set)) {
      ratio = r;
      set = candidate;
    }
  }
};

DoublingReport doubling_exhaustive(const FiniteMetricSpace& space, double beta) {
  const std::size_t n = space.size();
  const std::uint32_t full = (std::uint32_t{1} << n);
  std::vector<double> diam(full, 0.0);
  std::vector<double> sep(full, kInfinity);
  BestSubset best;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    const std::uint32_t rest = mask & (mask - 1);
    double d = diam[rest];
    double s = sep[rest];
    for (std::uint32_t r = rest; r != 0; r &= r - 1) {
      const double v = space(low, static_cast<std::size_t>(std::countr_zero(r)));
      d = std::max(d, v);
      s = std::min(s, v);
    }
    diam[mask] = d;
    sep[mask] = s;
    const auto card = static_cast<std::size_t>(std::popcount(mask));
    if (card < 2) continue;
    const double ratio = doubling_ratio(card, d, s, beta);
    if (ratio >= best.ratio) best.offer(ratio, mask_to_set(mask));
  }
  return {beta, best.ratio, best.set, DoublingMode::exhaustive};
}

DoublingReport doubling_sampled(const FiniteMetricSpace& space, double beta,
                                const DoublingOptions& options) {
  const std::size_t n = space.size();
  BestSubset best;
  // All pairs have diam == sep.
  best.offer(doubling_ratio(2, 1.0, 1.0, beta), IndexSet{0, 1});

  IndexSet all(n);
  std::iota(all.begin(), all.end(), 0);
  const auto whole = subset_stats(space, all);
  best.offer(doubling_ratio(n, whole.diameter, whole.separation(), beta), all);

  // Growing balls: every prefix of the neighbours of x sorted by distance.
  IndexSet order(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return space(x, a) < space(x, b); });
    double d = 0.0;
    double s = kInfinity;
    for (std::size_t k = 1; k < n; ++k) {
      const std::size_t y = order[k];
      for (std::size_t t = 0; t < k; ++t) {
        const double v = space(y, order[t]);
        d = std::max(d, v);
        s = std::min(s, v);
      }
      const double ratio = doubling_ratio(k + 1, d, s, beta);
      if (ratio >= best.ratio) {
        IndexSet ball(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k + 1));
        std::sort(ball.begin(), ball.end());
        best.offer(ratio, ball);
      }
    }
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> size_dist(2, n);
  for (std::size_t trial = 0; trial < options.budget; ++trial) {
    const std::size_t k = size_dist(rng);
    IndexSet pool = all;
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    IndexSet subset(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(subset.begin(), subset.end());
    const auto st = subset_stats(space, subset);
    best.offer(doubling_ratio(k, st.diameter, st.separation(), beta), subset);
  }
  return {beta, best.ratio, best.set, DoublingMode::sampled};
}

// Prim's algorithm on the complete graph; parent[root] == root.
std::vector<std::size_t> spanning_tree(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  std::vector<std::size_t> parent(n, 0);
  std::vector<double> key(n, kInfinity);
  std::vector<bool> in_tree(n, false);
  key[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && (u == n || key[v] < key[u])) u = v;
    }
    in_tree[u] = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && space(u, v) < key[v]) {
        key[v] = space(u, v);
        parent[v] = u;
      }
    }
  }
  return parent;
}

std::vector<std::vector<std::size_t>> tree_adjacency(const std::vector<std::size_t>& parent) {
  std::vector<std::vector<std::size_t>> adj(parent.size());
  for (std::size_t v = 1; v < parent.size(); ++v) {
    adj[v].push_back(parent[v]);
    adj[parent[v]].push_back(v);
  }
  return adj;
}

}  // namespace

DoublingReport doubling_constant(const FiniteMetricSpace& space, double beta,
                                 const DoublingOptions& options) {
  if (!(beta > 0.0)) throw Error(ErrorCode::BadInput, "beta must be positive");
  if (space.size() < 2) throw Error(ErrorCode::DegenerateSpace, "doubling constant needs two points");
  if (space.size() <= std::min<std::size_t>(options.exhaustive_limit, 20)) {
    return doubling_exhaustive(space, beta);
  }
  return doubling_sampled(space, beta, options);
}

DistanceMatrix bottleneck_matrix(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  DistanceMatrix out(n);
  const auto adj = tree_adjacency(spanning_tree(space));
  std::vector<std::size_t> stack;
  std::vector<bool> seen(n);
  for (std::size_t src = 0; src < n; ++src) {
    std::fill(seen.begin(), seen.end(), false);
    stack.assign(1, src);
    seen[src] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v : adj[u]) {
        if (seen[v]) continue;
        seen[v] = true;
        out(src, v) = std::max(out(src, u), space(u, v));
        stack.push_back(v);
      }
    }
  }
  return out;
}

IndexSet minimax_chain(const FiniteMetricSpace& space, std::size_t x, std::size_t y) {
  const std::size_t n = space.size();
  if (x >= n || y >= n) throw Error(ErrorCode::BadInput, "index out of range");
  const auto adj = tree_adjacency(spanning_tree(space));
  std::vector<std::size_t> prev(n, n);
  std::vector<std::size_t> stack{x};
  prev[x] = x;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u]) {
      if (prev[v] != n) continue;
      prev[v] = u;
      stack.push_back(v);
    }
  }
  IndexSet chain{y};
  while (chain.back() != x) chain.push_back(prev[chain.back()]);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

UDReport ud_modulus(const FiniteMetricSpace& space) {
  if (space.size() < 2) throw Error(ErrorCode::DegenerateSpace, "ud modulus needs two points");
  UDReport report;
  report.bottleneck = bottleneck_matrix(space);
  report.delta_star = kInfinity;
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      const double ratio = report.bottleneck(i, j) / space(i, j);
      if (ratio < report.delta_star) {
        report.delta_star = ratio;
        report.witness_pair = {i, j};
      }
    }
  }
  return report;
}

UPReport up_constant(const FiniteMetricSpace& space, double r_min) {
  if (space.size() < 2) throw Error(ErrorCode::DegenerateSpace, "up constant needs two points");
  const double diam = space.diameter();
  if (!(r_min > 0.0 && r_min < diam)) {
    throw Error(ErrorCode::BadScaleCutoff, "r_min must lie in (0, diameter)");
  }
  UPReport report;
  report.r_min = r_min;
  report.c_star = kInfinity;
  std::vector<double> dist;
  for (std::size_t x = 0; x < space.size(); ++x) {
    dist.clear();
    for (std::size_t y = 0; y < space.size(); ++y) {
      if (y != x) dist.push_back(space(x, y));
    }
    std::sort(dist.begin(), dist.end());
    dist.erase(std::unique(dist.begin(), dist.end()), dist.end());
    // Radii just below the global diameter count too.
    if (dist.back() < diam) dist.push_back(diam);

    double value = kInfinity;
    double radius = r_min;
    if (dist.front() > r_min) {
      value = 0.0;
    } else {
      // On [a_j, a_{j+1}) the best ratio is a_j / r, tending to a_j / a_{j+1}.
      for (std::size_t j = 0; j + 1 < dist.size(); ++j) {
        if (dist[j + 1] <= r_min) continue;
        const double ratio = dist[j] / dist[j + 1];
        if (ratio < value) {
          value = ratio;
          radius = dist[j + 1];
        }
      }
    }
    if (value < report.c_star) {
      report.c_star = value;
      report.witness_point = x;
      report.witness_radius = radius;
    }
  }
  return report;
}

std::string TypeVector::bits() const {
  std::string s = "(";
  s += u1 ? '1' : '0';
  s += ',';
  s += u2 ? '1' : '0';
  s += ',';
  s += u3 ? '1' : '0';
  s += ')';
  return s;
}

Classification assess(const FiniteMetricSpace& space, const Thresholds& thresholds,
                      std::optional<double> r_min) {
  Classification out;
  out.doubling = doubling_constant(space, thresholds.beta0, thresholds.doubling);
  out.ud = ud_modulus(space);
  const double cutoff = r_min.value_or(space.min_positive_distance());
  if (!r_min && cutoff >= space.diameter()) {
    out.up = UPReport{0.0, cutoff, 0, cutoff};
  } else {
    out.up = up_constant(space, cutoff);
  }
  out.type.u1 = out.doubling.constant <= thresholds.c_max;
  out.type.u2 = out.ud.delta_star >= thresholds.delta_min;
  out.type.u3 = out.up.c_star >= thresholds.c_min;
  out.type.thresholds = thresholds;
  return out;
}

TypeVector classify(const FiniteMetricSpace& space, const Thresholds& thresholds,
                    std::optional<double> r_min) {
  return assess(space, thresholds, r_min).type;
}

}  // namespace densemet
