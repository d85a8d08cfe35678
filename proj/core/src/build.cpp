#include "densemet/build.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "densemet/cantor.hpp"

namespace densemet {

void ClopenPartition::check(std::size_t n) const {
  if (pieces.size() != basepoints.size()) {
    throw Error(ErrorCode::BadPartition, "one basepoint per piece required");
  }
  std::vector<bool> seen(n, false);
  std::size_t covered = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].empty()) throw Error(ErrorCode::BadPartition, "empty piece " + std::to_string(i));
    for (std::size_t x : pieces[i]) {
      if (x >= n) throw Error(ErrorCode::BadPartition, "index " + std::to_string(x) + " out of range");
      if (seen[x]) throw Error(ErrorCode::BadPartition, "index " + std::to_string(x) + " in two pieces");
      seen[x] = true;
      ++covered;
    }
    if (std::find(pieces[i].begin(), pieces[i].end(), basepoints[i]) == pieces[i].end()) {
      throw Error(ErrorCode::BadPartition, "basepoint of piece " + std::to_string(i) + " outside it");
    }
  }
  if (covered != n) throw Error(ErrorCode::BadPartition, "pieces do not cover every point");
}

std::vector<std::size_t> ClopenPartition::owner(std::size_t n) const {
  std::vector<std::size_t> out(n, 0);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t x : pieces[i]) out[x] = i;
  }
  return out;
}

double Embedding::distance(std::size_t i, std::size_t j) const {
  double best = 0.0;
  for (std::size_t c = 0; c < dimension; ++c) {
    best = std::max(best, std::abs(coordinates[i][c] - coordinates[j][c]));
  }
  return best;
}

FiniteMetricSpace Embedding::metric(std::vector<std::string> labels) const {
  const std::size_t n = coordinates.size();
  DistanceMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = distance(i, j);
      m(j, i) = m(i, j);
    }
  }
  return validate(std::move(labels), std::move(m), Flavor::metric);
}

namespace {

struct PieceLayout {
  std::vector<std::size_t> owner;  // piece of each point
  std::vector<std::size_t> local;  // position of each point inside its piece
  std::vector<std::size_t> base_local;
};

PieceLayout layout_pieces(const FiniteMetricSpace& d, const ClopenPartition& partition,
                          std::span<const FiniteMetricSpace> piece_metrics) {
  const std::size_t n = d.size();
  partition.check(n);
  if (piece_metrics.size() != partition.pieces.size()) {
    throw Error(ErrorCode::PieceMismatch, "need exactly one metric per piece");
  }
  PieceLayout layout{std::vector<std::size_t>(n), std::vector<std::size_t>(n),
                     std::vector<std::size_t>(partition.pieces.size())};
  for (std::size_t i = 0; i < partition.pieces.size(); ++i) {
    const auto& piece = partition.pieces[i];
    const auto& e = piece_metrics[i];
    if (e.size() != piece.size()) {
      throw Error(ErrorCode::PieceMismatch, "piece " + std::to_string(i) + " metric has wrong size");
    }
    for (std::size_t a = 0; a < piece.size(); ++a) {
      if (e.labels()[a] != d.labels()[piece[a]]) {
        throw Error(ErrorCode::PieceMismatch, "piece " + std::to_string(i) + " metric labels differ");
      }
      layout.owner[piece[a]] = i;
      layout.local[piece[a]] = a;
      if (piece[a] == partition.basepoints[i]) layout.base_local[i] = a;
    }
  }
  return layout;
}

template <typename Combine>
DistanceMatrix assemble(const FiniteMetricSpace& d, const ClopenPartition& partition,
                        std::span<const FiniteMetricSpace> piece_metrics, const PieceLayout& layout,
                        Combine combine) {
  const std::size_t n = d.size();
  DistanceMatrix m(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      // Orient by piece index so the mirrored entry is the same expression.
      std::size_t u = x;
      std::size_t v = y;
      if (layout.owner[u] > layout.owner[v]) std::swap(u, v);
      const std::size_t i = layout.owner[u];
      const std::size_t j = layout.owner[v];
      double value;
      if (i == j) {
        value = piece_metrics[i](layout.local[u], layout.local[v]);
      } else {
        const double left = piece_metrics[i](layout.local[u], layout.base_local[i]);
        const double bridge = d(partition.basepoints[i], partition.basepoints[j]);
        const double right = piece_metrics[j](layout.base_local[j], layout.local[v]);
        value = combine(combine(left, bridge), right);
      }
      m(x, y) = value;
      m(y, x) = value;
    }
  }
  return m;
}

FiniteMetricSpace single_point(const std::string& label, Flavor flavor) {
  return validate({label}, DistanceMatrix(1), flavor);
}

}  // namespace

FiniteMetricSpace amalgamate_metric(const FiniteMetricSpace& d, const ClopenPartition& partition,
                                    std::span<const FiniteMetricSpace> piece_metrics) {
  const auto layout = layout_pieces(d, partition, piece_metrics);
  auto m = assemble(d, partition, piece_metrics, layout, [](double a, double b) { return a + b; });
  return validate(d.labels(), std::move(m), Flavor::metric);
}

FiniteMetricSpace amalgamate_ultrametric(const FiniteMetricSpace& d, const ClopenPartition& partition,
                                         std::span<const FiniteMetricSpace> piece_metrics,
                                         const RangeSet& range, double tolerance) {
  const auto layout = layout_pieces(d, partition, piece_metrics);
  auto in_range = [&](const FiniteMetricSpace& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        const double v = s(i, j);
        if (!range.intersects(v - tolerance * v, v + tolerance * v)) return false;
      }
    }
    return true;
  };
  if (d.flavor() != Flavor::ultrametric) throw Error(ErrorCode::NotUltrametric, "host is not an ultrametric");
  if (!in_range(d)) throw Error(ErrorCode::ValueOutsideRangeSet, "host takes values outside S");
  for (const auto& e : piece_metrics) {
    if (e.flavor() != Flavor::ultrametric) throw Error(ErrorCode::NotUltrametric, "piece is not an ultrametric");
    if (!in_range(e)) throw Error(ErrorCode::ValueOutsideRangeSet, "piece takes values outside S");
  }
  auto m = assemble(d, partition, piece_metrics, layout, [](double a, double b) { return std::max(a, b); });
  return validate(d.labels(), std::move(m), Flavor::ultrametric);
}

std::vector<std::vector<double>> mcshane_extend(const FiniteMetricSpace& space, const IndexSet& subset,
                                                const std::vector<std::vector<double>>& values,
                                                double lipschitz) {
  if (subset.empty() || values.size() != subset.size()) {
    throw Error(ErrorCode::BadInput, "need one value per subset point");
  }
  if (!(lipschitz > 0.0)) throw Error(ErrorCode::BadInput, "Lipschitz constant must be positive");
  const std::size_t dim = values.front().size();
  for (const auto& v : values) {
    if (v.size() != dim) throw Error(ErrorCode::BadInput, "values must share one dimension");
  }
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const double allowed = lipschitz * space(subset[a], subset[b]);
      for (std::size_t c = 0; c < dim; ++c) {
        if (std::abs(values[a][c] - values[b][c]) > allowed * (1.0 + 1e-12)) {
          throw Error(ErrorCode::NotLipschitzOnSubset,
                      "f is not " + std::to_string(lipschitz) + "-Lipschitz at (" +
                          std::to_string(subset[a]) + "," + std::to_string(subset[b]) + ")");
        }
      }
    }
  }
  std::vector<std::vector<double>> out(space.size(), std::vector<double>(dim, kInfinity));
  for (std::size_t x = 0; x < space.size(); ++x) {
    for (std::size_t a = 0; a < subset.size(); ++a) {
      const double reach = lipschitz * space(x, subset[a]);
      for (std::size_t c = 0; c < dim; ++c) out[x][c] = std::min(out[x][c], values[a][c] + reach);
    }
  }
  for (std::size_t a = 0; a < subset.size(); ++a) out[subset[a]] = values[a];
  return out;
}

std::vector<double> mcshane_extend(const FiniteMetricSpace& space, const IndexSet& subset,
                                   std::span<const double> values, double lipschitz) {
  std::vector<std::vector<double>> wrapped;
  wrapped.reserve(values.size());
  for (double v : values) wrapped.push_back({v});
  auto ext = mcshane_extend(space, subset, wrapped, lipschitz);
  std::vector<double> out;
  out.reserve(ext.size());
  for (const auto& v : ext) out.push_back(v.front());
  return out;
}

Embedding kuratowski_embed(const FiniteMetricSpace& space, const IndexSet& landmarks) {
  if (landmarks.empty()) throw Error(ErrorCode::BadInput, "need at least one landmark");
  Embedding emb;
  emb.dimension = landmarks.size();
  emb.coordinates.assign(space.size(), std::vector<double>(landmarks.size()));
  for (std::size_t x = 0; x < space.size(); ++x) {
    for (std::size_t c = 0; c < landmarks.size(); ++c) emb.coordinates[x][c] = space(x, landmarks.at(c));
  }
  return emb;
}

namespace {

ClopenPartition subset_partition(std::size_t n, const IndexSet& subset) {
  if (subset.empty()) throw Error(ErrorCode::BadInput, "subset must be nonempty");
  ClopenPartition p;
  p.pieces.push_back(subset);
  p.basepoints.push_back(subset.front());
  std::vector<bool> inside(n, false);
  for (std::size_t x : subset) {
    if (x >= n) throw Error(ErrorCode::BadInput, "index out of range");
    inside[x] = true;
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (inside[x]) continue;
    p.pieces.push_back({x});
    p.basepoints.push_back(x);
  }
  return p;
}

std::vector<FiniteMetricSpace> subset_piece_metrics(const FiniteMetricSpace& ambient,
                                                    const ClopenPartition& p,
                                                    const FiniteMetricSpace& subset_metric,
                                                    Flavor flavor) {
  std::vector<FiniteMetricSpace> pieces{subset_metric};
  for (std::size_t i = 1; i < p.pieces.size(); ++i) {
    pieces.push_back(single_point(ambient.labels()[p.pieces[i].front()], flavor));
  }
  return pieces;
}

std::vector<std::string> labels_of(const FiniteMetricSpace& d, const IndexSet& piece) {
  std::vector<std::string> out;
  out.reserve(piece.size());
  for (std::size_t x : piece) out.push_back(d.labels()[x]);
  return out;
}

}  // namespace

FiniteMetricSpace extend_metric(const FiniteMetricSpace& ambient, const IndexSet& subset,
                                const FiniteMetricSpace& subset_metric) {
  const auto p = subset_partition(ambient.size(), subset);
  const auto pieces = subset_piece_metrics(ambient, p, subset_metric, Flavor::metric);
  return amalgamate_metric(ambient, p, pieces);
}

FiniteMetricSpace extend_ultrametric(const FiniteMetricSpace& ambient, const IndexSet& subset,
                                     const FiniteMetricSpace& subset_metric, const RangeSet& range) {
  const auto p = subset_partition(ambient.size(), subset);
  const auto pieces = subset_piece_metrics(ambient, p, subset_metric, Flavor::ultrametric);
  return amalgamate_ultrametric(ambient, p, pieces, range);
}

IndexSet greedy_net(const FiniteMetricSpace& space, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::BadInput, "epsilon must be positive");
  IndexSet net{0};
  std::vector<double> gap(space.matrix().row(0).begin(), space.matrix().row(0).end());
  for (;;) {
    std::size_t far = 0;
    for (std::size_t x = 1; x < space.size(); ++x) {
      if (gap[x] > gap[far]) far = x;
    }
    if (gap[far] < eps) break;
    net.push_back(far);
    for (std::size_t x = 0; x < space.size(); ++x) gap[x] = std::min(gap[x], space(x, far));
  }
  return net;
}

ClopenPartition carve_partition(const FiniteMetricSpace& space, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::BadInput, "epsilon must be positive");
  ClopenPartition p;
  std::vector<bool> taken(space.size(), false);
  for (std::size_t center = 0; center < space.size(); ++center) {
    if (taken[center]) continue;
    IndexSet piece;
    for (std::size_t y = center; y < space.size(); ++y) {
      if (!taken[y] && space(center, y) <= eps / 2.0) {
        taken[y] = true;
        piece.push_back(y);
      }
    }
    p.pieces.push_back(std::move(piece));
    p.basepoints.push_back(center);
  }
  return p;
}

FiniteMetricSpace geometric_piece(const std::vector<std::string>& labels, double eps) {
  if (labels.size() == 1) return single_point(labels.front(), Flavor::ultrametric);
  const auto codes = balanced_codes(labels.size());
  const auto s = ShrinkingSequence::geometric(eps, 0.5, codes.front().size());
  return sequential_metric_on(codes, s, labels);
}

FiniteMetricSpace cantor_piece(const std::vector<std::string>& labels, double eps) {
  if (labels.size() == 1) return single_point(labels.front(), Flavor::metric);
  return euclidean_cantor_on(balanced_codes(labels.size()), eps, labels);
}

FiniteMetricSpace range_piece(const std::vector<std::string>& labels, double eps, const RangeSet& range) {
  if (labels.size() == 1) return single_point(labels.front(), Flavor::ultrametric);
  const auto codes = balanced_codes(labels.size());
  std::vector<double> values{range.greatest_leq(eps)};
  while (values.size() < codes.front().size()) {
    const auto next = range.next_below(values.back());
    values.push_back(next.value_or(0.0));
  }
  if (values.back() <= 0.0) {
    throw Error(ErrorCode::BadRangeSet, "range set has too few positive elements below epsilon");
  }
  return sequential_metric_on(codes, ShrinkingSequence(std::move(values)), labels);
}

DoublingApproximation approximate_doubling(const FiniteMetricSpace& d, double eps) {
  const std::size_t n = d.size();
  IndexSet net = greedy_net(d, eps);
  const Embedding on_net = kuratowski_embed(d, net);
  std::vector<std::vector<double>> net_values;
  net_values.reserve(net.size());
  for (std::size_t p : net) net_values.push_back(on_net.coordinates[p]);
  auto coords = mcshane_extend(d, net, net_values, 1.0);

  // One extra axis: distinct multiples of eps / (2n), image diameter < eps/2.
  const double step = eps / (2.0 * static_cast<double>(n));
  for (std::size_t x = 0; x < n; ++x) coords[x].push_back(static_cast<double>(x) * step);

  Embedding emb{net.size() + 1, std::move(coords)};
  auto metric = emb.metric(d.labels());
  return {std::move(metric), std::move(emb), std::move(net)};
}

UdApproximation approximate_ud(const FiniteMetricSpace& d, double eps, const PieceBuilder& piece_builder) {
  auto partition = carve_partition(d, eps);
  std::vector<FiniteMetricSpace> pieces;
  pieces.reserve(partition.pieces.size());
  for (const auto& piece : partition.pieces) pieces.push_back(piece_builder(labels_of(d, piece), eps));
  auto metric = amalgamate_metric(d, partition, pieces);
  auto ud = ud_modulus(metric);
  return {std::move(metric), std::move(partition), std::move(ud)};
}

UdApproximation approximate_ud_ultrametric(const FiniteMetricSpace& d, double eps, const RangeSet& range) {
  auto partition = carve_partition(d, eps);
  std::vector<FiniteMetricSpace> pieces;
  pieces.reserve(partition.pieces.size());
  for (const auto& piece : partition.pieces) pieces.push_back(range_piece(labels_of(d, piece), eps, range));
  auto metric = amalgamate_ultrametric(d, partition, pieces, range);
  auto ud = ud_modulus(metric);
  return {std::move(metric), std::move(partition), std::move(ud)};
}

namespace {

// Folds every singleton piece into the piece holding its nearest other point.
ClopenPartition merge_singletons(const FiniteMetricSpace& d, ClopenPartition p) {
  const std::size_t n = d.size();
  auto owner = p.owner(n);
  std::vector<bool> alive(p.pieces.size(), true);
  for (std::size_t i = 0; i < p.pieces.size(); ++i) {
    if (p.pieces[i].size() != 1) continue;
    const std::size_t x = p.pieces[i].front();
    std::size_t nearest = n;
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      if (nearest == n || d(x, y) < d(x, nearest)) nearest = y;
    }
    const std::size_t target = owner[nearest];
    p.pieces[target].push_back(x);
    owner[x] = target;
    p.pieces[i].clear();
    alive[i] = false;
  }
  ClopenPartition out;
  for (std::size_t i = 0; i < p.pieces.size(); ++i) {
    if (!alive[i]) continue;
    std::sort(p.pieces[i].begin(), p.pieces[i].end());
    out.pieces.push_back(std::move(p.pieces[i]));
    out.basepoints.push_back(p.basepoints[i]);
  }
  return out;
}

}  // namespace

UpApproximation approximate_up(const FiniteMetricSpace& d, double eps) {
  if (d.size() < 2) throw Error(ErrorCode::TooFewPoints, "need at least two points");
  auto partition = merge_singletons(d, carve_partition(d, eps));

  std::vector<FiniteMetricSpace> pieces;
  double effective = eps;
  for (const auto& piece : partition.pieces) {
    pieces.push_back(cantor_piece(labels_of(d, piece), eps));
    effective = std::max(effective, subset_stats(d, piece).diameter);
  }
  auto metric = amalgamate_metric(d, partition, pieces);

  double r_min = 0.0;
  for (std::size_t x = 0; x < metric.size(); ++x) {
    double nearest = kInfinity;
    for (std::size_t y = 0; y < metric.size(); ++y) {
      if (y != x) nearest = std::min(nearest, metric(x, y));
    }
    r_min = std::max(r_min, nearest);
  }

  UpApproximation out{std::move(metric), std::move(partition), effective, UPReport{}};
  out.min_piece_diameter = kInfinity;
  for (const auto& e : pieces) {
    out.min_piece_diameter = std::min(out.min_piece_diameter, e.diameter());
    if (r_min < e.diameter()) out.piece_constant = std::min(out.piece_constant, up_constant(e, r_min).c_star);
  }
  const double diam = out.metric.diameter();
  out.lower_bound = 0.5 * std::min(out.piece_constant, out.min_piece_diameter / diam);
  if (r_min < diam) {
    out.up = up_constant(out.metric, r_min);
  } else {
    out.scale_window_empty = true;
    out.up = UPReport{0.0, r_min, 0, r_min};
  }
  return out;
}

}  // namespace densemet
