#include "densemet/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "densemet/build.hpp"

namespace densemet {

std::vector<BinaryString> binary_points(std::size_t depth) {
  if (depth >= 24) throw Error(ErrorCode::BadInput, "depth too large");
  const std::size_t count = std::size_t{1} << depth;
  std::vector<BinaryString> out(count, BinaryString(depth, '0'));
  for (std::size_t v = 0; v < count; ++v) {
    for (std::size_t i = 0; i < depth; ++i) {
      if ((v >> (depth - 1 - i)) & 1U) out[v][i] = '1';
    }
  }
  return out;
}

namespace {

void split_codes(std::size_t count, std::string& prefix, std::size_t remaining,
                 std::vector<BinaryString>& out) {
  if (remaining == 0) {
    out.push_back(prefix);
    return;
  }
  const std::size_t left = (count + 1) / 2;
  const std::size_t right = count / 2;
  prefix.push_back('0');
  split_codes(left, prefix, remaining - 1, out);
  prefix.back() = '1';
  if (right > 0) split_codes(right, prefix, remaining - 1, out);
  prefix.pop_back();
}

}  // namespace

std::vector<BinaryString> balanced_codes(std::size_t count) {
  if (count == 0) throw Error(ErrorCode::BadInput, "need at least one code");
  std::size_t depth = 0;
  while ((std::size_t{1} << depth) < count) ++depth;
  std::vector<BinaryString> out;
  out.reserve(count);
  std::string prefix;
  split_codes(count, prefix, depth, out);
  return out;
}

std::optional<std::size_t> valuation(std::string_view x, std::string_view y) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "binary strings differ in length");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) return i;
  }
  return std::nullopt;
}

double Envelope::lower(std::size_t k) const { return std::pow(a, static_cast<double>(k)) / M; }
double Envelope::upper(std::size_t k) const { return M * std::pow(a, static_cast<double>(k)); }

ShrinkingSequence::ShrinkingSequence(std::vector<double> values, std::optional<Envelope> envelope)
    : values_(std::move(values)), envelope_(envelope) {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!(values_[k] > 0.0) || !std::isfinite(values_[k])) {
      throw Error(ErrorCode::NotShrinking, "values must be positive and finite");
    }
    if (k > 0 && !(values_[k] < values_[k - 1])) {
      throw Error(ErrorCode::NotShrinking, "values must strictly decrease (index " + std::to_string(k) + ")");
    }
  }
  if (!envelope_) return;
  if (!(envelope_->a > 0.0 && envelope_->a < 1.0) || !(envelope_->M >= 1.0)) {
    throw Error(ErrorCode::EnvelopeViolation, "envelope needs a in (0, 1) and M >= 1");
  }
  constexpr double slack = 1e-12;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (values_[k] < envelope_->lower(k) * (1.0 - slack) || values_[k] > envelope_->upper(k) * (1.0 + slack)) {
      throw Error(ErrorCode::EnvelopeViolation, "s(" + std::to_string(k) + ") outside its envelope window");
    }
  }
}

ShrinkingSequence ShrinkingSequence::geometric(double first, double ratio, std::size_t length) {
  if (!(first > 0.0) || !(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::NotShrinking, "geometric sequence needs first > 0 and ratio in (0, 1)");
  }
  std::vector<double> values(length);
  for (std::size_t k = 0; k < length; ++k) values[k] = first * std::pow(ratio, static_cast<double>(k));
  return ShrinkingSequence(std::move(values), Envelope{ratio, std::max(first, 1.0 / first)});
}

double ShrinkingSequence::min_ratio() const {
  double best = 1.0;
  for (std::size_t k = 0; k + 1 < values_.size(); ++k) best = std::min(best, values_[k + 1] / values_[k]);
  return best;
}

ShrinkingSequence shift(const ShrinkingSequence& s, std::size_t m) {
  if (m >= s.size()) throw Error(ErrorCode::ShiftTooLarge, "shift must be below the sequence length");
  std::vector<double> values(s.values().begin() + static_cast<std::ptrdiff_t>(m), s.values().end());
  std::optional<Envelope> env;
  if (s.envelope()) env = Envelope{s.envelope()->a, s.envelope()->M / std::pow(s.envelope()->a, static_cast<double>(m))};
  return ShrinkingSequence(std::move(values), env);
}

FiniteMetricSpace sequential_metric_on(const std::vector<BinaryString>& codes, const ShrinkingSequence& s,
                                       std::vector<std::string> labels) {
  const std::size_t n = codes.size();
  if (n == 0) throw Error(ErrorCode::BadInput, "need at least one point");
  const std::size_t length = codes.front().size();
  if (s.size() < length) throw Error(ErrorCode::SequenceTooShort, "sequence shorter than the code length");
  DistanceMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto v = valuation(codes[i], codes[j]);
      if (!v) throw Error(ErrorCode::BadInput, "codes must be distinct");
      m(i, j) = s[*v];
      m(j, i) = s[*v];
    }
  }
  return validate(std::move(labels), std::move(m), Flavor::ultrametric, 0.0);
}

FiniteMetricSpace sequential_metric(const ShrinkingSequence& s, std::size_t depth) {
  if (depth == 0) throw Error(ErrorCode::BadInput, "depth must be >= 1");
  if (s.size() < depth) throw Error(ErrorCode::SequenceTooShort, "sequence shorter than depth");
  auto codes = binary_points(depth);
  auto labels = codes;
  return sequential_metric_on(codes, s, std::move(labels));
}

FiniteMetricSpace euclidean_cantor_on(const std::vector<BinaryString>& codes, double scale,
                                      std::vector<std::string> labels) {
  if (!(scale > 0.0)) throw Error(ErrorCode::BadInput, "scale must be positive");
  const std::size_t n = codes.size();
  if (n == 0) throw Error(ErrorCode::BadInput, "need at least one point");
  const std::size_t length = codes.front().size();
  if (length > 33) throw Error(ErrorCode::BadInput, "code length too large for exact ternary values");
  // value(x) * 3^length as an integer.
  std::vector<std::int64_t> ternary(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (char bit : codes[i]) ternary[i] = 3 * ternary[i] + (bit == '1' ? 2 : 0);
  }
  const double denom = std::pow(3.0, static_cast<double>(length));
  DistanceMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto diff = static_cast<double>(std::abs(ternary[i] - ternary[j]));
      m(i, j) = scale * (diff / denom);
      m(j, i) = m(i, j);
    }
  }
  return validate(std::move(labels), std::move(m), Flavor::metric);
}

FiniteMetricSpace euclidean_cantor_metric(std::size_t depth, double scale) {
  if (depth == 0) throw Error(ErrorCode::BadInput, "depth must be >= 1");
  auto codes = binary_points(depth);
  auto labels = codes;
  return euclidean_cantor_on(codes, scale, std::move(labels));
}

WindowCheck is_exponential_window(const RangeSet& range, double a, double M, std::size_t N) {
  if (!(a > 0.0 && a < 1.0) || !(M >= 1.0) || N < 1) {
    throw Error(ErrorCode::BadInput, "need a in (0, 1), M >= 1 and N >= 1");
  }
  const Envelope env{a, M};
  WindowCheck out;
  for (std::size_t n = 0; n <= N; ++n) {
    const double hit = range.least_geq(env.lower(n));
    out.witnesses.push_back(hit);
    if (hit > env.upper(n)) {
      out.ok = false;
      out.failing_n = n;
      break;
    }
  }
  return out;
}

ShrinkingSequence exponential_sequence(const RangeSet& range, double b, double M, std::size_t length) {
  if (length < 1) throw Error(ErrorCode::BadInput, "length must be >= 1");
  const auto pre = is_exponential_window(range, b, M, length);
  if (!pre.ok) {
    throw Error(ErrorCode::WindowMiss, "S misses the (b, M) window at n = " + std::to_string(*pre.failing_n));
  }
  const double p = -std::log(M) / std::log(b);
  const Envelope env{std::pow(b, 2.0 * p + 1.0), M};
  std::vector<double> values(length);
  for (std::size_t n = 0; n < length; ++n) {
    values[n] = range.least_geq(env.lower(n));
    if (values[n] > env.upper(n)) {
      throw Error(ErrorCode::WindowMiss, "S misses the (a, M) window at n = " + std::to_string(n));
    }
  }
  return ShrinkingSequence(std::move(values), env);
}

std::optional<std::size_t> up_obstruction(const RangeSet& range, double c, std::size_t N, double ceiling) {
  if (!(c > 0.0 && c < 1.0)) throw Error(ErrorCode::BadInput, "c must lie in (0, 1)");
  for (std::size_t n = 0; n <= N; ++n) {
    const double top = std::pow(c, static_cast<double>(n) - 1.0);
    const double bottom = std::pow(c, static_cast<double>(n) + 1.0);
    if (top >= ceiling) continue;
    if (!range.intersects(bottom, top)) return n;
  }
  return std::nullopt;
}

std::string TypeBits::str() const {
  std::string s = "(";
  s += u1 ? "1," : "0,";
  s += u2 ? "1," : "0,";
  s += u3 ? "1)" : "0)";
  return s;
}

TypeBits TypeBits::parse(std::string_view text) {
  std::string digits;
  for (char ch : text) {
    if (ch == '0' || ch == '1') {
      digits.push_back(ch);
    } else if (ch != ',' && ch != '(' && ch != ')' && ch != ' ') {
      throw Error(ErrorCode::BadInput, "type must look like 1,0,1");
    }
  }
  if (digits.size() != 3) throw Error(ErrorCode::BadInput, "type needs exactly three bits");
  return {digits[0] == '1', digits[1] == '1', digits[2] == '1'};
}

std::vector<TypeBits> TypeBits::all() {
  std::vector<TypeBits> out;
  for (int v = 0; v < 8; ++v) out.push_back({(v & 4) != 0, (v & 2) != 0, (v & 1) != 0});
  return out;
}

namespace {

FiniteMetricSpace sequence_recipe(std::vector<double> values, std::size_t depth) {
  return sequential_metric(ShrinkingSequence(std::move(values)), depth);
}

// Two blocks of `half` points each. Block A is an arithmetic progression
// (chain) or a uniform cluster; block B is always a progression. Blocks are
// glued through their first points at host distance `gap`.
FiniteMetricSpace glued_blocks(std::size_t half, bool first_is_cluster, double gap) {
  const std::size_t n = 2 * half;
  std::vector<std::string> labels;
  std::vector<std::string> labels_a;
  std::vector<std::string> labels_b;
  for (std::size_t i = 0; i < half; ++i) labels_a.push_back("a" + std::to_string(i));
  for (std::size_t i = 0; i < half; ++i) labels_b.push_back("b" + std::to_string(i));
  labels = labels_a;
  labels.insert(labels.end(), labels_b.begin(), labels_b.end());

  DistanceMatrix chain(half);
  DistanceMatrix cluster(half);
  for (std::size_t i = 0; i < half; ++i) {
    for (std::size_t j = 0; j < half; ++j) {
      chain(i, j) = std::abs(static_cast<double>(i) - static_cast<double>(j));
      cluster(i, j) = i == j ? 0.0 : 1.0;
    }
  }
  // Host: unit distance inside a block, `gap` across blocks.
  DistanceMatrix host(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) host(i, j) = (i < half) == (j < half) ? 1.0 : gap;
    }
  }
  const auto d = validate(labels, std::move(host), Flavor::metric);
  IndexSet a(half);
  IndexSet b(half);
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), half);
  const ClopenPartition partition{{a, b}, {0, half}};
  const std::vector<FiniteMetricSpace> pieces{
      validate(labels_a, first_is_cluster ? cluster : chain, Flavor::metric),
      validate(labels_b, chain, Flavor::metric)};
  return amalgamate_metric(d, partition, pieces);
}

std::string describe(const Classification& c) {
  std::ostringstream out;
  out << "measured " << c.type.bits() << " with doubling constant " << c.doubling.constant
      << ", delta* " << c.ud.delta_star << ", c* " << c.up.c_star;
  return out.str();
}

}  // namespace

GeneratedType generate_type(TypeBits target, std::size_t depth, std::uint64_t seed,
                            const Thresholds& thresholds) {
  if (depth < 4 || depth > 12) throw Error(ErrorCode::BadInput, "depth must lie in [4, 12]");
  const std::size_t n = std::size_t{1} << depth;
  const double far = 100.0 * static_cast<double>(n);
  std::string recipe;
  std::optional<FiniteMetricSpace> space;

  if (target.u2) {
    std::vector<double> s(depth);
    const std::size_t gap_level = depth / 2;
    for (std::size_t k = 0; k < depth; ++k) {
      const double kk = static_cast<double>(k);
      if (target.u1 && target.u3) {
        s[k] = std::ldexp(1.0, -static_cast<int>(k));
      } else if (target.u1) {
        s[k] = std::ldexp(1.0, -static_cast<int>(k)) * (k >= gap_level ? 1e-3 : 1.0);
      } else if (target.u3) {
        s[k] = 1.0 / (1.0 + kk / 16.0);
      } else {
        s[k] = k == 0 ? 1.0 : 1e-3 / (1.0 + (kk - 1.0) / 32.0);
      }
    }
    recipe = target.u1 && target.u3 ? "sequential s(n) = 2^-n"
             : target.u1            ? "sequential s(n) = 2^-n with a 1e-3 drop at level " + std::to_string(gap_level)
             : target.u3            ? "sequential s(n) = 1 / (1 + n/16)"
                                    : "sequential s(0) = 1, s(n) = 1e-3 / (1 + (n-1)/32)";
    space = sequence_recipe(std::move(s), depth);
  } else {
    const bool cluster = !target.u1;
    const double gap = target.u3 ? 2.0 : far;
    recipe = std::string(cluster ? "uniform cluster" : "progression") + " + progression of " +
             std::to_string(n / 2) + " points glued at distance " + std::to_string(gap);
    space = glued_blocks(n / 2, cluster, gap);
  }

  IndexSet perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto permuted = space->restrict_to(perm);

  auto classification = assess(permuted, thresholds);
  if (!(TypeBits{classification.type.u1, classification.type.u2, classification.type.u3} == target)) {
    throw Error(ErrorCode::GenerationFailed, "recipe for " + target.str() + " at depth " +
                                                 std::to_string(depth) + ": " + describe(classification));
  }
  return {std::move(permuted), {target, recipe}, std::move(classification)};
}

}  // namespace densemet
