#include <gtest/gtest.h>

#include <random>

#include "densemet/cantor.hpp"
#include "densemet/moduli.hpp"
#include "oracles.hpp"

using namespace densemet;

namespace {

FiniteMetricSpace make(const oracle::Matrix& rows, Flavor flavor = Flavor::metric) {
  return validate(index_labels(rows.size()), DistanceMatrix::from_rows(rows), flavor);
}

FiniteMetricSpace progression(std::size_t n) {
  oracle::Matrix m(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = std::abs(double(i) - double(j));
  }
  return make(m);
}

FiniteMetricSpace uniform(std::size_t n) {
  oracle::Matrix m(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 0.0;
  return make(m);
}

FiniteMetricSpace random_closure(std::size_t n, std::mt19937_64& rng) {
  return metric_closure(index_labels(n), DistanceMatrix::from_rows(oracle::random_raw(n, rng)));
}

}  // namespace

TEST(Doubling, UniformMetric) {
  const auto r = doubling_constant(uniform(8), 1.0);
  EXPECT_EQ(r.constant, 8.0);
  EXPECT_EQ(r.witness.size(), 8u);
  EXPECT_EQ(r.mode, DoublingMode::exhaustive);
}

TEST(Doubling, TwoPoints) {
  EXPECT_EQ(doubling_constant(make({{0, 3}, {3, 0}}), 0.7).constant, 2.0);
  EXPECT_THROW(doubling_constant(make({{0}}), 1.0), Error);
}

TEST(Doubling, ProgressionOfEight) {
  // Frozen: direct enumeration of the 247 subsets of {0..7} gives 2.
  const auto r = doubling_constant(progression(8), 1.0);
  EXPECT_EQ(r.constant, 2.0);
  EXPECT_EQ(r.witness, (IndexSet{0, 1}));
}

TEST(Doubling, EuclideanCantorDepthThree) {
  // Frozen from exact enumeration: 2 at beta = 1 and beta = 2.
  const auto s = euclidean_cantor_metric(3, 1.0);
  EXPECT_NEAR(doubling_constant(s, 1.0).constant, 2.0, 1e-12);
  EXPECT_NEAR(doubling_constant(s, 2.0).constant, 2.0, 1e-12);
}

TEST(Doubling, MatchesEnumerationOracle) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 30; ++t) {
    const auto s = random_closure(2 + t % 9, rng);
    for (double beta : {0.5, 1.0, 2.0}) {
      const auto r = doubling_constant(s, beta);
      EXPECT_NEAR(r.constant, oracle::doubling(oracle::rows(s), beta), 1e-12 * r.constant);
      const auto st = subset_stats(s, r.witness);
      EXPECT_NEAR(double(st.cardinality), r.constant * std::pow(st.diameter / st.separation(), beta),
                  1e-9 * double(st.cardinality));
    }
  }
}

TEST(Doubling, MonotoneUnderAddingPoints) {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 20; ++t) {
    const auto s = random_closure(12, rng);
    double last = 0.0;
    for (std::size_t k = 2; k <= 12; ++k) {
      IndexSet idx(k);
      std::iota(idx.begin(), idx.end(), 0);
      const double c = doubling_constant(s.restrict_to(idx), 2.0).constant;
      EXPECT_GE(c, last);
      last = c;
    }
  }
}

TEST(Doubling, SampledModeIsALowerBound) {
  std::mt19937_64 rng(41);
  const auto s = random_closure(14, rng);
  const double exact = doubling_constant(s, 1.0).constant;
  DoublingOptions opt;
  opt.exhaustive_limit = 4;
  opt.seed = 3;
  const auto sampled = doubling_constant(s, 1.0, opt);
  EXPECT_EQ(sampled.mode, DoublingMode::sampled);
  EXPECT_LE(sampled.constant, exact);
  EXPECT_EQ(doubling_constant(s, 1.0, opt).constant, sampled.constant);
}

TEST(Bottleneck, Examples) {
  const auto two = make({{0, 2.5}, {2.5, 0}});
  EXPECT_EQ(bottleneck_matrix(two)(0, 1), 2.5);
  const auto line = make({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  EXPECT_EQ(bottleneck_matrix(line)(0, 2), 1.0);
  EXPECT_EQ(minimax_chain(line, 0, 2), (IndexSet{0, 1, 2}));
}

TEST(Bottleneck, MatchesChainEnumeration) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 100; ++t) {
    const auto s = random_closure(2 + t % 7, rng);
    const auto b = bottleneck_matrix(s);
    const auto expect = oracle::chain_minimax(oracle::rows(s));
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) EXPECT_EQ(b(i, j), expect[i][j]);
    }
  }
}

TEST(Bottleneck, IsAnUltrametricBelowD) {
  std::mt19937_64 rng(47);
  const auto s = random_closure(30, rng);
  const auto b = bottleneck_matrix(s);
  for (std::size_t x = 0; x < 30; ++x) {
    for (std::size_t y = 0; y < 30; ++y) {
      EXPECT_LE(b(x, y), s(x, y));
      for (std::size_t z = 0; z < 30; ++z) EXPECT_LE(b(x, z), std::max(b(x, y), b(y, z)));
    }
  }
}

TEST(Bottleneck, EqualsDistanceOnUltrametrics) {
  const auto s = sequential_metric(ShrinkingSequence::geometric(1.0, 0.5, 3), 3);
  const auto b = bottleneck_matrix(s);
  EXPECT_EQ(b, s.matrix());
}

TEST(UdModulus, Examples) {
  EXPECT_EQ(ud_modulus(make({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}})).delta_star, 0.5);
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto r = ud_modulus(progression(n + 1));
    EXPECT_EQ(r.delta_star, 1.0 / double(n));
    EXPECT_EQ(r.witness_pair, std::make_pair(std::size_t{0}, n));
  }
  EXPECT_EQ(ud_modulus(sequential_metric(ShrinkingSequence::geometric(1.0, 0.5, 5), 5)).delta_star, 1.0);
  // Frozen: minimum-spanning-tree evaluation gives 5/13 for the depth-3 middle-third set.
  EXPECT_NEAR(ud_modulus(euclidean_cantor_metric(3, 1.0)).delta_star, 5.0 / 13.0, 1e-12);
}

TEST(UdModulus, ChainConditionHoldsAtDeltaStarAndFailsAbove) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 30; ++t) {
    const auto s = random_closure(10, rng);
    const auto r = ud_modulus(s);
    std::uniform_int_distribution<std::size_t> pick(0, 9);
    std::uniform_int_distribution<std::size_t> len(2, 8);
    for (int c = 0; c < 200; ++c) {
      IndexSet chain(len(rng));
      for (auto& z : chain) z = pick(rng);
      if (chain.front() == chain.back()) continue;
      double step = 0.0;
      for (std::size_t i = 0; i + 1 < chain.size(); ++i) step = std::max(step, s(chain[i], chain[i + 1]));
      EXPECT_LE(r.delta_star * s(chain.front(), chain.back()), step * (1 + 1e-12));
    }
    const auto [x, y] = r.witness_pair;
    const auto path = minimax_chain(s, x, y);
    double step = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) step = std::max(step, s(path[i], path[i + 1]));
    EXPECT_GT((r.delta_star + 1e-9) * s(x, y), step);
  }
}

TEST(UpConstant, Examples) {
  EXPECT_EQ(up_constant(make({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}), 1.0).c_star, 0.5);
  // A two-point space has diameter d and no radius in [r_min, d) reaches y.
  EXPECT_EQ(up_constant(make({{0, 2}, {2, 0}}), 1.0).c_star, 0.0);
  EXPECT_THROW(up_constant(make({{0, 2}, {2, 0}}), 2.0), Error);
  EXPECT_THROW(up_constant(make({{0, 2}, {2, 0}}), 0.0), Error);
  const auto seq = sequential_metric(ShrinkingSequence::geometric(1.0, 0.5, 6), 6);
  EXPECT_EQ(up_constant(seq, std::ldexp(1.0, -5)).c_star, 0.5);
  // Frozen: exact scan over critical radii.
  EXPECT_EQ(up_constant(progression(8), 1.0).c_star, 0.5);
  const auto cantor = euclidean_cantor_metric(3, 1.0);
  EXPECT_NEAR(up_constant(cantor, 2.0 / 27).c_star, 1.0 / 3, 1e-12);
}

TEST(UpConstant, MatchesGridOracle) {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 25; ++t) {
    const auto s = random_closure(3 + t % 14, rng);
    const double r_min = s.min_positive_distance();
    if (!(r_min < s.diameter())) continue;
    EXPECT_NEAR(up_constant(s, r_min).c_star, oracle::up_grid(oracle::rows(s), r_min, 500), 1e-6);
  }
}

TEST(Classify, Examples) {
  const auto geo = sequential_metric(ShrinkingSequence::geometric(1.0, 0.5, 7), 7);
  const auto c = assess(geo);
  EXPECT_EQ(c.type.bits(), "(1,1,1)");
  EXPECT_EQ(c.ud.delta_star, 1.0);
  EXPECT_EQ(c.up.c_star, 0.5);
  EXPECT_FALSE(classify(uniform(128)).u1);
  EXPECT_FALSE(classify(make({{0, 1}, {1, 0}})).u3);
}

TEST(Classify, ScaleInvariance) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 10; ++t) {
    const auto s = random_closure(12, rng);
    for (double lambda : {0.25, 8.0, 1024.0}) {
      const auto z = s.scaled(lambda);
      const auto a = assess(s);
      const auto b = assess(z);
      EXPECT_EQ(a.doubling.constant, b.doubling.constant);
      EXPECT_EQ(a.ud.delta_star, b.ud.delta_star);
      EXPECT_TRUE(a.type.same_bits(b.type));
      EXPECT_EQ(up_constant(s, a.up.r_min).c_star, up_constant(z, a.up.r_min * lambda).c_star);
    }
  }
}
