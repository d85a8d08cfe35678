#include <gtest/gtest.h>

#include <random>

#include "densemet/range_set.hpp"
#include "densemet/space.hpp"
#include "oracles.hpp"

using namespace densemet;

namespace {

FiniteMetricSpace make(const oracle::Matrix& rows, Flavor flavor = Flavor::metric, double tol = kDefaultTolerance) {
  return validate(index_labels(rows.size()), DistanceMatrix::from_rows(rows), flavor, tol);
}

FiniteMetricSpace random_closure(std::size_t n, std::mt19937_64& rng) {
  return metric_closure(index_labels(n), DistanceMatrix::from_rows(oracle::random_raw(n, rng)));
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::BadInput;
}

}  // namespace

TEST(Validate, AcceptsSmallMetric) {
  const auto s = make({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.diameter(), 2.0);
  EXPECT_EQ(s.min_positive_distance(), 1.0);
}

TEST(Validate, SinglePointIsValid) {
  const auto s = make({{0}});
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s.min_positive_distance(), 0.0);
}

TEST(Validate, ReportsTriangleWitness) {
  try {
    make({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TriangleViolation);
  }
  const auto v = find_violation(DistanceMatrix::from_rows({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}), Flavor::metric);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->i, 0u);
  EXPECT_EQ(v->j, 2u);
  EXPECT_EQ(v->k, 1u);
}

TEST(Validate, ErrorKinds) {
  EXPECT_EQ(code_of([] { make({{0, 1}, {2, 0}}); }), ErrorCode::AsymmetricMatrix);
  EXPECT_EQ(code_of([] { make({{1, 1}, {1, 0}}); }), ErrorCode::NonzeroDiagonal);
  EXPECT_EQ(code_of([] { make({{0, 0}, {0, 0}}); }), ErrorCode::NonpositiveOffDiagonal);
  EXPECT_EQ(code_of([] { make({{0, 1, 2}, {1, 0, 1}}); }), ErrorCode::NotSquare);
  EXPECT_EQ(code_of([] { make({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}, Flavor::ultrametric); }),
            ErrorCode::StrongTriangleViolation);
  EXPECT_EQ(code_of([] { validate({"a"}, DistanceMatrix::from_rows({{0, 1}, {1, 0}}), Flavor::metric); }),
            ErrorCode::NotSquare);
}

TEST(Validate, ToleranceIsRelativeToMaximum) {
  // 2 + 1e-10 exceeds 1 + 1 by 5e-11 relative to the maximum.
  const oracle::Matrix m{{0, 1, 2 + 1e-10}, {1, 0, 1}, {2 + 1e-10, 1, 0}};
  EXPECT_NO_THROW(make(m));
  EXPECT_THROW(make(m, Flavor::metric, 0.0), Error);
}

TEST(Validate, FuzzedSingleEntryViolationsAreCaught) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + trial % 8;
    const auto base = random_closure(n, rng);
    auto m = base.matrix();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    const int kind = trial % 4;
    if (kind == 0) {
      // Inflate one pair past every detour.
      const double v = 3.0 * m.max_entry();
      m(i, j) = v;
      m(j, i) = v;
      const auto w = find_violation(m, Flavor::metric);
      ASSERT_TRUE(w);
      ASSERT_EQ(w->code, ErrorCode::TriangleViolation);
      EXPECT_GT(m(w->i, w->j), m(w->i, w->k) + m(w->k, w->j));
      EXPECT_TRUE((w->i == std::min(i, j) && w->j == std::max(i, j)) || w->k == i || w->k == j);
    } else if (kind == 1) {
      m(i, j) += 0.25;
      const auto w = find_violation(m, Flavor::metric);
      ASSERT_TRUE(w);
      EXPECT_EQ(w->code, ErrorCode::AsymmetricMatrix);
      EXPECT_EQ(w->i, std::min(i, j));
      EXPECT_EQ(w->j, std::max(i, j));
    } else if (kind == 2) {
      m(i, i) = 0.5;
      const auto w = find_violation(m, Flavor::metric);
      ASSERT_TRUE(w);
      EXPECT_EQ(w->code, ErrorCode::NonzeroDiagonal);
      EXPECT_EQ(w->i, i);
    } else {
      m(i, j) = 0.0;
      m(j, i) = 0.0;
      const auto w = find_violation(m, Flavor::metric);
      ASSERT_TRUE(w);
      EXPECT_EQ(w->code, ErrorCode::NonpositiveOffDiagonal);
      EXPECT_EQ(w->i, std::min(i, j));
      EXPECT_EQ(w->j, std::max(i, j));
    }
  }
}

TEST(Validate, ShrunkEntryGivesRealTriangleWitness) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto base = random_closure(6, rng);
    auto m = base.matrix();
    // A tiny edge makes some other pair longer than the detour through it.
    m(1, 4) = 1e-3;
    m(4, 1) = 1e-3;
    const auto w = find_violation(m, Flavor::metric);
    if (!w) continue;
    ASSERT_EQ(w->code, ErrorCode::TriangleViolation);
    EXPECT_GT(m(w->i, w->j), m(w->i, w->k) + m(w->k, w->j));
  }
}

TEST(Subspace, RestrictAndScale) {
  const auto s = make({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  const auto r = s.restrict_to({2, 0});
  EXPECT_EQ(r.labels(), (std::vector<std::string>{"2", "0"}));
  EXPECT_EQ(r(0, 1), 2.0);
  const auto t = s.scaled(0.5);
  EXPECT_EQ(t(0, 2), 1.0);
  EXPECT_THROW(s.scaled(0.0), Error);
  EXPECT_THROW(s.restrict_to({0, 0}), Error);
}

TEST(Subspace, Stats) {
  const auto s = make({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  const auto st = subset_stats(s, {0, 1, 2});
  EXPECT_EQ(st.diameter, 2.0);
  EXPECT_EQ(st.separation(), 1.0);
  EXPECT_EQ(st.cardinality, 3u);
  EXPECT_THROW(subset_stats(s, {1}).separation(), Error);
}

TEST(SupDistance, Examples) {
  const auto d = make({{0, 1}, {1, 0}});
  const auto e = make({{0, 3}, {3, 0}});
  EXPECT_EQ(sup_distance(d, d).value, 0.0);
  EXPECT_EQ(sup_distance(d, e).value, 2.0);
  const auto f = validate({"a", "b"}, DistanceMatrix::from_rows({{0, 1}, {1, 0}}), Flavor::metric);
  EXPECT_THROW(sup_distance(d, f), Error);
}

TEST(SupDistance, IsAMetricOnRandomTriples) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_closure(6, rng);
    const auto b = random_closure(6, rng);
    const auto c = random_closure(6, rng);
    EXPECT_EQ(sup_distance(a, b).value, sup_distance(b, a).value);
    EXPECT_LE(sup_distance(a, c).value, sup_distance(a, b).value + sup_distance(b, c).value);
  }
}

TEST(UltraDistance, Examples) {
  const auto S = RangeSet::explicit_values({0, 1, 2, 4});
  const auto d = make({{0, 1, 2}, {1, 0, 2}, {2, 2, 0}}, Flavor::ultrametric);
  const auto e = make({{0, 1, 4}, {1, 0, 4}, {4, 4, 0}}, Flavor::ultrametric);
  EXPECT_EQ(ultra_distance(d, d, S).value, 0.0);
  EXPECT_EQ(ultra_distance(d, e, S).value, 4.0);
  const auto small = RangeSet::explicit_values({0, 1, 2, 4});
  const auto off = make({{0, 3, 3}, {3, 0, 3}, {3, 3, 0}}, Flavor::ultrametric);
  EXPECT_THROW(ultra_distance(d, off, small), Error);
  EXPECT_THROW(ultra_distance(d.as_metric(), e, S), Error);
}

TEST(UltraDistance, InfiniteWhenNoElementIsLargeEnough) {
  const auto S = RangeSet::explicit_values({0, 1, 2});
  const auto d = make({{0, 1}, {1, 0}}, Flavor::ultrametric);
  const auto e = make({{0, 2}, {2, 0}}, Flavor::ultrametric);
  // max is 2 and 2 is in S, so finite; with S = {0, 1} and e = 1 nothing differs.
  EXPECT_EQ(ultra_distance(d, e, S).value, 2.0);
  const auto geometric = RangeSet::geometric(1.0, 0.5);
  EXPECT_FALSE(ultra_distance(d, e, geometric).is_infinite());
}

TEST(UltraDistance, MatchesDefinitionOverExplicitRange) {
  std::mt19937_64 rng(5);
  const std::vector<double> values{0, 0.125, 0.25, 0.5, 1, 2, 4};
  const auto S = RangeSet::explicit_values(values);
  std::uniform_int_distribution<std::size_t> level(1, values.size() - 1);
  auto random_ultra = [&](std::size_t n) {
    // Push a random closure through its bottleneck, then snap into S.
    oracle::Matrix raw = oracle::random_raw(n, rng, 0.1, 4.0);
    const auto mm = oracle::chain_minimax(raw);
    oracle::Matrix snapped(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) snapped[i][j] = i == j ? 0.0 : S.least_geq(mm[i][j]);
    }
    return make(snapped, Flavor::ultrametric, 0.0);
  };
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 5;
    const auto d = random_ultra(n);
    const auto e = random_ultra(n);
    const auto f = random_ultra(n);
    const double got = ultra_distance(d, e, S).value;
    EXPECT_EQ(got, oracle::ultra_by_definition(oracle::rows(d), oracle::rows(e), values));
    // Strong triangle inequality among metrics.
    EXPECT_LE(ultra_distance(d, f, S).value, std::max(got, ultra_distance(e, f, S).value));
  }
}

TEST(Closure, MatchesPathEnumeration) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + t % 6;
    const auto raw = oracle::random_raw(n, rng, 0.1, 3.0);
    const auto c = metric_closure(index_labels(n), DistanceMatrix::from_rows(raw));
    const auto expect = oracle::shortest_paths(raw);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(c(i, j), expect[i][j], 1e-12);
    }
  }
}

TEST(Closure, RandomMetricAxiomsOnTriples) {
  std::mt19937_64 rng(13);
  const auto s = random_closure(40, rng);
  std::uniform_int_distribution<std::size_t> pick(0, 39);
  for (int t = 0; t < 2000; ++t) {
    const auto x = pick(rng);
    const auto y = pick(rng);
    const auto z = pick(rng);
    EXPECT_EQ(s(x, y), s(y, x));
    EXPECT_LE(s(x, z), (s(x, y) + s(y, z)) * (1 + 1e-12));
  }
}
