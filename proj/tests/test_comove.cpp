#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kinex/comove.hpp"
#include "kinex/error.hpp"
#include "oracles.hpp"

using namespace kinex;

TEST(Pearson, SelfAndAntiCorrelation) {
  const std::vector<double> x{1, 2, 3}, y{3, 2, 1};
  EXPECT_DOUBLE_EQ(pearson(x, x), 1.0);
  EXPECT_DOUBLE_EQ(pearson(x, y), -1.0);
}

TEST(Pearson, MatchesRawMomentEvaluation) {
  const std::vector<double> x{1, 2, 4}, y{1, 3, 4};
  // <xy> - <x><y> = 13/9 and both variances are 14/9.
  const double expected = 13.0 / 14.0;
  EXPECT_NEAR(oracle::pearson_raw_moments(x, y), expected, 1e-15);
  EXPECT_NEAR(pearson(x, y), expected, 1e-15);
}

TEST(Pearson, Errors) {
  const std::vector<double> c{2, 2, 2}, x{1, 2, 3}, shortx{1, 2};
  EXPECT_THROW(pearson(c, x), Error);
  try {
    pearson(x, c);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Degenerate);
  }
  EXPECT_THROW(pearson(shortx, shortx), Error);
  EXPECT_THROW(pearson(x, shortx), Error);
}

TEST(PearsonProperties, AffineInvarianceAndSign) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 10.0), shift(-100.0, 100.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + trial % 20;
    std::vector<double> x(n), y(n), ax(n), nx(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = g(rng);
      y[i] = 0.5 * x[i] + g(rng);
    }
    const double a = pos(rng), b = shift(rng);
    for (std::size_t i = 0; i < n; ++i) {
      ax[i] = a * x[i] + b;
      nx[i] = -x[i];
    }
    const double r = pearson(x, y);
    ASSERT_GE(r, -1.0);
    ASSERT_LE(r, 1.0);
    ASSERT_NEAR(pearson(ax, y), r, 1e-10);
    ASSERT_NEAR(pearson(nx, y), -r, 1e-12);
    ASSERT_NEAR(r, oracle::pearson_raw_moments(x, y), 1e-9);
  }
}

TEST(CorrelationMatrix, IdenticalSeriesGiveAllOnes) {
  auto p = parse_panel_csv(
      "country,1,2,3,4,5,6,7,8\n"
      "AAA,1,3,2,5,4,6,8,7\n"
      "BBB,1,3,2,5,4,6,8,7\n"
      "CCC,1,3,2,5,4,6,8,7\n",
      IndicatorKind::GiniIndex);
  auto r = correlation_matrix(p, CleaningPolicy{});
  ASSERT_EQ(r.matrix.size(), 3u);
  EXPECT_TRUE(r.dropped.empty());
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(r.matrix(i, j), 1.0);
  }
}

TEST(CorrelationMatrix, ConstantCountryIsDropped) {
  auto p = parse_panel_csv(
      "country,1,2,3,4,5,6,7,8\n"
      "AAA,1,3,2,5,4,6,8,7\n"
      "FLT,5,5,5,5,5,5,5,5\n"
      "BBB,2,1,2,6,3,6,9,9\n",
      IndicatorKind::GiniIndex);
  auto r = correlation_matrix(p, CleaningPolicy{});
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0].code.str(), "FLT");
  EXPECT_NE(r.dropped[0].reason.find("constant"), std::string::npos);
  ASSERT_EQ(r.matrix.size(), 2u);
  EXPECT_EQ(r.matrix.labels()[1].str(), "BBB");
}

TEST(CorrelationMatrix, TooFewUsableCountries) {
  auto p = parse_panel_csv("country,1,2,3\nAAA,1,2,3\nBBB,3,1,2\n", IndicatorKind::GiniIndex);
  try {
    correlation_matrix(p, CleaningPolicy{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
}

TEST(CorrelationMatrix, MatchesPerPairPearsonWithMissingCells) {
  auto p = parse_panel_csv(
      "country,2000,2001,2002,2003,2004,2005,2006,2007,2008,2009\n"
      "AAA,30.1,31.0,,29.5,28.7,30.2,31.4,32.0,31.1,30.0\n"
      "BBB,25.0,24.1,24.9,,26.3,27.0,26.1,25.5,24.4,23.9\n"
      "CCC,35.2,,36.8,37.1,36.0,35.5,34.9,,33.2,34.1\n"
      "DDD,28.0,28.5,29.3,30.1,,31.8,32.2,33.0,33.9,34.4\n",
      IndicatorKind::GiniIndex);
  CleaningPolicy policy;
  policy.min_overlap = 6;
  auto r = correlation_matrix(p, policy);
  ASSERT_EQ(r.matrix.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) continue;
      auto pair = align_pair(p, p.countries()[i], p.countries()[j], policy);
      EXPECT_EQ(r.matrix(i, j), pearson(pair.a, pair.b));
      EXPECT_NEAR(r.matrix(i, j), oracle::pearson_raw_moments(pair.a, pair.b), 1e-12);
    }
  }
}

TEST(CorrelationMatrix, ThreadCountDoesNotChangeBits) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(30.0, 5.0);
  std::string csv = "country";
  for (int y = 0; y < 15; ++y) csv += "," + std::to_string(1990 + y);
  csv += "\n";
  auto codes = oracle::labels(12);
  for (const auto& c : codes) {
    csv += c.str();
    for (int y = 0; y < 15; ++y) csv += "," + std::to_string(g(rng));
    csv += "\n";
  }
  auto p = parse_panel_csv(csv, IndicatorKind::GiniIndex);
  auto a = correlation_matrix(p, CleaningPolicy{}, 1);
  auto b = correlation_matrix(p, CleaningPolicy{}, 4);
  EXPECT_EQ(a.matrix.entries(), b.matrix.entries());
}

TEST(DistanceMatrix, Endpoints) {
  SquareMatrix m(4, 0.0);
  const double rho[4][4] = {{1, 1, -1, 0}, {1, 1, 0.5, 0}, {-1, 0.5, 1, 0}, {0, 0, 0, 1}};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = rho[i][j];
  }
  auto d = distance_matrix(CorrelationMatrix(oracle::labels(4), m));
  EXPECT_EQ(d(0, 1), 0.0);
  EXPECT_EQ(d(0, 2), 2.0);
  EXPECT_NEAR(d(0, 3), 1.4142135, 1e-7);
  EXPECT_EQ(d(1, 2), 1.0);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(d(i, i), 0.0);
}

TEST(DistanceMatrixProperties, MonotoneAndInRange) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 6;
    SquareMatrix m(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = u(rng);
    }
    CorrelationMatrix c(oracle::labels(n), m);
    auto d = distance_matrix(c);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        ASSERT_EQ(d(i, j), d(j, i));
        ASSERT_GE(d(i, j), 0.0);
        ASSERT_LE(d(i, j), 2.0);
        for (std::size_t k = 0; k < n; ++k) {
          for (std::size_t l = 0; l < n; ++l) {
            if (i == j || k == l) continue;
            if (c(i, j) > c(k, l)) {
              ASSERT_LT(d(i, j), d(k, l));
            }
          }
        }
      }
    }
  }
}

TEST(ClassicalMds, TwoPoints) {
  SquareMatrix m(2, 0.0);
  m(0, 1) = m(1, 0) = 1.0;
  auto e = classical_mds(DistanceMatrix(oracle::labels(2), m), 1);
  ASSERT_EQ(e.coords.size(), 2u);
  EXPECT_NEAR(std::abs(e.coords[0]), 0.5, 1e-12);
  EXPECT_NEAR(e.coords[0] + e.coords[1], 0.0, 1e-12);
  EXPECT_NEAR(e.eigenvalues[0], 0.5, 1e-12);
}

TEST(ClassicalMds, EquilateralTriangle) {
  SquareMatrix m(3, 1.0);
  for (std::size_t i = 0; i < 3; ++i) m(i, i) = 0.0;
  DistanceMatrix d(oracle::labels(3), m);
  auto e = classical_mds(d, 2);
  EXPECT_LT(oracle::max_distance_error(e, d), 1e-9);
  EXPECT_FALSE(e.non_euclidean);
}

TEST(ClassicalMds, SignConventionLargestCoordinatePositive) {
  std::mt19937_64 rng(3);
  auto pts = oracle::random_disk_points(8, rng);
  auto e = classical_mds(oracle::planar_distances(pts), 2);
  for (std::size_t axis = 0; axis < 2; ++axis) {
    double best = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      if (std::abs(e.coord(i, axis)) > std::abs(best)) best = e.coord(i, axis);
    }
    EXPECT_GT(best, 0.0);
  }
  EXPECT_GE(e.eigenvalues[0], e.eigenvalues[1]);
}

TEST(ClassicalMds, PlanarRoundTrip) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    auto pts = oracle::random_disk_points(10, rng);
    auto d = oracle::planar_distances(pts);
    auto e = classical_mds(d, 2);
    ASSERT_LT(oracle::max_distance_error(e, d), 1e-6);
  }
}

TEST(ClassicalMds, NegativeEigenvaluesAreReportedNotClamped) {
  // Four points where one pair is "too far": violates the triangle inequality.
  SquareMatrix m(4, 0.1);
  for (std::size_t i = 0; i < 4; ++i) m(i, i) = 0.0;
  m(0, 1) = m(1, 0) = 1.9;
  auto e = classical_mds(DistanceMatrix(oracle::labels(4), m), 3);
  EXPECT_TRUE(e.non_euclidean);
  EXPECT_LT(e.min_eigenvalue, 0.0);
  EXPECT_LT(e.eigenvalues.back(), 0.0);
}

TEST(ClassicalMds, Preconditions) {
  SquareMatrix m(3, 1.0);
  for (std::size_t i = 0; i < 3; ++i) m(i, i) = 0.0;
  DistanceMatrix d(oracle::labels(3), m);
  EXPECT_THROW(classical_mds(d, 0), Error);
  EXPECT_THROW(classical_mds(d, 3), Error);
  EXPECT_THROW(classical_mds(DistanceMatrix(oracle::labels(1), SquareMatrix(1)), 1), Error);
}

TEST(Mst, UniqueMinimum) {
  // Weights 1, 2, 3 halved to fit the [0, 2] distance range; same ordering.
  SquareMatrix w(3, 0.0);
  w(0, 1) = w(1, 0) = 0.5;
  w(0, 2) = w(2, 0) = 1.0;
  w(1, 2) = w(2, 1) = 1.5;
  auto t = mst(DistanceMatrix(oracle::labels(3), w));
  ASSERT_EQ(t.edges.size(), 2u);
  EXPECT_EQ(t.edges[0], (TreeEdge{0, 1, 0.5}));
  EXPECT_EQ(t.edges[1], (TreeEdge{0, 2, 1.0}));
}

TEST(Mst, EqualWeightsTieBreakLexicographic) {
  SquareMatrix m(4, 1.0);
  for (std::size_t i = 0; i < 4; ++i) m(i, i) = 0.0;
  auto t = mst(DistanceMatrix(oracle::labels(4), m));
  ASSERT_EQ(t.edges.size(), 3u);
  EXPECT_EQ(t.edges[0].a, 0u);
  EXPECT_EQ(t.edges[0].b, 1u);
  EXPECT_EQ(t.edges[1].b, 2u);
  EXPECT_EQ(t.edges[2].b, 3u);
  for (const auto& e : t.edges) EXPECT_EQ(e.a, 0u);
}

TEST(MstProperties, MinimalConnectedAndMatchesEnumeration) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 6;  // 2..7
    auto d = oracle::random_distance_matrix(n, rng);
    auto t = mst(d);
    ASSERT_EQ(t.edges.size(), n - 1);
    UnionFind uf(n);
    for (const auto& e : t.edges) {
      ASSERT_LT(e.a, e.b);
      ASSERT_TRUE(uf.unite(e.a, e.b)) << "cycle";
    }
    ASSERT_EQ(uf.components(), 1u);
    ASSERT_EQ(t.total_weight(), oracle::mst_weight_by_enumeration(d.entries()));
  }
}

TEST(MstOracle, EnumeratesCayleyCount) {
  // On a complete graph with unit weights every tree has weight n-1.
  SquareMatrix m(5, 1.0);
  for (std::size_t i = 0; i < 5; ++i) m(i, i) = 0.0;
  EXPECT_EQ(oracle::mst_weight_by_enumeration(m), 4.0);
}
