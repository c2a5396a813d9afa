#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gen.hpp"
#include "gnet/geometry.hpp"

using namespace gnet;

namespace {

Point e(int i, int n) {
  Point p = Point::Zero(n);
  p[i] = 1.0;
  return p;
}

}  // namespace

TEST(Distance, SphereExamples) {
  const Space s = Space::sphere(2);
  EXPECT_EQ(distance(s, e(0, 3), e(0, 3)), 0.0);
  EXPECT_NEAR(distance(s, e(0, 3), -e(0, 3)), 2.0, 1e-15);
  EXPECT_NEAR(distance(s, e(0, 3), e(1, 3)), 1.0, 1e-15);
}

TEST(Distance, MatchesArccos) {
  gen::Gen g(3);
  const Space s = Space::sphere(3);
  for (int i = 0; i < 500; ++i) {
    const Point x = g.point(s), y = g.point(s);
    const double want = 2.0 / std::numbers::pi * std::acos(std::clamp(x.dot(y), -1.0, 1.0));
    EXPECT_NEAR(s.distance(x, y), want, 1e-7);
  }
}

TEST(Distance, BallIsEuclidean) {
  const Space b = Space::ball(2, 3);
  Point x(3), y(3);
  x << 0.3, 0.4, 0.0;
  y << -0.3, 0.0, 0.0;
  EXPECT_NEAR(distance(b, x, y), std::hypot(0.6, 0.4), 1e-15);
}

TEST(Distance, OffSpaceThrows) {
  const Space s = Space::sphere(2);
  Point bad(3);
  bad << 1.0, 1.0, 0.0;
  EXPECT_THROW(distance(s, bad, e(0, 3)), DomainError);
  const Space b = Space::ball(2, 3);
  EXPECT_THROW(distance(b, e(2, 3), Point::Zero(3)), DomainError);
}

TEST(Distance, MetricAxiomsOnRandomTriples) {
  gen::Gen g(11);
  const std::vector<Space> spaces{Space::sphere(2), Space::sphere(3, 5),
                                  Space::ball(2), Space::ball(3, 4)};
  for (int i = 0; i < 10000; ++i) {
    const Space& s = g.pick(spaces);
    const Point x = g.point(s), y = g.point(s), z = g.point(s);
    const double xy = s.distance(x, y), yx = s.distance(y, x);
    EXPECT_EQ(xy, yx);
    EXPECT_GE(xy, 0.0);
    EXPECT_LE(xy, s.distance(x, z) + s.distance(z, y) + 1e-12);
    EXPECT_EQ(s.distance(x, x), 0.0);
  }
}

TEST(Space, EmbeddedSphereKeepsTrailingZeros) {
  const Space s = Space::sphere(2, 5);
  gen::Gen g(2);
  for (int i = 0; i < 50; ++i) {
    const Point p = g.point(s);
    EXPECT_EQ(p.tail(2).norm(), 0.0);
    EXPECT_TRUE(s.contains(p));
  }
  EXPECT_THROW(Space::sphere(3, 3), DomainError);
  EXPECT_THROW(Space::ball(0), DomainError);
}

TEST(Space, BallSamplesAreVolumeUniform) {
  const Space b = Space::ball(2);
  gen::Gen g(5);
  int inner = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) inner += g.point(b).norm() <= 0.5;
  EXPECT_NEAR(inner / double(n), 0.25, 0.01);
}

TEST(RaiseToSphere, Examples) {
  const double zero[] = {0.0, 0.0};
  const RaisedPoint a = raise_to_sphere(zero, 1.0);
  EXPECT_EQ(a.scale, 1.0);
  EXPECT_EQ(a.point, e(2, 3));

  const double y[] = {3.0, 4.0};
  const RaisedPoint w = raise_to_sphere(y, 0.0);
  EXPECT_DOUBLE_EQ(w.scale, 5.0);
  EXPECT_NEAR(w.point[0], 0.6, 1e-15);
  EXPECT_NEAR(w.point[1], 0.8, 1e-15);
  EXPECT_EQ(w.point[2], 0.0);

  const double x1[] = {1.0, 0.0};
  const RaisedPoint xr = raise_to_sphere(x1, 1.0);
  const RaisedPoint wr = raise_to_sphere(x1, 1.0);
  EXPECT_NEAR(xr.scale * wr.scale * std::max(0.0, xr.point.dot(wr.point)), 2.0,
              1e-14);

  EXPECT_THROW(raise_to_sphere(zero, 0.0), DomainError);
}

TEST(RaiseToSphere, IdentityOnRandomInstances) {
  gen::Gen g(8);
  for (int i = 0; i < 1000; ++i) {
    const int q = g.integer(1, 6);
    const double gamma = g.integer(1, 3);
    const Eigen::VectorXd x = g.gaussian(q), y = g.gaussian(q);
    const double b = g.normal();
    const RaisedPoint xr = raise_to_sphere({x.data(), std::size_t(q)}, 1.0);
    const RaisedPoint wr = raise_to_sphere({y.data(), std::size_t(q)}, b);
    EXPECT_NEAR(xr.point.norm(), 1.0, 1e-14);
    const double lhs = std::pow(std::max(0.0, x.dot(y) + b), gamma);
    const double rhs = std::pow(xr.scale * wr.scale, gamma) *
                       std::pow(std::max(0.0, xr.point.dot(wr.point)), gamma);
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::max({1.0, lhs, rhs}));
  }
}

TEST(EpsilonNet, DiameterGivesOnePoint) {
  gen::Gen g(1);
  const Space s = Space::sphere(2);
  EXPECT_EQ(epsilon_net(s, 2.0, 500, g.rng()).cols(), 1);
  PointCloud one(3, 1);
  one.col(0) = e(1, 3);
  const PointCloud net = epsilon_net(s, one, 0.1);
  ASSERT_EQ(net.cols(), 1);
  EXPECT_EQ(net.col(0), e(1, 3));
  EXPECT_THROW(epsilon_net(s, PointCloud(3, 0), 0.1), DomainError);
  EXPECT_THROW(epsilon_net(s, one, 0.0), DomainError);
}

TEST(EpsilonNet, CircleOnSphere) {
  // Great circle through e1, e2: circumference 4 in the scaled metric.
  const Space s = Space::sphere(2);
  const int n = 100000;
  PointCloud circle(3, n);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n;
    circle.col(i) << std::cos(t), std::sin(t), 0.0;
  }
  const auto idx = epsilon_net_indices(s, circle, 0.5);
  EXPECT_GE(idx.size(), 4u);
  EXPECT_LE(idx.size(), 8u);
  for (int i = 0; i < n; ++i) {
    double best = 3.0;
    for (auto k : idx)
      best = std::min(best, s.distance(circle.col(i), circle.col(Eigen::Index(k))));
    ASSERT_LE(best, 0.5);
  }
}

TEST(EpsilonNet, CoversAndPacksOnRandomClouds) {
  gen::Gen g(21);
  const std::vector<Space> spaces{Space::sphere(2), Space::sphere(3),
                                  Space::ball(2), Space::ball(3)};
  for (int trial = 0; trial < 30; ++trial) {
    const Space& s = g.pick(spaces);
    const PointCloud cloud = s.sample_uniform(g.rng(), 1500);
    const double eps = g.real(0.2, 1.2);
    const auto idx = epsilon_net_indices(s, cloud, eps);
    EXPECT_EQ(idx.front(), 0u);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        EXPECT_GT(s.distance(cloud.col(Eigen::Index(idx[a])),
                             cloud.col(Eigen::Index(idx[b]))),
                  eps);
    for (Eigen::Index i = 0; i < cloud.cols(); ++i) {
      double best = 3.0;
      for (auto k : idx)
        best = std::min(best, s.distance(cloud.col(i), cloud.col(Eigen::Index(k))));
      ASSERT_LE(best, eps);
    }
  }
}

TEST(Covering, Examples) {
  const Space s = Space::sphere(2);
  EXPECT_NEAR(covering_bound(s, 1.0, 1.0), std::pow(2.0, 1.5) * std::log(2.0), 1e-15);
  EXPECT_NEAR(covering_bound(s, 1.0, 1.0), 1.9605, 5e-5);
  EXPECT_NEAR(covering_bound(s, 0.25, 1.0) / covering_bound(s, 0.5, 1.0), 4.0, 1e-12);
  EXPECT_DOUBLE_EQ(covering_constant_target(Space::sphere(3), 2.0), 18.0);
  EXPECT_THROW(covering_bound(s, 0.0, 1.0), DomainError);
  EXPECT_THROW(covering_bound(s, 1.5, 1.0), DomainError);
  EXPECT_THROW(covering_constant(Space::sphere(1), 1.0), DomainError);
  EXPECT_THROW(covering_constant(s, 0.0), DomainError);
}

TEST(Covering, GreedyNetWithinCalibratedBound) {
  const Space s = Space::sphere(2);
  gen::Gen g(4);
  const double kappa = default_partition_kappa(s);
  for (int probe = 0; probe < 3; ++probe) {
    const PointCloud cloud = s.sample_uniform(g.rng(), 20000);
    const double size = double(epsilon_net_indices(s, cloud, 0.25).size());
    EXPECT_LE(size, covering_bound(s, 0.25, kappa));
  }
}

TEST(Covering, TableMatchesCalibration) {
  const double grid[] = {1.0, 0.9, 0.75, 0.6, 0.5};
  for (const Space& s : {Space::sphere(2), Space::ball(2)}) {
    const double measured = calibrate_kappa(s, grid, 3, 5000, 99);
    EXPECT_GT(measured, 0.0);
    EXPECT_LE(measured, default_partition_kappa(s)) << s.describe();
  }
}
