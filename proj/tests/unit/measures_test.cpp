#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gen.hpp"
#include "gnet/kernels.hpp"
#include "gnet/measures.hpp"

using namespace gnet;

namespace {

SignedAtomMeasure on_sphere(std::initializer_list<double> weights,
                            std::uint64_t seed = 1) {
  const Space s = Space::sphere(2);
  gen::Gen g(seed);
  const std::size_t n = weights.size();
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  Eigen::Index i = 0;
  for (double v : weights) w[i++] = v;
  return SignedAtomMeasure(s, s.sample_uniform(g.rng(), n), w);
}

}  // namespace

TEST(TotalVariation, Examples) {
  EXPECT_DOUBLE_EQ(total_variation(on_sphere({0.5, -0.5})), 1.0);
  EXPECT_DOUBLE_EQ(total_variation(on_sphere({0.25, 0.25, 0.25, 0.25})), 1.0);
  EXPECT_DOUBLE_EQ(total_variation(on_sphere({2.0, -3.0, 0.5})), 5.5);
}

TEST(SignedAtomMeasure, RejectsBadInput) {
  const Space s = Space::sphere(2);
  EXPECT_THROW(SignedAtomMeasure(s, PointCloud(3, 0), Eigen::VectorXd(0)),
               DomainError);
  PointCloud off(3, 1);
  off << 1.0, 1.0, 0.0;
  EXPECT_THROW(SignedAtomMeasure(s, off, Eigen::VectorXd::Ones(1)), DomainError);
  EXPECT_THROW(on_sphere({0.0, 0.0}), DomainError);
  EXPECT_THROW(on_sphere({1.0, std::nan("")}), DomainError);
}

TEST(SignedAtomMeasure, SupportSkipsZeros) {
  const auto m = on_sphere({0.5, 0.0, -0.5});
  EXPECT_EQ(m.support(), (std::vector<std::size_t>{0, 2}));
}

TEST(HahnSplit, Examples) {
  const auto a = hahn_split(on_sphere({2.0, -3.0}));
  EXPECT_DOUBLE_EQ(a.mass_pos, 2.0);
  EXPECT_DOUBLE_EQ(a.mass_neg, 3.0);
  ASSERT_TRUE(a.positive);
  ASSERT_EQ(a.positive->size(), 1u);
  EXPECT_DOUBLE_EQ(a.positive->weight(0), 1.0);

  const auto b = hahn_split(on_sphere({0.3, 0.7}));
  EXPECT_FALSE(b.negative);
  EXPECT_EQ(b.mass_neg, 0.0);

  const auto c = hahn_split(on_sphere({1.0, -1.0, 2.0}));
  EXPECT_DOUBLE_EQ(c.mass_pos, 3.0);
  EXPECT_EQ(c.pos_index, (std::vector<std::size_t>{0, 2}));
  EXPECT_NEAR(c.positive->weight(0), 1.0 / 3.0, 1e-16);
  EXPECT_NEAR(c.positive->weight(1), 2.0 / 3.0, 1e-16);
}

TEST(HahnSplit, ReconstructsAtomwise) {
  gen::Gen g(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Space s = g.integer(0, 1) ? Space::sphere(2) : Space::ball(3);
    const std::size_t n = std::size_t(g.integer(1, 300));
    const SignedAtomMeasure m(s, s.sample_uniform(g.rng(), n),
                              g.signed_weights(n) * g.real(0.1, 5.0));
    const HahnSplit h = hahn_split(m);
    EXPECT_NEAR(h.mass_pos + h.mass_neg, m.total_variation(), 1e-15);
    Eigen::VectorXd rebuilt = Eigen::VectorXd::Zero(Eigen::Index(n));
    for (std::size_t k = 0; k < h.pos_index.size(); ++k) {
      rebuilt[Eigen::Index(h.pos_index[k])] += h.mass_pos * h.positive->weight(k);
      EXPECT_EQ(h.positive->point(k), m.point(h.pos_index[k]));
    }
    for (std::size_t k = 0; k < h.neg_index.size(); ++k)
      rebuilt[Eigen::Index(h.neg_index[k])] -= h.mass_neg * h.negative->weight(k);
    for (std::size_t i = 0; i < n; ++i)
      EXPECT_NEAR(rebuilt[Eigen::Index(i)], m.weight(i),
                  1e-15 * std::max(1.0, m.total_variation()));
  }
}

TEST(BallMass, Examples) {
  const Space s = Space::sphere(2);
  gen::Gen g(3);
  const SignedAtomMeasure m(s, s.sample_uniform(g.rng(), 1000),
                            Eigen::VectorXd::Constant(1000, 1e-3));
  EXPECT_NEAR(ball_mass(m, m.point(0), 2.0), 1.0, 1e-12);
  EXPECT_NEAR(ball_mass(m, m.point(5), 0.0), 1e-3, 1e-18);
  const Point c = g.point(s);
  int count = 0;
  for (std::size_t i = 0; i < m.size(); ++i)
    count += s.distance(m.point(i), c) <= 0.5;
  EXPECT_NEAR(ball_mass(m, c, 0.5), count / 1000.0, 1e-12);
  EXPECT_THROW(ball_mass(m, c, -1.0), DomainError);
}

TEST(BallMass, MonotoneInRadius) {
  gen::Gen g(4);
  const Space b = Space::ball(2);
  const SignedAtomMeasure m(b, b.sample_uniform(g.rng(), 500), g.signed_weights(500));
  for (int t = 0; t < 50; ++t) {
    const Point c = g.point(b);
    const double r1 = g.real(0.0, 2.0), r2 = g.real(0.0, 2.0);
    EXPECT_LE(ball_mass(m, c, std::min(r1, r2)), ball_mass(m, c, std::max(r1, r2)));
  }
}

TEST(TubeMass, Examples) {
  gen::Gen g(5);
  const KernelSpec lower = KernelSpec::relu_pow(1.0, 2, 4);
  const SignedAtomMeasure m4(lower.y_space(), lower.y_space().sample_uniform(g.rng(), 200),
                             Eigen::VectorXd::Constant(200, 0.005));
  EXPECT_EQ(tube_mass(m4, lower, g.point(lower.x_space()), 0.5), 0.0);

  const KernelSpec relu = KernelSpec::relu_pow(1.0, 2, 2);
  const Space& s = relu.y_space();
  const int n = 100000;
  const SignedAtomMeasure m(s, s.sample_uniform(g.rng(), n),
                            Eigen::VectorXd::Constant(n, 1.0 / n));
  Point north = Point::Zero(3);
  north[2] = 1.0;
  EXPECT_NEAR(tube_mass(m, relu, north, 2.0), 1.0, 1e-10);
  for (double eps : {0.02, 0.05, 0.1, 0.2, 0.5}) {
    const double frac = tube_mass(m, relu, north, eps);
    EXPECT_LE(frac, 3.0 * std::sqrt(std::numbers::pi * 4.0) * eps * 1.05) << eps;
    // Uniform sphere: band |latitude| <= pi eps / 2 has mass sin(pi eps / 2).
    EXPECT_NEAR(frac, std::sin(std::numbers::pi * eps / 2.0), 0.01) << eps;
  }
}

TEST(Surrogate, Examples) {
  gen::Gen g(6);
  const Space s = Space::sphere(2);
  const auto u = make_surrogate(SurrogateSpec::uniform(), 4, s, g.rng());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(u.weight(i), 0.25);

  const auto neg = make_surrogate(SurrogateSpec::negative(), 100, s, g.rng());
  EXPECT_NEAR(neg.total_variation(), 1.0, 1e-14);
  EXPECT_TRUE((neg.weights().array() < 0.0).all());

  const auto cap = make_surrogate(SurrogateSpec::cap(0.5), 100000, s, g.rng());
  Point e1 = Point::Zero(3);
  e1[0] = 1.0;
  EXPECT_GE(ball_mass(cap, e1, 0.5) / cap.total_variation(), 0.9);

  const auto sig = make_surrogate(SurrogateSpec::signed_linear(), 2000, s, g.rng());
  EXPECT_TRUE((sig.weights().array() < 0.0).any());
  EXPECT_TRUE((sig.weights().array() > 0.0).any());

  const auto custom = make_surrogate(
      SurrogateSpec::custom([](const Point& p) { return p[1] > 0 ? 2.0 : 0.0; }),
      500, s, g.rng());
  for (std::size_t i = 0; i < custom.size(); ++i)
    EXPECT_EQ(custom.weight(i), custom.point(i)[1] > 0 ? 2.0 / 500 : 0.0);

  EXPECT_THROW(SurrogateSpec::from_name("gaussian"), ConfigError);
  EXPECT_THROW(make_surrogate(SurrogateSpec::uniform(), 0, s, g.rng()), DomainError);
}

TEST(Surrogate, DeterministicUnderSeed) {
  const Space b = Space::ball(3);
  for (const char* name : {"uniform", "cap", "negative", "signed"}) {
    Rng r1 = make_rng(42), r2 = make_rng(42);
    const auto a = make_surrogate(SurrogateSpec::from_name(name), 300, b, r1);
    const auto c = make_surrogate(SurrogateSpec::from_name(name), 300, b, r2);
    EXPECT_EQ(a.points(), c.points()) << name;
    EXPECT_EQ(a.weights(), c.weights()) << name;
  }
}

TEST(MeasureIo, RoundTripIsBitExact) {
  gen::Gen g(9);
  const Space s = Space::sphere(3, 5);
  const SignedAtomMeasure m(s, s.sample_uniform(g.rng(), 200), g.signed_weights(200));
  std::stringstream ss;
  write_measure(ss, m);
  const SignedAtomMeasure back = read_measure(ss, s);
  EXPECT_EQ(back.points(), m.points());
  EXPECT_EQ(back.weights(), m.weights());
}

TEST(MeasureIo, RejectsMalformed) {
  const Space s = Space::sphere(2);
  std::istringstream short_line("# comment\n0.5 1 0\n");
  EXPECT_THROW(read_measure(short_line, s), ConfigError);
  std::istringstream junk("0.5 1 0 x\n");
  EXPECT_THROW(read_measure(junk, s), ConfigError);
  std::istringstream empty("\n# nothing\n");
  EXPECT_THROW(read_measure(empty, s), ConfigError);
  std::istringstream off("0.5 1 1 0\n");
  EXPECT_THROW(read_measure(off, s), DomainError);
}
