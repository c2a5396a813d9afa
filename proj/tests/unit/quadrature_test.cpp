#include <gtest/gtest.h>

#include <set>

#include "gen.hpp"
#include "gnet/partition.hpp"
#include "gnet/quadrature.hpp"
#include "oracles.hpp"

using namespace gnet;

namespace {

/// Random polynomial of total degree <= deg in the span coordinates.
struct RandomPoly {
  std::vector<std::vector<int>> exps;
  std::vector<double> coef;

  RandomPoly(gen::Gen& g, int vars, int deg)
      : exps(oracle::multi_indices(vars, deg)) {
    for (std::size_t i = 0; i < exps.size(); ++i) coef.push_back(g.normal());
  }
  double operator()(const Eigen::VectorXd& y) const {
    double v = 0.0;
    for (std::size_t i = 0; i < exps.size(); ++i)
      v += coef[i] * oracle::monomial(y, exps[i]);
    return v;
  }
  double integrate(const PointCloud& pts, const Eigen::VectorXd& w) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < pts.cols(); ++i) s += w[i] * (*this)(pts.col(i));
    return s;
  }
};

void expect_valid(const QuadratureRule& r, const PointCloud& atoms, long bound) {
  EXPECT_LE(static_cast<long>(r.size()), bound);
  EXPECT_TRUE((r.weights.array() >= 0.0).all());
  EXPECT_NEAR(r.weights.sum(), 1.0, 1e-12);
  EXPECT_LE(r.residual, kQuadratureTol);
  std::set<std::size_t> seen(r.atoms.begin(), r.atoms.end());
  EXPECT_EQ(seen.size(), r.atoms.size());
  for (std::size_t j = 0; j < r.size(); ++j)
    EXPECT_EQ(r.points.col(Eigen::Index(j)), atoms.col(Eigen::Index(r.atoms[j])));
}

}  // namespace

TEST(CellMoments, Examples) {
  const Space b = Space::ball(2);
  const PolyBasis p(b, 1);
  PointCloud two(2, 2);
  two << 0.2, 0.6, -0.4, 0.0;
  const Eigen::VectorXd m = cell_moments(p, two, Eigen::Vector2d(3.0, 3.0));
  EXPECT_DOUBLE_EQ(m[0], 1.0);
  // Exponent order is graded; check by lookup.
  for (std::size_t r = 1; r < p.exponents().size(); ++r) {
    const int j = p.exponents()[r][0] == 1 ? 0 : 1;
    EXPECT_NEAR(m[Eigen::Index(r)], 0.5 * (two(j, 0) + two(j, 1)), 1e-16);
  }
  EXPECT_THROW(cell_moments(p, PointCloud(2, 0), Eigen::VectorXd(0)), DomainError);
  EXPECT_THROW(cell_moments(p, two, Eigen::Vector2d(0.0, 0.0)), DomainError);
}

TEST(CellMoments, MatchesDirectSum) {
  gen::Gen g(31);
  const Space s = Space::sphere(2);
  const PolyBasis p(s, 3);
  const PointCloud pts = g.cluster(s, 50, 0.3);
  const Eigen::VectorXd w = g.positive_weights(50);
  const Eigen::VectorXd m = cell_moments(p, pts, w * 7.0);
  for (std::size_t r = 0; r < p.exponents().size(); ++r) {
    double direct = 0.0;
    for (int i = 0; i < 50; ++i) direct += w[i] * oracle::monomial(pts.col(i), p.exponents()[r]);
    EXPECT_NEAR(m[Eigen::Index(r)], direct, 1e-14);
  }
}

TEST(CellMoments, FromPartitionCell) {
  gen::Gen g(32);
  const Space s = Space::sphere(2);
  const auto tau = ProbabilityAtomMeasure::normalized(s, s.sample_uniform(g.rng(), 40),
                                                      Eigen::VectorXd::Ones(40));
  Cell c;
  c.atoms = {3, 7, 11};
  c.center = tau.point(3);
  c.mass = 3.0 / 40;
  const PolyBasis p(s, 1);
  EXPECT_NEAR(cell_moments(p, c, tau)[0], 1.0, 1e-15);
}

TEST(Recombine, IdentityForSmallCells) {
  gen::Gen g(33);
  const Space s = Space::sphere(2);
  const PolyBasis p(s, 3);
  const PointCloud pts = g.cluster(s, 12, 0.2);
  const Eigen::VectorXd w = g.positive_weights(12);
  const QuadratureRule r = recombine(pts, w, p, g.rng(), 12);
  EXPECT_EQ(r.size(), 12u);
  EXPECT_EQ(r.points, pts);
  EXPECT_EQ(r.weights, w);
  EXPECT_LE(verify_rule(r, p, pts, w), 1e-15);
}

TEST(Recombine, ConstantsOnly) {
  gen::Gen g(34);
  const Space s = Space::sphere(2);
  const PolyBasis p(s, 1);
  const PointCloud pts = g.cluster(s, 100, 0.2);
  const QuadratureRule r = recombine(pts, g.positive_weights(100), p, g.rng(), 3);
  EXPECT_LE(r.size(), 2u);
  EXPECT_NEAR(r.weights.sum(), 1.0, 1e-15);
}

TEST(Recombine, FiveHundredAtomCell) {
  gen::Gen g(35);
  const Space s = Space::sphere(2);
  const PolyBasis p(s, 3);
  const long D = basis_dim(2, 3);
  ASSERT_EQ(D, 10);
  const PointCloud pts = g.cluster(s, 500, 0.25);
  const Eigen::VectorXd w = g.positive_weights(500);
  const QuadratureRule r = recombine(pts, w, p, g.rng(), std::size_t(D + 2));
  expect_valid(r, pts, D + 2);
  EXPECT_LE(verify_rule(r, p, pts, w), 1e-9);
  for (int k = 0; k < 20; ++k) {
    const RandomPoly P(g, 3, 2);
    EXPECT_NEAR(P.integrate(r.points, r.weights), P.integrate(pts, w), 1e-9);
  }
}

TEST(Recombine, PropertyOnRandomCells) {
  gen::Gen g(36);
  for (int t = 0; t < 60; ++t) {
    const bool sphere = g.integer(0, 1);
    const Space s = sphere ? Space::sphere(g.integer(2, 3)) : Space::ball(g.integer(2, 3));
    const int k = sphere ? g.integer(1, 4) : g.integer(1, 2);
    const PolyBasis p(s, k);
    const long D = basis_dim(s.dim(), k);
    const std::size_t n = std::size_t(g.integer(int(D) + 3, 800));
    const PointCloud pts = g.cluster(s, n, g.real(0.02, 0.6));
    const Eigen::VectorXd w = g.positive_weights(n);
    const QuadratureRule r = recombine(pts, w, p, g.rng(), std::size_t(D + 2));
    SCOPED_TRACE(s.describe() + " k=" + std::to_string(k));
    expect_valid(r, pts, D + 2);
    EXPECT_LE(verify_rule(r, p, pts, w), 1e-9);
    const RandomPoly P(g, s.span_dim(), max_degree(s, k));
    double scale = 0.0;
    for (Eigen::Index i = 0; i < pts.cols(); ++i)
      scale = std::max(scale, std::abs(P(pts.col(i))));
    EXPECT_NEAR(P.integrate(r.points, r.weights), P.integrate(pts, w),
                1e-9 * (1.0 + scale));
  }
}

TEST(Recombine, SeedsGiveDifferentValidRules) {
  gen::Gen g(37);
  const Space s = Space::sphere(2);
  const PolyBasis p(s, 3);
  const PointCloud pts = g.cluster(s, 300, 0.3);
  const Eigen::VectorXd w = g.positive_weights(300);
  Rng a = make_rng(1), b = make_rng(2), a2 = make_rng(1);
  const QuadratureRule ra = recombine(pts, w, p, a, 12);
  const QuadratureRule rb = recombine(pts, w, p, b, 12);
  const QuadratureRule ra2 = recombine(pts, w, p, a2, 12);
  EXPECT_NE(ra.atoms, rb.atoms);
  EXPECT_EQ(ra.atoms, ra2.atoms);
  EXPECT_EQ(ra.weights, ra2.weights);
  EXPECT_LE(verify_rule(rb, p, pts, w), 1e-9);
}

TEST(Recombine, RandomSignKeepsWeightsUnbiased) {
  gen::Gen g(38);
  const Space s = Space::ball(2);
  const PolyBasis p(s, 1);
  const PointCloud pts = g.cluster(s, 30, 0.3);
  const Eigen::VectorXd w = g.positive_weights(30);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(30);
  const int reps = 3000;
  for (int t = 0; t < reps; ++t) {
    Rng rng = make_rng(100, std::uint64_t(t));
    const QuadratureRule r = recombine(pts, w, p, rng, 3);
    for (std::size_t j = 0; j < r.size(); ++j)
      mean[Eigen::Index(r.atoms[j])] += r.weights[Eigen::Index(j)] / reps;
  }
  EXPECT_LT((mean - w).cwiseAbs().maxCoeff(), 0.02);
}

TEST(VerifyRule, DetectsPerturbation) {
  gen::Gen g(39);
  const Space s = Space::sphere(2);
  const PolyBasis p(s, 3);
  const PointCloud pts = g.cluster(s, 200, 0.3);
  const Eigen::VectorXd w = g.positive_weights(200);
  QuadratureRule r = recombine(pts, w, p, g.rng(), 12);
  EXPECT_LE(verify_rule(r, p, pts, w), 1e-9);
  r.weights[0] += 1e-3;
  EXPECT_GE(verify_rule(r, p, pts, w), 1e-4);
}
