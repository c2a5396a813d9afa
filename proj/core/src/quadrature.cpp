#include "gnet/quadrature.hpp"

#include <algorithm>
#include <numeric>

#include "gnet/partition.hpp"

namespace gnet {

namespace {

Eigen::VectorXd normalize(const Eigen::VectorXd& w) {
  if ((w.array() < 0.0).any())
    throw DomainError("quadrature: negative cell weight");
  const double total = w.sum();
  if (!(total > 0.0)) throw DomainError("quadrature: zero-mass cell");
  return w / total;
}

/// Rows: constant function, then the active basis.
Eigen::MatrixXd moment_matrix(const PolyBasis& local, const PointCloud& pts) {
  const Eigen::MatrixXd phi = local.eval_matrix(pts);
  Eigen::MatrixXd A(phi.rows() + 1, pts.cols());
  A.row(0).setOnes();
  A.bottomRows(phi.rows()) = phi;
  return A;
}

Eigen::MatrixXd null_basis(const Eigen::MatrixXd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-12 * (sv.size() ? std::max(sv[0], 1.0) : 1.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > cutoff) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

/// Drops atom c from the active set and restricts the null basis to
/// directions vanishing on it.
void remove_atom(Eigen::MatrixXd& N, std::vector<Eigen::Index>& active,
                 std::vector<double>& aw, std::size_t c) {
  const auto r = static_cast<Eigen::Index>(c);
  if (N.cols() > 0) {
    Eigen::Index pivot = 0;
    N.row(r).cwiseAbs().maxCoeff(&pivot);
    const double pv = N(r, pivot);
    if (pv != 0.0) {
      const Eigen::VectorXd pcol = N.col(pivot);
      for (Eigen::Index j = 0; j < N.cols(); ++j)
        if (j != pivot) N.col(j) -= pcol * (N(r, j) / pv);
      const Eigen::Index last = N.cols() - 1;
      if (pivot != last) N.col(pivot) = N.col(last);
      N.conservativeResize(Eigen::NoChange, last);
    }
  }
  const std::size_t back = active.size() - 1;
  active[c] = active[back];
  aw[c] = aw[back];
  if (c != back) N.row(r) = N.row(N.rows() - 1);
  active.pop_back();
  aw.pop_back();
  N.conservativeResize(N.rows() - 1, Eigen::NoChange);
}

struct Reduction {
  std::vector<Eigen::Index> support;
  Eigen::VectorXd weights;
};

Reduction reduce(const Eigen::MatrixXd& A, const Eigen::VectorXd& w,
                 Rng& rng) {
  const Eigen::Index n = A.cols();
  const Eigen::Index m = A.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<Eigen::Index> active;
  std::vector<double> aw;
  std::size_t next = 0;
  const std::size_t batch = static_cast<std::size_t>(2 * m);

  while (true) {
    while (active.size() < batch && next < order.size()) {
      const Eigen::Index i = order[next++];
      if (w[i] > 0.0) {
        active.push_back(i);
        aw.push_back(w[i]);
      }
    }
    Eigen::MatrixXd As(m, static_cast<Eigen::Index>(active.size()));
    for (std::size_t c = 0; c < active.size(); ++c)
      As.col(static_cast<Eigen::Index>(c)) = A.col(active[c]);
    Eigen::MatrixXd N = null_basis(As);
    if (N.cols() == 0) {
      if (next >= order.size()) break;
      continue;
    }
    bool progress = false;
    while (N.cols() > 0) {
      Eigen::VectorXd v;
      if (N.cols() == 1) {
        v = N.col(0);
      } else {
        Eigen::VectorXd g(N.cols());
        for (Eigen::Index j = 0; j < g.size(); ++j) g[j] = normal(rng);
        v = N * g;
      }
      const double vmax = v.cwiseAbs().maxCoeff();
      if (!(vmax > 0.0)) break;
      v /= vmax;
      double t_plus = std::numeric_limits<double>::infinity();
      double t_minus = std::numeric_limits<double>::infinity();
      Eigen::Index at_plus = -1;
      Eigen::Index at_minus = -1;
      for (Eigen::Index r = 0; r < v.size(); ++r) {
        const double wr = aw[static_cast<std::size_t>(r)];
        if (v[r] < -1e-14 && wr / -v[r] < t_plus) {
          t_plus = wr / -v[r];
          at_plus = r;
        } else if (v[r] > 1e-14 && wr / v[r] < t_minus) {
          t_minus = wr / v[r];
          at_minus = r;
        }
      }
      if (at_plus < 0 && at_minus < 0) break;
      double t;
      Eigen::Index zeroed;
      if (at_minus < 0 ||
          (at_plus >= 0 && unif(rng) * (t_plus + t_minus) < t_minus)) {
        t = t_plus;
        zeroed = at_plus;
      } else {
        t = -t_minus;
        zeroed = at_minus;
      }
      for (Eigen::Index r = 0; r < v.size(); ++r) {
        auto& wr = aw[static_cast<std::size_t>(r)];
        wr = std::max(0.0, wr + t * v[r]);
      }
      aw[static_cast<std::size_t>(zeroed)] = 0.0;
      progress = true;
      for (std::size_t c = active.size(); c-- > 0;)
        if (aw[c] <= 0.0) remove_atom(N, active, aw, c);
    }
    if (!progress)
      throw QuadratureError("recombination stalled on a degenerate null space");
    if (next >= order.size()) {
      // Final pass: the null space may still be nonempty after rounding.
      Eigen::MatrixXd Af(m, static_cast<Eigen::Index>(active.size()));
      for (std::size_t c = 0; c < active.size(); ++c)
        Af.col(static_cast<Eigen::Index>(c)) = A.col(active[c]);
      if (null_basis(Af).cols() == 0) break;
    }
  }

  Reduction out;
  std::vector<std::size_t> perm(active.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t a, std::size_t b) { return active[a] < active[b]; });
  out.weights.resize(static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < perm.size(); ++k) {
    out.support.push_back(active[perm[k]]);
    out.weights[static_cast<Eigen::Index>(k)] = aw[perm[k]];
  }
  return out;
}

double moment_gap(const Eigen::MatrixXd& A, const Eigen::VectorXd& target,
                  const std::vector<Eigen::Index>& support,
                  const Eigen::VectorXd& weights) {
  Eigen::VectorXd got = Eigen::VectorXd::Zero(A.rows());
  for (std::size_t k = 0; k < support.size(); ++k)
    got += weights[static_cast<Eigen::Index>(k)] * A.col(support[k]);
  return (got - target).cwiseAbs().maxCoeff();
}

void polish(const Eigen::MatrixXd& A, const Eigen::VectorXd& target,
            Reduction& red) {
  const auto s = static_cast<Eigen::Index>(red.support.size());
  Eigen::MatrixXd As(A.rows(), s);
  for (Eigen::Index c = 0; c < s; ++c)
    As.col(c) = A.col(red.support[static_cast<std::size_t>(c)]);
  const Eigen::VectorXd x = As.colPivHouseholderQr().solve(target);
  if (!x.allFinite() || (x.array() < 0.0).any()) return;
  if (moment_gap(A, target, red.support, x) <
      moment_gap(A, target, red.support, red.weights))
    red.weights = x;
}

}  // namespace

Eigen::VectorXd cell_moments(const PolyBasis& basis, const PointCloud& atoms,
                             const Eigen::VectorXd& weights) {
  if (atoms.cols() == 0) throw DomainError("cell_moments: empty cell");
  const Eigen::VectorXd w = normalize(weights);
  return basis.eval_matrix(atoms) * w;
}

Eigen::VectorXd cell_moments(const PolyBasis& basis, const Cell& cell,
                             const ProbabilityAtomMeasure& measure) {
  const auto [pts, w] = cell_cloud(cell, measure);
  return cell_moments(basis, pts, w);
}

QuadratureRule recombine(const PointCloud& atoms, const Eigen::VectorXd& weights,
                         const PolyBasis& basis, Rng& rng,
                         std::size_t identity_max, double tol) {
  if (atoms.cols() == 0) throw DomainError("recombine: empty cell");
  if (atoms.cols() != weights.size())
    throw DomainError("recombine: atom and weight counts differ");
  const Eigen::VectorXd w = normalize(weights);
  QuadratureRule rule;
  if (static_cast<std::size_t>(atoms.cols()) <= identity_max) {
    rule.atoms.resize(static_cast<std::size_t>(atoms.cols()));
    std::iota(rule.atoms.begin(), rule.atoms.end(), std::size_t{0});
    rule.points = atoms;
    rule.weights = w;
    rule.residual = 0.0;
    return rule;
  }
  const PolyBasis local = basis.localized_to(atoms, w);
  const Eigen::MatrixXd A = moment_matrix(local, atoms);
  const Eigen::VectorXd target = A * w;

  for (int attempt = 0; attempt < 2; ++attempt) {
    Reduction red = reduce(A, w, rng);
    polish(A, target, red);
    red.weights /= red.weights.sum();
    const double gap = moment_gap(A, target, red.support, red.weights);
    if (gap <= tol) {
      rule.atoms.assign(red.support.begin(), red.support.end());
      rule.points.resize(atoms.rows(), static_cast<Eigen::Index>(red.support.size()));
      for (std::size_t k = 0; k < red.support.size(); ++k)
        rule.points.col(static_cast<Eigen::Index>(k)) = atoms.col(red.support[k]);
      rule.weights = red.weights;
      rule.residual = gap;
      return rule;
    }
  }
  throw QuadratureError("recombination could not match the cell moments");
}

double verify_rule(const QuadratureRule& rule, const PolyBasis& basis,
                   const PointCloud& atoms, const Eigen::VectorXd& weights) {
  const Eigen::VectorXd w = normalize(weights);
  const PolyBasis local = basis.localized_to(atoms, w);
  const Eigen::VectorXd want = moment_matrix(local, atoms) * w;
  const Eigen::VectorXd got = moment_matrix(local, rule.points) * rule.weights;
  return (got - want).cwiseAbs().maxCoeff();
}

}  // namespace gnet
