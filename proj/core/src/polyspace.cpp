#include "gnet/polyspace.hpp"

#include <cmath>

namespace gnet {

long basis_dim(int q, double k) {
  if (q < 1) throw DomainError("basis_dim: q must be >= 1");
  if (!(k >= 1.0)) throw DomainError("basis_dim: k must be >= 1");
  const long m = static_cast<long>(std::floor(k));
  long result = 1;
  for (long i = 1; i <= m; ++i) result = result * (q + i) / i;
  return result;
}

int max_degree(const Space& space, int k) {
  if (k < 1) throw DomainError("polynomial degree bound k must be >= 1");
  return space.is_sphere() ? k - 1 : k;
}

namespace {

void append_exponents(int vars, int degree, std::vector<int>& current,
                      int pos, std::vector<std::vector<int>>& out) {
  if (pos == vars - 1) {
    current[static_cast<std::size_t>(pos)] = degree;
    out.push_back(current);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[static_cast<std::size_t>(pos)] = e;
    append_exponents(vars, degree - e, current, pos + 1, out);
  }
}

}  // namespace

PolyBasis::PolyBasis(const Space& space, int k)
    : space_(space), k_(k), center_(Point::Zero(space.ambient_dim())) {
  const int top = max_degree(space, k);
  const int vars = space.span_dim();
  std::vector<int> current(static_cast<std::size_t>(vars), 0);
  for (int d = 0; d <= top; ++d) append_exponents(vars, d, current, 0, exponents_);
}

Eigen::MatrixXd PolyBasis::monomial_matrix(const PointCloud& pts) const {
  const int vars = space_.span_dim();
  const Eigen::Index n = pts.cols();
  const int top = max_degree(space_, k_);
  Eigen::MatrixXd out(nominal_size(), n);
  // powers[v][e] for the current point
  std::vector<double> powers(static_cast<std::size_t>(vars * (top + 1)));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int v = 0; v < vars; ++v) {
      const double t = (pts(v, i) - center_[v]) / scale_;
      double p = 1.0;
      for (int e = 0; e <= top; ++e) {
        powers[static_cast<std::size_t>(v * (top + 1) + e)] = p;
        p *= t;
      }
    }
    for (std::size_t r = 0; r < exponents_.size(); ++r) {
      double val = 1.0;
      for (int v = 0; v < vars; ++v) {
        const int e = exponents_[r][static_cast<std::size_t>(v)];
        if (e) val *= powers[static_cast<std::size_t>(v * (top + 1) + e)];
      }
      out(static_cast<Eigen::Index>(r), i) = val;
    }
  }
  return out;
}

Eigen::MatrixXd PolyBasis::eval_matrix(const PointCloud& pts) const {
  Eigen::MatrixXd mono = monomial_matrix(pts);
  if (!localized_) return mono;
  return transform_ * mono;
}

Eigen::VectorXd PolyBasis::eval(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  space_.require(y, "basis argument");
  PointCloud one = y;
  return eval_matrix(one).col(0);
}

PolyBasis PolyBasis::localized_to(const PointCloud& atoms,
                                  const Eigen::VectorXd& weights) const {
  if (atoms.cols() == 0) throw DomainError("localized_to: no atoms");
  if (atoms.cols() != weights.size())
    throw DomainError("localized_to: atom and weight counts differ");
  if ((weights.array() < 0.0).any())
    throw DomainError("localized_to: negative weight");
  PolyBasis out(space_, k_);
  const double total = weights.sum();
  const int vars = space_.span_dim();
  out.center_ = Point::Zero(space_.ambient_dim());
  if (total > 0.0)
    out.center_.head(vars) = atoms.topRows(vars) * weights / total;
  else
    out.center_.head(vars) = atoms.topRows(vars).rowwise().mean();
  double radius = 0.0;
  for (Eigen::Index i = 0; i < atoms.cols(); ++i)
    radius = std::max(radius,
                      (atoms.col(i).head(vars) - out.center_.head(vars)).norm());
  out.scale_ = radius > 0.0 ? radius : 1.0;

  Eigen::MatrixXd mono = out.monomial_matrix(atoms);
  const double n = static_cast<double>(atoms.cols());
  Eigen::VectorXd sw(atoms.cols());
  for (Eigen::Index i = 0; i < atoms.cols(); ++i) {
    const double w = total > 0.0 ? weights[i] / total : 1.0 / n;
    sw[i] = std::sqrt(std::max(w, 1e-3 / n));
  }
  const Eigen::MatrixXd A = mono * sw.asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * (sv.size() ? sv[0] : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > cutoff) ++rank;
  if (rank == 0) rank = 1;
  out.transform_ = sv.head(rank).cwiseInverse().asDiagonal() *
                   svd.matrixU().leftCols(rank).transpose();
  out.localized_ = true;
  return out;
}

double local_ls_error(const PolyBasis& basis, const PointCloud& atoms,
                      const Eigen::VectorXd& weights,
                      const Eigen::VectorXd& values) {
  if (atoms.cols() == 0) throw DomainError("local_ls_error: no atoms");
  if (values.size() != atoms.cols())
    throw DomainError("local_ls_error: value count differs from atom count");
  if (atoms.cols() == 1) return 0.0;
  const PolyBasis local = basis.localized_to(atoms, weights);
  const Eigen::MatrixXd B = local.eval_matrix(atoms).transpose();
  const double total = weights.sum();
  const double n = static_cast<double>(atoms.cols());
  Eigen::VectorXd sw(atoms.cols());
  for (Eigen::Index i = 0; i < atoms.cols(); ++i)
    sw[i] = std::sqrt(total > 0.0 ? weights[i] / total : 1.0 / n);
  const Eigen::VectorXd coef =
      (sw.asDiagonal() * B)
          .completeOrthogonalDecomposition()
          .solve(sw.asDiagonal() * values);
  return (B * coef - values).cwiseAbs().maxCoeff();
}

}  // namespace gnet
