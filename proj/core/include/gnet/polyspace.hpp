#pragma once

#include <vector>

#include "gnet/geometry.hpp"

namespace gnet {

/// binom(q + floor(k), floor(k)), the dimension bound for Pi_k used in all
/// constants. Throws DomainError for q < 1 or k < 1.
long basis_dim(int q, double k);

/// Maximal total degree of the monomials spanning Pi_k on `space`:
/// k - 1 on spheres (polynomials of degree < k), k on balls (Pi_1 affine).
int max_degree(const Space& space, int k);

/// Polynomial space Pi_k on a Space, spanned by monomials in the span
/// coordinates. A localized basis evaluates the monomials at
/// (y - center) / scale and applies an orthogonalizing transform computed
/// from a weighted atom cloud, dropping directions with singular value below
/// 1e-10 of the largest.
class PolyBasis {
 public:
  PolyBasis(const Space& space, int k);

  const Space& space() const { return space_; }
  int degree_bound() const { return k_; }
  int nominal_size() const { return static_cast<int>(exponents_.size()); }
  int active_size() const {
    return localized_ ? static_cast<int>(transform_.rows()) : nominal_size();
  }
  bool localized() const { return localized_; }
  const std::vector<std::vector<int>>& exponents() const { return exponents_; }

  /// Orthogonalized copy for the given cell atoms and nonnegative weights.
  PolyBasis localized_to(const PointCloud& atoms,
                         const Eigen::VectorXd& weights) const;

  /// Active basis values at y; throws DomainError if y is off the space.
  Eigen::VectorXd eval(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  /// Active basis values at every column (active_size x n), unchecked.
  Eigen::MatrixXd eval_matrix(const PointCloud& pts) const;
  /// Raw monomial values at the local coordinates (nominal_size x n).
  Eigen::MatrixXd monomial_matrix(const PointCloud& pts) const;

 private:
  Space space_;
  int k_;
  std::vector<std::vector<int>> exponents_;
  bool localized_ = false;
  Point center_;
  double scale_ = 1.0;
  Eigen::MatrixXd transform_;
};

/// Max absolute residual over the atoms of the weighted least-squares fit of
/// `values` from the basis (localized to the atoms). Returns 0 for a single
/// atom.
double local_ls_error(const PolyBasis& basis, const PointCloud& atoms,
                      const Eigen::VectorXd& weights,
                      const Eigen::VectorXd& values);

}  // namespace gnet
