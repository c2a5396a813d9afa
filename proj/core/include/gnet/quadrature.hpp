#pragma once

#include <cstddef>
#include <vector>

#include "gnet/measures.hpp"
#include "gnet/polyspace.hpp"

namespace gnet {

struct Cell;

/// Probability measure on a few atoms of a cell that matches the cell's
/// moments against a polynomial space.
struct QuadratureRule {
  std::vector<std::size_t> atoms;  ///< positions within the cell's atom list
  PointCloud points;
  Eigen::VectorXd weights;
  double residual = 0.0;

  std::size_t size() const { return atoms.size(); }
};

inline constexpr double kQuadratureTol = 1e-9;

/// Moments of the normalized weighted cloud against the active basis.
Eigen::VectorXd cell_moments(const PolyBasis& basis, const PointCloud& atoms,
                             const Eigen::VectorXd& weights);
/// Moments of the normalized restriction of `measure` to `cell`; throws
/// DomainError on a zero-mass cell.
Eigen::VectorXd cell_moments(const PolyBasis& basis, const Cell& cell,
                             const ProbabilityAtomMeasure& measure);

/// Caratheodory recombination of the normalized cloud (atoms, weights) to
/// at most rank + 1 atoms with the same moments against `basis` (which is
/// localized to the cell internally). Atoms are visited in a shuffled order
/// and each elimination step moves along a random null-space direction with
/// a sign drawn so the expected weights are unchanged. Clouds with at most
/// `identity_max` atoms are returned unchanged. Throws QuadratureError if
/// the residual stays above `tol`.
QuadratureRule recombine(const PointCloud& atoms, const Eigen::VectorXd& weights,
                         const PolyBasis& basis, Rng& rng,
                         std::size_t identity_max, double tol = kQuadratureTol);

/// Max moment gap between the rule and the normalized cloud, measured in
/// the basis localized to the cloud.
double verify_rule(const QuadratureRule& rule, const PolyBasis& basis,
                   const PointCloud& atoms, const Eigen::VectorXd& weights);

}  // namespace gnet
