#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "gnet/common.hpp"

namespace gnet {

enum class SpaceKind { SphereScaled, BallEuclid };

/// A compact metric domain with diameter 2.
///
/// `SphereScaled` is the unit sphere S^q carried by the first q+1 ambient
/// coordinates, measured with the geodesic distance rescaled by 2/pi.
/// `BallEuclid` is the closed unit ball B^q carried by the first q ambient
/// coordinates, with the Euclidean distance. Remaining ambient coordinates
/// are identically zero, which lets S^q sit inside S^Q and B^q inside B^Q.
class Space {
 public:
  static Space sphere(int q, int ambient_dim);
  static Space sphere(int q) { return sphere(q, q + 1); }
  static Space ball(int q, int ambient_dim);
  static Space ball(int q) { return ball(q, q); }

  SpaceKind kind() const { return kind_; }
  bool is_sphere() const { return kind_ == SpaceKind::SphereScaled; }
  int dim() const { return dim_; }
  int ambient_dim() const { return ambient_; }
  /// Number of leading ambient coordinates that may be nonzero.
  int span_dim() const { return is_sphere() ? dim_ + 1 : dim_; }

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& p,
                double tol = 1e-12) const;
  /// Throws DomainError naming `what` if `p` is not a point of the space.
  void require(const Eigen::Ref<const Eigen::VectorXd>& p,
               const char* what = "point") const;

  /// Unchecked metric.
  template <class A, class B>
  double distance(const Eigen::MatrixBase<A>& x,
                  const Eigen::MatrixBase<B>& y) const {
    if (is_sphere()) {
      // 2*atan2(|x-y|, |x+y|) is the angle, accurate at both ends.
      const double chord = (x - y).norm();
      const double co = (x + y).norm();
      return (4.0 / std::numbers::pi) * std::atan2(chord, co);
    }
    return (x - y).norm();
  }

  /// Uniform (normalized volume) sample.
  Point sample_uniform(Rng& rng) const;
  PointCloud sample_uniform(Rng& rng, std::size_t n) const;

  /// Lifts intrinsic span coordinates into ambient coordinates.
  Point embed(std::span<const double> span_coords) const;

  std::string describe() const;

  friend bool operator==(const Space&, const Space&) = default;

 private:
  Space(SpaceKind kind, int dim, int ambient)
      : kind_(kind), dim_(dim), ambient_(ambient) {}

  SpaceKind kind_;
  int dim_;
  int ambient_;
};

/// Checked distance: both points must lie in `space`.
double distance(const Space& space, const Eigen::Ref<const Eigen::VectorXd>& x,
                const Eigen::Ref<const Eigen::VectorXd>& y);

/// Result of mapping an affine pair (v, last) to the unit sphere.
struct RaisedPoint {
  Point point;   ///< (v, last) / |(v, last)|, a point of S^{dim v}
  double scale;  ///< |(v, last)|
};

/// Dimension raising: (v, last) / |(v, last)|.
///
/// Inputs use last = 1; weight/bias pairs use last = bias. With this map
/// (x.y + b)_+^g = sx^g * sw^g * (x'.w)_+^g exactly.
RaisedPoint raise_to_sphere(std::span<const double> v, double last);

/// Farthest-point greedy net over the columns of `cloud`.
///
/// Starts at column 0 and repeatedly adds the column farthest from the
/// current net (first index wins ties) until every column is within `eps`.
/// The returned column indices are pairwise more than `eps` apart.
std::vector<std::size_t> epsilon_net_indices(const Space& space,
                                             const PointCloud& cloud,
                                             double eps);

PointCloud epsilon_net(const Space& space, const PointCloud& cloud, double eps);

/// Net over `n_samples` uniform draws from the whole space.
PointCloud epsilon_net(const Space& space, double eps, std::size_t n_samples,
                       Rng& rng);

/// kappa * q^{3/2} * log(q); the covering constant of a q-dimensional
/// sphere or ball in its normalized metric.
double covering_constant(const Space& space, double kappa);

/// kappa * Q^2, the constant used for the evaluation domain.
double covering_constant_target(const Space& space, double kappa);

/// kappa * q^{3/2} * log(q) * eps^{-q}; requires 0 < eps <= 1 and q >= 2.
double covering_bound(const Space& space, double eps, double kappa);

/// Ratio of a greedy net size to q^{3/2} log(q) eps^{-q}, maximized over
/// `probes` uniform clouds and the given radii. A partition built with
/// kappa at least this value satisfies its cell-count bound on such clouds.
double calibrate_kappa(const Space& space, std::span<const double> eps_grid,
                       int probes, std::size_t atoms_per_probe,
                       std::uint64_t seed);

/// Precomputed calibrate_kappa values for the domains used by the presets,
/// rounded up; falls back to a short runtime calibration otherwise.
double default_partition_kappa(const Space& space);

}  // namespace gnet
