#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "gnet/geometry.hpp"
#include "gnet/measures.hpp"

namespace gnet {

enum class KernelKind { ReluPow, ZonalPow, Laplace, Custom };

/// Smoothness data of a kernel class member: Hoelder exponent alpha in x,
/// global smoothness r, smoothness R away from E_x, blow-up exponent u, and
/// the tube exponent s (tube mass ~ eps^{q-s}).
struct Smoothness {
  double alpha = 1.0;
  double r = 0.0;
  double R = 0.0;
  double u = 0.0;
  double s = 0.0;
  bool singular_empty = true;
};

class KernelSpec {
 public:
  using Fn = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&,
                                  const Eigen::Ref<const Eigen::VectorXd>&)>;

  /// (x.y)_+^gamma on S^Q x S^q. For q == Q, `R` is the smoothness order
  /// away from the equator (default gamma + 2); for q < Q it is ignored.
  static KernelSpec relu_pow(double gamma, int q, int Q,
                             std::optional<double> R = std::nullopt);
  /// (1 - x.y)^gamma on S^Q x S^q.
  static KernelSpec zonal_pow(double gamma, int q, int Q);
  /// exp(-|x - y|) on B^Q x B^q.
  static KernelSpec laplace(int q, int Q);
  static KernelSpec custom(std::string name, Space x_space, Space y_space,
                           Fn fn, Smoothness smoothness,
                           int construction_degree);
  /// relu-pow, zonal-pow or laplace; throws ConfigError otherwise.
  static KernelSpec from_name(std::string_view name, double gamma, int q,
                              int Q);

  KernelKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double gamma() const { return gamma_; }
  int q() const { return y_space_.dim(); }
  int Q() const { return x_space_.dim(); }
  const Space& x_space() const { return x_space_; }
  const Space& y_space() const { return y_space_; }
  const Smoothness& smoothness() const { return smooth_; }
  bool has_singular_set() const { return !smooth_.singular_empty; }
  /// Degree bound k of the polynomial space Pi_k used per cell.
  int construction_degree() const { return degree_; }

  /// Unchecked evaluation.
  template <class A, class B>
  double operator()(const Eigen::MatrixBase<A>& x,
                    const Eigen::MatrixBase<B>& y) const {
    switch (kind_) {
      case KernelKind::ReluPow:
        return relu_value(x.dot(y));
      case KernelKind::ZonalPow:
        return zonal_value(x.dot(y));
      case KernelKind::Laplace:
        return std::exp(-(x - y).norm());
      case KernelKind::Custom:
        break;
    }
    return fn_(x, y);
  }

  double relu_value(double t) const {
    if (t <= 0.0) return 0.0;
    if (int_gamma_ == 1) return t;
    if (int_gamma_ == 2) return t * t;
    if (int_gamma_ == 3) return t * t * t;
    return std::pow(t, gamma_);
  }
  double zonal_value(double t) const {
    const double v = 1.0 - t;
    return v <= 0.0 ? 0.0 : std::pow(v, gamma_);
  }

  /// Distance in the metric of the y domain from y to E_x; nullopt when
  /// E_x is empty. Unchecked.
  std::optional<double> singular_distance_unchecked(
      const Eigen::Ref<const Eigen::VectorXd>& x,
      const Eigen::Ref<const Eigen::VectorXd>& y) const;

  std::string describe() const;

 private:
  KernelSpec(KernelKind kind, std::string name, double gamma, Space x_space,
             Space y_space, Smoothness smooth, int degree)
      : kind_(kind),
        name_(std::move(name)),
        gamma_(gamma),
        x_space_(x_space),
        y_space_(y_space),
        smooth_(smooth),
        degree_(degree) {
    if (gamma == std::floor(gamma) && gamma >= 1.0 && gamma <= 3.0)
      int_gamma_ = static_cast<int>(gamma);
  }

  KernelKind kind_;
  std::string name_;
  double gamma_ = 0.0;
  int int_gamma_ = 0;
  Space x_space_;
  Space y_space_;
  Smoothness smooth_;
  int degree_ = 1;
  Fn fn_;
};

/// Checked evaluation: x in the x domain, y in the y domain.
double kernel_eval(const KernelSpec& k,
                   const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

std::optional<double> singular_distance(
    const KernelSpec& k, const Eigen::Ref<const Eigen::VectorXd>& x,
    const Eigen::Ref<const Eigen::VectorXd>& y);

/// sum_j coeffs_j G(x_i, centers_j) for every column x_i of `xs`.
/// Each output entry is summed in a fixed order, so results do not depend
/// on `threads`.
Eigen::VectorXd kernel_sum(const KernelSpec& k, const PointCloud& centers,
                           const Eigen::VectorXd& coeffs, const PointCloud& xs,
                           int threads = 1);

/// f(x) = sum_i w_i G(x, y_i), exact for the atom measure.
double target_eval(const KernelSpec& k, const SignedAtomMeasure& tau,
                   const Eigen::Ref<const Eigen::VectorXd>& x);
inline double target_eval(const KernelSpec& k, const SignedAtomMeasure& tau,
                          const Point& x) {
  return target_eval(k, tau, Eigen::Ref<const Eigen::VectorXd>(x));
}
Eigen::VectorXd target_eval(const KernelSpec& k, const SignedAtomMeasure& tau,
                            const PointCloud& xs, int threads = 1);

/// Largest sampled |G(x,y) - G(z,y)| / rho(x,z)^alpha. Half the pairs are
/// independent uniform draws, half are close pairs at random scales.
double holder_probe(const KernelSpec& k, std::size_t n_pairs, Rng& rng);

}  // namespace gnet
