#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gnet/geometry.hpp"

namespace gnet {

class KernelSpec;

/// Finite signed atom cloud standing in for a measure on a Space.
class SignedAtomMeasure {
 public:
  /// Validates that every column lies in `space` and that the total
  /// variation is finite and positive.
  SignedAtomMeasure(Space space, PointCloud points, Eigen::VectorXd weights);

  const Space& space() const { return space_; }
  const PointCloud& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  std::size_t size() const { return static_cast<std::size_t>(weights_.size()); }
  auto point(std::size_t i) const {
    return points_.col(static_cast<Eigen::Index>(i));
  }
  double weight(std::size_t i) const {
    return weights_[static_cast<Eigen::Index>(i)];
  }

  double total_variation() const { return tv_; }
  /// Indices of atoms with nonzero weight.
  std::vector<std::size_t> support() const;

 private:
  Space space_;
  PointCloud points_;
  Eigen::VectorXd weights_;
  double tv_ = 0.0;
};

/// Nonnegative atom measure with unit mass.
class ProbabilityAtomMeasure {
 public:
  /// Weights must be nonnegative and sum to 1 within 1e-12.
  explicit ProbabilityAtomMeasure(SignedAtomMeasure m);
  /// Rescales nonnegative weights to unit mass.
  static ProbabilityAtomMeasure normalized(Space space, PointCloud points,
                                           Eigen::VectorXd weights);

  const SignedAtomMeasure& signed_measure() const { return m_; }
  const Space& space() const { return m_.space(); }
  const PointCloud& points() const { return m_.points(); }
  const Eigen::VectorXd& weights() const { return m_.weights(); }
  std::size_t size() const { return m_.size(); }
  auto point(std::size_t i) const { return m_.point(i); }
  double weight(std::size_t i) const { return m_.weight(i); }
  std::vector<std::size_t> support() const { return m_.support(); }

 private:
  SignedAtomMeasure m_;
};

double total_variation(const SignedAtomMeasure& m);

/// tau = mass_pos * positive - mass_neg * negative, atomwise.
struct HahnSplit {
  std::optional<ProbabilityAtomMeasure> positive;
  std::optional<ProbabilityAtomMeasure> negative;
  double mass_pos = 0.0;
  double mass_neg = 0.0;
  /// Original atom index of each atom of `positive` / `negative`.
  std::vector<std::size_t> pos_index;
  std::vector<std::size_t> neg_index;
};

HahnSplit hahn_split(const SignedAtomMeasure& m);

/// |tau| of the closed ball B(center, radius).
double ball_mass(const SignedAtomMeasure& m,
                 const Eigen::Ref<const Eigen::VectorXd>& center,
                 double radius);

/// |tau| of the eps-tube around the kernel's singular set E_x; 0 if empty.
double tube_mass(const SignedAtomMeasure& m, const KernelSpec& kernel,
                 const Eigen::Ref<const Eigen::VectorXd>& x, double eps);

/// Density descriptor for synthetic measures.
struct SurrogateSpec {
  enum class Kind { Uniform, Cap, Negative, Signed, Custom };
  Kind kind = Kind::Uniform;
  /// Cap: fraction of draws placed in the cap around `cap_center`
  /// (default: first basis vector), cap radius in the space metric.
  double cap_fraction = 0.95;
  double cap_radius = 0.5;
  std::optional<Point> cap_center;
  /// Custom: signed density against the uniform law.
  std::function<double(const Point&)> density;

  static SurrogateSpec uniform() { return {}; }
  static SurrogateSpec cap(double radius = 0.5, double fraction = 0.95);
  static SurrogateSpec negative();
  /// Density 3*y_0, a measure with both signs.
  static SurrogateSpec signed_linear();
  static SurrogateSpec custom(std::function<double(const Point&)> density);
  /// Names: uniform, cap, negative, signed. Throws ConfigError otherwise.
  static SurrogateSpec from_name(std::string_view name);
};

SignedAtomMeasure make_surrogate(const SurrogateSpec& spec, std::size_t n_atoms,
                                 const Space& space, Rng& rng);

/// One atom per line: `w c_1 ... c_ambient`, shortest round-trip decimals.
void write_measure(std::ostream& os, const SignedAtomMeasure& m);
/// Inverse of write_measure; '#' lines and blank lines are skipped.
SignedAtomMeasure read_measure(std::istream& is, const Space& space);

void save_measure(const std::string& path, const SignedAtomMeasure& m);
SignedAtomMeasure load_measure(const std::string& path, const Space& space);

}  // namespace gnet
