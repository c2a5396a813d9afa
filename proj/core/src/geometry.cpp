#include "gnet/geometry.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace gnet {

Space Space::sphere(int q, int ambient_dim) {
  if (q < 1) throw DomainError("sphere dimension must be >= 1");
  if (ambient_dim < q + 1)
    throw DomainError("sphere S^q needs ambient dimension >= q+1");
  return Space(SpaceKind::SphereScaled, q, ambient_dim);
}

Space Space::ball(int q, int ambient_dim) {
  if (q < 1) throw DomainError("ball dimension must be >= 1");
  if (ambient_dim < q) throw DomainError("ball B^q needs ambient dimension >= q");
  return Space(SpaceKind::BallEuclid, q, ambient_dim);
}

bool Space::contains(const Eigen::Ref<const Eigen::VectorXd>& p,
                     double tol) const {
  if (p.size() != ambient_) return false;
  if (!p.allFinite()) return false;
  const int span = span_dim();
  for (int j = span; j < ambient_; ++j)
    if (std::abs(p[j]) > tol) return false;
  const double norm = p.head(span).norm();
  if (is_sphere()) return std::abs(norm - 1.0) <= tol;
  return norm <= 1.0 + tol;
}

void Space::require(const Eigen::Ref<const Eigen::VectorXd>& p,
                    const char* what) const {
  if (!contains(p)) {
    std::ostringstream os;
    os << what << " is not a point of " << describe();
    throw DomainError(os.str());
  }
}

Point Space::sample_uniform(Rng& rng) const {
  std::normal_distribution<double> normal;
  const int span = span_dim();
  Point p = Point::Zero(ambient_);
  double norm = 0.0;
  do {
    for (int j = 0; j < span; ++j) p[j] = normal(rng);
    norm = p.head(span).norm();
  } while (norm == 0.0);
  p.head(span) /= norm;
  if (!is_sphere()) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    p.head(span) *= std::pow(unif(rng), 1.0 / dim_);
  }
  return p;
}

PointCloud Space::sample_uniform(Rng& rng, std::size_t n) const {
  PointCloud cloud(ambient_, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    cloud.col(static_cast<Eigen::Index>(i)) = sample_uniform(rng);
  return cloud;
}

Point Space::embed(std::span<const double> span_coords) const {
  if (static_cast<int>(span_coords.size()) != span_dim())
    throw DomainError("embed: wrong number of span coordinates");
  Point p = Point::Zero(ambient_);
  for (int j = 0; j < span_dim(); ++j) p[j] = span_coords[j];
  require(p, "embedded point");
  return p;
}

std::string Space::describe() const {
  std::ostringstream os;
  os << (is_sphere() ? "S^" : "B^") << dim_ << " in R^" << ambient_;
  return os.str();
}

double distance(const Space& space, const Eigen::Ref<const Eigen::VectorXd>& x,
                const Eigen::Ref<const Eigen::VectorXd>& y) {
  space.require(x, "x");
  space.require(y, "y");
  return space.distance(x, y);
}

RaisedPoint raise_to_sphere(std::span<const double> v, double last) {
  const auto n = static_cast<Eigen::Index>(v.size());
  Point p(n + 1);
  for (Eigen::Index j = 0; j < n; ++j) p[j] = v[static_cast<std::size_t>(j)];
  p[n] = last;
  if (!p.allFinite()) throw DomainError("raise_to_sphere: non-finite input");
  const double scale = p.norm();
  if (scale == 0.0)
    throw DomainError("raise_to_sphere: zero weight-bias pair");
  p /= scale;
  return {std::move(p), scale};
}

std::vector<std::size_t> epsilon_net_indices(const Space& space,
                                             const PointCloud& cloud,
                                             double eps) {
  if (!(eps > 0.0)) throw DomainError("epsilon_net: eps must be positive");
  const Eigen::Index n = cloud.cols();
  if (n == 0) throw DomainError("epsilon_net: empty region");

  std::vector<std::size_t> net;
  std::vector<double> gap(static_cast<std::size_t>(n),
                          std::numeric_limits<double>::infinity());
  Eigen::Index next = 0;
  while (true) {
    net.push_back(static_cast<std::size_t>(next));
    const auto center = cloud.col(next);
    double worst = -1.0;
    Eigen::Index worst_at = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& g = gap[static_cast<std::size_t>(i)];
      const double d = space.distance(cloud.col(i), center);
      if (d < g) g = d;
      if (g > worst) {
        worst = g;
        worst_at = i;
      }
    }
    if (worst <= eps) break;
    next = worst_at;
  }
  return net;
}

PointCloud epsilon_net(const Space& space, const PointCloud& cloud,
                       double eps) {
  const auto idx = epsilon_net_indices(space, cloud, eps);
  PointCloud net(cloud.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k)
    net.col(static_cast<Eigen::Index>(k)) =
        cloud.col(static_cast<Eigen::Index>(idx[k]));
  return net;
}

PointCloud epsilon_net(const Space& space, double eps, std::size_t n_samples,
                       Rng& rng) {
  if (n_samples == 0) throw DomainError("epsilon_net: empty region");
  return epsilon_net(space, space.sample_uniform(rng, n_samples), eps);
}

double covering_constant(const Space& space, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  const double q = space.dim();
  if (space.dim() < 2)
    throw DomainError("covering constant needs dimension q >= 2");
  return kappa * std::pow(q, 1.5) * std::log(q);
}

double covering_constant_target(const Space& space, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  const double Q = space.dim();
  return kappa * Q * Q;
}

double covering_bound(const Space& space, double eps, double kappa) {
  if (!(eps > 0.0) || eps > 1.0)
    throw DomainError("covering_bound: eps must lie in (0, 1]");
  return covering_constant(space, kappa) * std::pow(eps, -space.dim());
}

double calibrate_kappa(const Space& space, std::span<const double> eps_grid,
                       int probes, std::size_t atoms_per_probe,
                       std::uint64_t seed) {
  const double unit = covering_constant(space, 1.0);
  double kappa = 0.0;
  for (int p = 0; p < probes; ++p) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(p));
    const PointCloud cloud = space.sample_uniform(rng, atoms_per_probe);
    for (double eps : eps_grid) {
      const double size =
          static_cast<double>(epsilon_net_indices(space, cloud, eps).size());
      kappa = std::max(kappa, size / (unit * std::pow(eps, -space.dim())));
    }
  }
  return kappa;
}

double default_partition_kappa(const Space& space) {
  struct Entry {
    SpaceKind kind;
    int q;
    double kappa;
  };
  static constexpr Entry kTable[] = {
      {SpaceKind::SphereScaled, 2, 3.0},
      {SpaceKind::SphereScaled, 3, 1.25},
      {SpaceKind::SphereScaled, 4, 1.0},
      {SpaceKind::BallEuclid, 2, 3.0},
      {SpaceKind::BallEuclid, 3, 1.75},
  };
  for (const auto& e : kTable)
    if (e.kind == space.kind() && e.q == space.dim()) return e.kappa;
  // Measured maxima sit at large radii, where the greedy net is coarse.
  const double grid[] = {1.0, 0.9, 0.75, 0.6, 0.5};
  const double measured = calibrate_kappa(space, grid, 4, 20000, 1);
  return std::max(1.0, std::ceil(4.0 * 1.2 * measured) / 4.0);
}

}  // namespace gnet
