#include "gnet/kernels.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include "parallel.hpp"

namespace gnet {

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw DomainError("gamma must be positive");
}

void check_dims(int q, int Q) {
  if (q < 1 || Q < q) throw DomainError("kernel dimensions need 1 <= q <= Q");
}

}  // namespace

KernelSpec KernelSpec::relu_pow(double gamma, int q, int Q,
                                std::optional<double> R) {
  check_gamma(gamma);
  check_dims(q, Q);
  Smoothness sm;
  sm.alpha = 1.0;
  sm.r = gamma;
  if (q == Q) {
    sm.R = R.value_or(gamma + 2.0);
    if (sm.R < gamma) throw DomainError("relu-pow needs R >= gamma");
    sm.u = sm.R - gamma;
    sm.s = q - 1;
    sm.singular_empty = false;
  } else {
    sm.R = gamma;
    sm.u = 0.0;
    sm.s = q;
    sm.singular_empty = true;
  }
  const int degree = static_cast<int>(std::floor(gamma)) + 1;
  return KernelSpec(KernelKind::ReluPow, "relu-pow", gamma,
                    Space::sphere(Q, Q + 1), Space::sphere(q, Q + 1), sm,
                    degree);
}

KernelSpec KernelSpec::zonal_pow(double gamma, int q, int Q) {
  check_gamma(gamma);
  check_dims(q, Q);
  Smoothness sm;
  sm.alpha = 1.0;
  sm.r = 2.0 * gamma;
  sm.R = 2.0 * gamma;
  sm.u = 0.0;
  sm.s = 0.0;
  sm.singular_empty = false;
  const int degree = std::max(1, static_cast<int>(std::floor(2.0 * gamma)));
  return KernelSpec(KernelKind::ZonalPow, "zonal-pow", gamma,
                    Space::sphere(Q, Q + 1), Space::sphere(q, Q + 1), sm,
                    degree);
}

KernelSpec KernelSpec::laplace(int q, int Q) {
  check_dims(q, Q);
  Smoothness sm;
  sm.alpha = 1.0;
  sm.r = 1.0;
  sm.R = 1.0;
  sm.u = 0.0;
  sm.s = 0.0;
  sm.singular_empty = false;
  return KernelSpec(KernelKind::Laplace, "laplace", 0.0, Space::ball(Q, Q),
                    Space::ball(q, Q), sm, 1);
}

KernelSpec KernelSpec::custom(std::string name, Space x_space, Space y_space,
                              Fn fn, Smoothness smoothness,
                              int construction_degree) {
  if (!fn) throw ConfigError("custom kernel needs a function");
  if (x_space.ambient_dim() != y_space.ambient_dim())
    throw DomainError("custom kernel domains need equal ambient dimension");
  if (construction_degree < 1)
    throw DomainError("construction degree must be >= 1");
  smoothness.singular_empty = true;
  KernelSpec k(KernelKind::Custom, std::move(name), 0.0, x_space, y_space,
               smoothness, construction_degree);
  k.fn_ = std::move(fn);
  return k;
}

KernelSpec KernelSpec::from_name(std::string_view name, double gamma, int q,
                                 int Q) {
  if (name == "relu-pow") return relu_pow(gamma, q, Q);
  if (name == "zonal-pow") return zonal_pow(gamma, q, Q);
  if (name == "laplace") return laplace(q, Q);
  throw ConfigError("unknown kernel '" + std::string(name) +
                    "' (expected relu-pow, zonal-pow or laplace)");
}

std::optional<double> KernelSpec::singular_distance_unchecked(
    const Eigen::Ref<const Eigen::VectorXd>& x,
    const Eigen::Ref<const Eigen::VectorXd>& y) const {
  if (smooth_.singular_empty) return std::nullopt;
  switch (kind_) {
    case KernelKind::ReluPow: {
      const double t = std::clamp(x.dot(y), -1.0, 1.0);
      return (2.0 / std::numbers::pi) * std::abs(std::asin(t));
    }
    case KernelKind::ZonalPow:
      return x_space_.distance(x, y);
    case KernelKind::Laplace:
      return (x - y).norm();
    case KernelKind::Custom:
      break;
  }
  return std::nullopt;
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  os << name_;
  if (kind_ == KernelKind::ReluPow || kind_ == KernelKind::ZonalPow)
    os << " gamma=" << gamma_;
  os << " on " << x_space_.describe() << " x " << y_space_.describe();
  return os.str();
}

double kernel_eval(const KernelSpec& k,
                   const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
  k.x_space().require(x, "x");
  k.y_space().require(y, "y");
  return k(x, y);
}

std::optional<double> singular_distance(
    const KernelSpec& k, const Eigen::Ref<const Eigen::VectorXd>& x,
    const Eigen::Ref<const Eigen::VectorXd>& y) {
  k.x_space().require(x, "x");
  k.y_space().require(y, "y");
  return k.singular_distance_unchecked(x, y);
}

namespace {

constexpr Eigen::Index kPointChunk = 64;
constexpr Eigen::Index kCenterBlock = 2048;

void sum_chunk(const KernelSpec& k, const PointCloud& centers,
               const Eigen::VectorXd& coeffs, const PointCloud& xs,
               Eigen::Index i0, Eigen::Index m, Eigen::VectorXd& out) {
  const Eigen::Index n = centers.cols();
  const bool dot_kernel =
      k.kind() == KernelKind::ReluPow || k.kind() == KernelKind::ZonalPow;
  if (!dot_kernel) {
    for (Eigen::Index i = i0; i < i0 + m; ++i) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        acc += coeffs[j] * k(xs.col(i), centers.col(j));
      out[i] = acc;
    }
    return;
  }
  Eigen::MatrixXd dots;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
  for (Eigen::Index j0 = 0; j0 < n; j0 += kCenterBlock) {
    const Eigen::Index b = std::min(kCenterBlock, n - j0);
    dots.noalias() =
        centers.middleCols(j0, b).transpose() * xs.middleCols(i0, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      double s = 0.0;
      if (k.kind() == KernelKind::ReluPow) {
        for (Eigen::Index j = 0; j < b; ++j)
          s += coeffs[j0 + j] * k.relu_value(dots(j, i));
      } else {
        for (Eigen::Index j = 0; j < b; ++j)
          s += coeffs[j0 + j] * k.zonal_value(dots(j, i));
      }
      acc[i] += s;
    }
  }
  out.segment(i0, m) = acc;
}

}  // namespace

Eigen::VectorXd kernel_sum(const KernelSpec& k, const PointCloud& centers,
                           const Eigen::VectorXd& coeffs, const PointCloud& xs,
                           int threads) {
  if (centers.cols() != coeffs.size())
    throw DomainError("kernel_sum: center and coefficient counts differ");
  if (centers.rows() != k.y_space().ambient_dim() ||
      xs.rows() != k.x_space().ambient_dim())
    throw DomainError("kernel_sum: wrong ambient dimension");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(xs.cols());
  const Eigen::Index chunks = (xs.cols() + kPointChunk - 1) / kPointChunk;
  detail::parallel_for(static_cast<std::size_t>(chunks), threads,
                       [&](std::size_t c) {
                         const Eigen::Index i0 =
                             static_cast<Eigen::Index>(c) * kPointChunk;
                         const Eigen::Index m =
                             std::min(kPointChunk, xs.cols() - i0);
                         sum_chunk(k, centers, coeffs, xs, i0, m, out);
                       });
  return out;
}

double target_eval(const KernelSpec& k, const SignedAtomMeasure& tau,
                   const Eigen::Ref<const Eigen::VectorXd>& x) {
  k.x_space().require(x, "x");
  if (!(tau.space() == k.y_space()))
    throw DomainError("target_eval: measure does not live on the y domain");
  double acc = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i)
    acc += tau.weight(i) * k(x, tau.point(i));
  return acc;
}

Eigen::VectorXd target_eval(const KernelSpec& k, const SignedAtomMeasure& tau,
                            const PointCloud& xs, int threads) {
  if (!(tau.space() == k.y_space()))
    throw DomainError("target_eval: measure does not live on the y domain");
  for (Eigen::Index i = 0; i < xs.cols(); ++i)
    k.x_space().require(xs.col(i), "x");
  return kernel_sum(k, tau.points(), tau.weights(), xs, threads);
}

double holder_probe(const KernelSpec& k, std::size_t n_pairs, Rng& rng) {
  if (n_pairs == 0) throw DomainError("holder_probe: n_pairs must be >= 1");
  const Space& X = k.x_space();
  const double alpha = k.smoothness().alpha;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal;
  double best = 0.0;
  for (std::size_t p = 0; p < n_pairs; ++p) {
    const Point x = X.sample_uniform(rng);
    Point z;
    if (p % 2 == 0) {
      z = X.sample_uniform(rng);
    } else {
      const double scale = std::pow(10.0, -1.0 - 3.0 * unif(rng));
      z = x;
      for (int j = 0; j < X.span_dim(); ++j) z[j] += scale * normal(rng);
      const double nrm = z.head(X.span_dim()).norm();
      if (X.is_sphere())
        z.head(X.span_dim()) /= nrm;
      else if (nrm > 1.0)
        z.head(X.span_dim()) /= nrm;
    }
    const double d = X.distance(x, z);
    if (d <= 0.0) continue;
    const Point y = k.y_space().sample_uniform(rng);
    best = std::max(best, std::abs(k(x, y) - k(z, y)) / std::pow(d, alpha));
  }
  return best;
}

}  // namespace gnet
