#include "gnet/measures.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gnet/kernels.hpp"
#include "gnet/text_io.hpp"

namespace gnet {

SignedAtomMeasure::SignedAtomMeasure(Space space, PointCloud points,
                                     Eigen::VectorXd weights)
    : space_(space), points_(std::move(points)), weights_(std::move(weights)) {
  if (weights_.size() == 0) throw DomainError("measure has no atoms");
  if (points_.cols() != weights_.size())
    throw DomainError("measure: point and weight counts differ");
  if (points_.rows() != space_.ambient_dim())
    throw DomainError("measure: points have the wrong ambient dimension");
  if (!weights_.allFinite()) throw DomainError("measure: non-finite weight");
  for (Eigen::Index i = 0; i < points_.cols(); ++i)
    space_.require(points_.col(i), "atom");
  tv_ = weights_.cwiseAbs().sum();
  if (!(tv_ > 0.0) || !std::isfinite(tv_))
    throw DomainError("measure: total variation must be finite and positive");
}

std::vector<std::size_t> SignedAtomMeasure::support() const {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < weights_.size(); ++i)
    if (weights_[i] != 0.0) out.push_back(static_cast<std::size_t>(i));
  return out;
}

ProbabilityAtomMeasure::ProbabilityAtomMeasure(SignedAtomMeasure m)
    : m_(std::move(m)) {
  if ((m_.weights().array() < 0.0).any())
    throw DomainError("probability measure has a negative weight");
  const double slack = 1e-12 + static_cast<double>(m_.size()) *
                                   std::numeric_limits<double>::epsilon();
  if (std::abs(m_.weights().sum() - 1.0) > slack)
    throw DomainError("probability measure weights do not sum to 1");
}

ProbabilityAtomMeasure ProbabilityAtomMeasure::normalized(
    Space space, PointCloud points, Eigen::VectorXd weights) {
  if ((weights.array() < 0.0).any())
    throw DomainError("probability measure has a negative weight");
  const double total = weights.sum();
  if (!(total > 0.0)) throw DomainError("probability measure has zero mass");
  weights /= total;
  return ProbabilityAtomMeasure(
      SignedAtomMeasure(space, std::move(points), std::move(weights)));
}

double total_variation(const SignedAtomMeasure& m) {
  return m.total_variation();
}

namespace {

ProbabilityAtomMeasure sub_measure(const SignedAtomMeasure& m,
                                   const std::vector<std::size_t>& idx,
                                   double sign) {
  PointCloud pts(m.points().rows(), static_cast<Eigen::Index>(idx.size()));
  Eigen::VectorXd w(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    pts.col(kk) = m.point(idx[k]);
    w[kk] = sign * m.weight(idx[k]);
  }
  return ProbabilityAtomMeasure::normalized(m.space(), std::move(pts),
                                            std::move(w));
}

}  // namespace

HahnSplit hahn_split(const SignedAtomMeasure& m) {
  HahnSplit out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double w = m.weight(i);
    if (w > 0.0)
      out.pos_index.push_back(i);
    else if (w < 0.0)
      out.neg_index.push_back(i);
  }
  out.mass_pos = m.weights().cwiseMax(0.0).sum();
  out.mass_neg = (-m.weights()).cwiseMax(0.0).sum();
  if (!out.pos_index.empty())
    out.positive = sub_measure(m, out.pos_index, 1.0);
  if (!out.neg_index.empty())
    out.negative = sub_measure(m, out.neg_index, -1.0);
  return out;
}

double ball_mass(const SignedAtomMeasure& m,
                 const Eigen::Ref<const Eigen::VectorXd>& center,
                 double radius) {
  if (!(radius >= 0.0)) throw DomainError("ball_mass: negative radius");
  m.space().require(center, "ball center");
  double mass = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m.space().distance(m.point(i), center) <= radius)
      mass += std::abs(m.weight(i));
  return mass;
}

double tube_mass(const SignedAtomMeasure& m, const KernelSpec& kernel,
                 const Eigen::Ref<const Eigen::VectorXd>& x, double eps) {
  kernel.x_space().require(x, "x");
  if (!kernel.has_singular_set()) return 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto d = kernel.singular_distance_unchecked(x, m.point(i));
    if (d && *d <= eps) mass += std::abs(m.weight(i));
  }
  return mass;
}

SurrogateSpec SurrogateSpec::cap(double radius, double fraction) {
  if (!(radius > 0.0)) throw ConfigError("cap radius must be positive");
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw ConfigError("cap fraction must lie in [0, 1]");
  SurrogateSpec s;
  s.kind = Kind::Cap;
  s.cap_radius = radius;
  s.cap_fraction = fraction;
  return s;
}

SurrogateSpec SurrogateSpec::negative() {
  SurrogateSpec s;
  s.kind = Kind::Negative;
  return s;
}

SurrogateSpec SurrogateSpec::signed_linear() {
  SurrogateSpec s;
  s.kind = Kind::Signed;
  return s;
}

SurrogateSpec SurrogateSpec::custom(std::function<double(const Point&)> f) {
  if (!f) throw ConfigError("custom surrogate needs a density function");
  SurrogateSpec s;
  s.kind = Kind::Custom;
  s.density = std::move(f);
  return s;
}

SurrogateSpec SurrogateSpec::from_name(std::string_view name) {
  if (name == "uniform") return uniform();
  if (name == "cap") return cap();
  if (name == "negative") return negative();
  if (name == "signed") return signed_linear();
  throw ConfigError("unknown surrogate '" + std::string(name) +
                    "' (expected uniform, cap, negative or signed)");
}

SignedAtomMeasure make_surrogate(const SurrogateSpec& spec, std::size_t n_atoms,
                                 const Space& space, Rng& rng) {
  if (n_atoms == 0) throw DomainError("make_surrogate: n_atoms must be >= 1");
  const auto n = static_cast<Eigen::Index>(n_atoms);
  PointCloud pts(space.ambient_dim(), n);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));

  switch (spec.kind) {
    case SurrogateSpec::Kind::Uniform:
    case SurrogateSpec::Kind::Negative:
    case SurrogateSpec::Kind::Signed:
    case SurrogateSpec::Kind::Custom:
      pts = space.sample_uniform(rng, n_atoms);
      break;
    case SurrogateSpec::Kind::Cap: {
      Point c = Point::Zero(space.ambient_dim());
      if (spec.cap_center) {
        c = *spec.cap_center;
        space.require(c, "cap center");
      } else if (space.is_sphere()) {
        c[0] = 1.0;
      }
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (Eigen::Index i = 0; i < n; ++i) {
        Point p = space.sample_uniform(rng);
        if (unif(rng) < spec.cap_fraction)
          while (space.distance(p, c) > spec.cap_radius)
            p = space.sample_uniform(rng);
        pts.col(i) = p;
      }
      break;
    }
  }

  if (spec.kind == SurrogateSpec::Kind::Negative) {
    w = -w;
  } else if (spec.kind == SurrogateSpec::Kind::Signed) {
    for (Eigen::Index i = 0; i < n; ++i) w[i] *= 3.0 * pts(0, i);
  } else if (spec.kind == SurrogateSpec::Kind::Custom) {
    for (Eigen::Index i = 0; i < n; ++i) w[i] *= spec.density(pts.col(i));
  }
  return SignedAtomMeasure(space, std::move(pts), std::move(w));
}

void write_measure(std::ostream& os, const SignedAtomMeasure& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << format_double(m.weight(i));
    const auto p = m.point(i);
    for (Eigen::Index j = 0; j < p.size(); ++j) os << ' ' << format_double(p[j]);
    os << '\n';
  }
}

SignedAtomMeasure read_measure(std::istream& is, const Space& space) {
  const int dim = space.ambient_dim();
  std::vector<double> w;
  std::vector<double> coords;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_fields(line);
    if (static_cast<int>(fields.size()) != dim + 1) {
      std::ostringstream os;
      os << "measure line " << lineno << ": expected " << dim + 1
         << " fields, got " << fields.size();
      throw ConfigError(os.str());
    }
    w.push_back(parse_double(fields[0], "weight"));
    for (int j = 1; j <= dim; ++j)
      coords.push_back(parse_double(fields[static_cast<std::size_t>(j)],
                                    "coordinate"));
  }
  const auto n = static_cast<Eigen::Index>(w.size());
  if (n == 0) throw ConfigError("measure file has no atoms");
  PointCloud pts = Eigen::Map<const PointCloud>(coords.data(), dim, n);
  Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(w.data(), n);
  return SignedAtomMeasure(space, std::move(pts), std::move(wv));
}

void save_measure(const std::string& path, const SignedAtomMeasure& m) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  write_measure(os, m);
  if (!os) throw ConfigError("write failed: " + path);
}

SignedAtomMeasure load_measure(const std::string& path, const Space& space) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  return read_measure(is, space);
}

}  // namespace gnet
