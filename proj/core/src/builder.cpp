#include "gnet/builder.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "gnet/text_io.hpp"
#include "parallel.hpp"

namespace gnet {

GNetwork::GNetwork(KernelSpec kernel, PointCloud centers, Eigen::VectorXd coeffs)
    : kernel_(std::move(kernel)),
      centers_(std::move(centers)),
      coeffs_(std::move(coeffs)) {
  if (centers_.cols() != coeffs_.size())
    throw BuildError("network: center and coefficient counts differ");
  if (centers_.rows() != kernel_.y_space().ambient_dim())
    throw BuildError("network: centers have the wrong ambient dimension");
  for (Eigen::Index j = 0; j < centers_.cols(); ++j)
    kernel_.y_space().require(centers_.col(j), "network center");
}

double GNetwork::eval(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  kernel_.x_space().require(x, "x");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < coeffs_.size(); ++j)
    acc += coeffs_[j] * kernel_(x, centers_.col(j));
  return acc;
}

Eigen::VectorXd GNetwork::eval(const PointCloud& xs, int threads) const {
  return kernel_sum(kernel_, centers_, coeffs_, xs, threads);
}

void write_network(std::ostream& os, const GNetwork& net) {
  const KernelSpec& k = net.kernel();
  os << "kernel " << k.name() << " gamma " << format_double(k.gamma()) << " q "
     << k.q() << " Q " << k.Q() << " N " << net.size() << '\n';
  for (std::size_t j = 0; j < net.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    os << format_double(net.coeffs()[jj]);
    for (Eigen::Index r = 0; r < net.centers().rows(); ++r)
      os << ' ' << format_double(net.centers()(r, jj));
    os << '\n';
  }
}

GNetwork read_network(std::istream& is) {
  std::string line;
  while (std::getline(is, line) && is_comment_or_blank(line)) {
  }
  const auto head = split_fields(line);
  if (head.size() != 10 || head[0] != "kernel" || head[2] != "gamma" ||
      head[4] != "q" || head[6] != "Q" || head[8] != "N")
    throw ConfigError(
        "network header must read: kernel <name> gamma <g> q <q> Q <Q> N <n>");
  const double gamma = parse_double(head[3], "gamma");
  const int q = static_cast<int>(parse_double(head[5], "q"));
  const int Q = static_cast<int>(parse_double(head[7], "Q"));
  const auto n = static_cast<std::size_t>(parse_double(head[9], "N"));
  KernelSpec kernel = KernelSpec::from_name(head[1], gamma, q, Q);
  const int dim = kernel.y_space().ambient_dim();
  PointCloud centers(dim, static_cast<Eigen::Index>(n));
  Eigen::VectorXd coeffs(static_cast<Eigen::Index>(n));
  std::size_t j = 0;
  while (std::getline(is, line)) {
    if (is_comment_or_blank(line)) continue;
    const auto f = split_fields(line);
    if (static_cast<int>(f.size()) != dim + 1)
      throw ConfigError("network term line has the wrong field count");
    if (j >= n) throw ConfigError("network file has more terms than N");
    const auto jj = static_cast<Eigen::Index>(j);
    coeffs[jj] = parse_double(f[0], "coefficient");
    for (int r = 0; r < dim; ++r)
      centers(r, jj) =
          parse_double(f[static_cast<std::size_t>(r + 1)], "coordinate");
    ++j;
  }
  if (j != n) throw ConfigError("network file has fewer terms than N");
  return GNetwork(std::move(kernel), std::move(centers), std::move(coeffs));
}

void save_network(const std::string& path, const GNetwork& net) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  write_network(os, net);
  if (!os) throw ConfigError("write failed: " + path);
}

GNetwork load_network(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  return read_network(is);
}

EpsilonChoice choose_epsilon(double N, double c_T, double D_R, int q) {
  if (!(N > 0.0) || !(c_T > 0.0) || !(D_R > 0.0) || q < 1)
    throw DomainError("choose_epsilon: arguments must be positive");
  EpsilonChoice c;
  c.raw = std::pow(3.0 * c_T * (D_R + 2.0) / N, 1.0 / q);
  c.below_regime = c.raw > 1.0;
  c.eps = std::min(c.raw, 2.0);
  return c;
}

GNetwork assemble(const Partition& partition,
                  const std::vector<QuadratureRule>& rules,
                  const ProbabilityAtomMeasure& measure,
                  const KernelSpec& kernel, double scale) {
  if (rules.size() != partition.cells.size())
    throw BuildError("assemble: need one rule per cell");
  std::size_t terms = 0;
  for (const auto& r : rules) terms += r.size();
  PointCloud centers(measure.points().rows(), static_cast<Eigen::Index>(terms));
  Eigen::VectorXd coeffs(static_cast<Eigen::Index>(terms));
  // Renormalized against summation drift over many atoms.
  double total_mass = 0.0;
  for (const auto& c : partition.cells) total_mass += c.mass;
  Eigen::Index t = 0;
  for (std::size_t k = 0; k < rules.size(); ++k) {
    const QuadratureRule& r = rules[k];
    const double wsum = r.weights.sum();
    if (!(r.residual <= kQuadratureTol) || (r.weights.array() < 0.0).any() ||
        std::abs(wsum - 1.0) > 1e-12)
      throw BuildError("assemble: cell rule is not verified");
    const double cell = scale * (partition.cells[k].mass / total_mass) / wsum;
    for (std::size_t j = 0; j < r.size(); ++j, ++t) {
      centers.col(t) = r.points.col(static_cast<Eigen::Index>(j));
      coeffs[t] = cell * r.weights[static_cast<Eigen::Index>(j)];
    }
  }
  return GNetwork(kernel, std::move(centers), std::move(coeffs));
}

SupError sup_error(const GNetwork& net, const Eigen::VectorXd& target_values,
                   const PointCloud& eval_points, int threads) {
  if (eval_points.cols() == 0) throw DomainError("sup_error: empty eval set");
  if (target_values.size() != eval_points.cols())
    throw DomainError("sup_error: target and eval point counts differ");
  const Eigen::VectorXd got = net.eval(eval_points, threads);
  SupError e;
  e.error = (got - target_values).cwiseAbs().maxCoeff(&e.argmax);
  return e;
}

SupError sup_error(const GNetwork& net, const SignedAtomMeasure& tau,
                   const PointCloud& eval_points, int threads) {
  return sup_error(net, target_eval(net.kernel(), tau, eval_points, threads),
                   eval_points, threads);
}

PointCloud make_eval_net(const Space& space, double eval_eps,
                         std::size_t samples, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0x65'76'61'6cULL);
  return epsilon_net(space, eval_eps, samples, rng);
}

double holder_bound(const KernelSpec& kernel, double kappa) {
  switch (kernel.kind()) {
    case KernelKind::ReluPow:
      return std::numbers::pi * kappa * kernel.gamma();
    case KernelKind::ZonalPow:
      return 2.0 * std::numbers::pi * kappa * kernel.gamma();
    case KernelKind::Laplace:
      return 1.0;
    case KernelKind::Custom:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

struct PartPlan {
  ProbabilityAtomMeasure measure;
  double sign;
  double mass;
  Partition partition;
  std::vector<std::pair<PointCloud, Eigen::VectorXd>> clouds;
};

}  // namespace

BuildResult search_best(const SignedAtomMeasure& tau, const KernelSpec& kernel,
                        const BuildConfig& cfg) {
  if (!(tau.space() == kernel.y_space()))
    throw ConfigError("measure space " + tau.space().describe() +
                      " does not match the kernel's " +
                      kernel.y_space().describe());
  if (cfg.budget == 0) throw ConfigError("budget N must be positive");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");

  const Space& Y = kernel.y_space();
  const int q = Y.dim();
  const int degree = cfg.degree.value_or(kernel.construction_degree());
  const long D_R = basis_dim(q, degree);
  const double kappa = cfg.partition_kappa.value_or(default_partition_kappa(Y));
  const double c_T = covering_constant(Y, kappa);
  const double N = static_cast<double>(cfg.budget);
  const EpsilonChoice eps = choose_epsilon(N, c_T, static_cast<double>(D_R), q);
  std::vector<std::string> warnings;
  if (eps.below_regime) {
    std::ostringstream os;
    os << "budget N=" << cfg.budget << " is below 3 c_T (D_R+2) = "
       << 3.0 * c_T * (static_cast<double>(D_R) + 2.0) << "; eps=" << eps.eps;
    warnings.push_back(os.str());
  }

  const double eval_eps = cfg.eval_eps.value_or(eps.eps);
  PointCloud eval_points =
      cfg.eval_points ? *cfg.eval_points
                      : make_eval_net(kernel.x_space(), eval_eps,
                                      cfg.eval_samples, cfg.seed);
  const Eigen::VectorXd target =
      target_eval(kernel, tau, eval_points, cfg.threads);
  const double tv = tau.total_variation();
  const double slack = tv * holder_bound(kernel, 1.0) * 2.0 *
                       std::pow(eval_eps, kernel.smoothness().alpha);

  auto finish = [&](GNetwork net, double err, int best,
                    std::vector<TrialRecord> log, std::size_t cells,
                    bool exact) {
    if (net.coefficient_l1() > tv + 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "coefficient budget exceeded: sum |a_k| = " << net.coefficient_l1()
         << " > |tau| = " << tv;
      throw BuildError(os.str());
    }
    return BuildResult{.network = std::move(net),
                       .error = err,
                       .best_trial = best,
                       .log = std::move(log),
                       .eps = eps,
                       .kappa = kappa,
                       .c_T = c_T,
                       .D_R = D_R,
                       .degree = degree,
                       .cells = cells,
                       .exact = exact,
                       .eval_points = std::move(eval_points),
                       .eval_eps = eval_eps,
                       .offnet_slack = slack,
                       .warnings = std::move(warnings)};
  };

  const std::vector<std::size_t> support = tau.support();
  if (support.size() <= cfg.budget) {
    PointCloud centers(Y.ambient_dim(), static_cast<Eigen::Index>(support.size()));
    Eigen::VectorXd coeffs(static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) {
      centers.col(static_cast<Eigen::Index>(j)) = tau.point(support[j]);
      coeffs[static_cast<Eigen::Index>(j)] = tau.weight(support[j]);
    }
    GNetwork net(kernel, std::move(centers), std::move(coeffs));
    const double err = sup_error(net, target, eval_points, cfg.threads).error;
    std::vector<TrialRecord> log{{0, true, err, "exact atom expansion"}};
    return finish(std::move(net), err, 0, std::move(log), support.size(), true);
  }

  HahnSplit split = hahn_split(tau);
  std::vector<PartPlan> parts;
  auto plan_part = [&](std::optional<ProbabilityAtomMeasure>& m, double sign,
                       double mass) {
    if (!m) return;
    const double share = std::max(1.0, std::floor(N * mass / tv));
    const EpsilonChoice pe =
        choose_epsilon(share, c_T, static_cast<double>(D_R), q);
    Partition p = build_partition(*m, pe.eps, c_T);
    std::vector<std::pair<PointCloud, Eigen::VectorXd>> clouds;
    clouds.reserve(p.cells.size());
    for (const Cell& c : p.cells) clouds.push_back(cell_cloud(c, *m));
    parts.push_back(
        PartPlan{std::move(*m), sign, mass, std::move(p), std::move(clouds)});
  };
  plan_part(split.positive, 1.0, split.mass_pos);
  plan_part(split.negative, -1.0, split.mass_neg);

  std::size_t cells = 0;
  for (const auto& p : parts) cells += p.partition.size();

  const PolyBasis basis(Y, degree);
  const auto identity_max = static_cast<std::size_t>(D_R + 2);
  std::vector<std::optional<GNetwork>> nets(static_cast<std::size_t>(cfg.trials));
  std::vector<TrialRecord> log(static_cast<std::size_t>(cfg.trials));

  auto run_trial = [&](std::size_t t) {
    TrialRecord& rec = log[t];
    rec.trial = static_cast<int>(t);
    std::vector<GNetwork> pieces;
    try {
      for (std::size_t pi = 0; pi < parts.size(); ++pi) {
        const PartPlan& part = parts[pi];
        std::vector<QuadratureRule> rules;
        rules.reserve(part.clouds.size());
        for (std::size_t k = 0; k < part.clouds.size(); ++k) {
          Rng rng = make_rng(cfg.seed, t, pi, k);
          rules.push_back(recombine(part.clouds[k].first, part.clouds[k].second,
                                    basis, rng, identity_max));
        }
        pieces.push_back(assemble(part.partition, rules, part.measure, kernel,
                                  part.sign * part.mass));
      }
    } catch (const QuadratureError& e) {
      rec.ok = false;
      rec.note = e.what();
      return;
    }
    Eigen::Index total = 0;
    for (const auto& g : pieces) total += static_cast<Eigen::Index>(g.size());
    PointCloud centers(Y.ambient_dim(), total);
    Eigen::VectorXd coeffs(total);
    Eigen::Index at = 0;
    for (const auto& g : pieces) {
      const auto n = static_cast<Eigen::Index>(g.size());
      centers.middleCols(at, n) = g.centers();
      coeffs.segment(at, n) = g.coeffs();
      at += n;
    }
    GNetwork net(kernel, std::move(centers), std::move(coeffs));
    rec.error = sup_error(net, target, eval_points, 1).error;
    rec.ok = true;
    nets[t] = std::move(net);
  };
  detail::parallel_for(nets.size(), cfg.threads, run_trial);

  int best = -1;
  for (std::size_t t = 0; t < log.size(); ++t)
    if (log[t].ok && (best < 0 || log[t].error < log[static_cast<std::size_t>(best)].error))
      best = static_cast<int>(t);
  if (best < 0)
    throw BuildError("every trial failed: " + log.front().note);

  GNetwork net = std::move(*nets[static_cast<std::size_t>(best)]);
  if (static_cast<double>(net.size()) >
      static_cast<double>(cells) * static_cast<double>(D_R + 2))
    throw BuildError("network has more than M (D_R + 2) terms");
  const double err = log[static_cast<std::size_t>(best)].error;
  return finish(std::move(net), err, best, std::move(log), cells, false);
}

}  // namespace gnet
