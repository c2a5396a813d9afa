#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gnet/kernels.hpp"
#include "gnet/partition.hpp"
#include "gnet/quadrature.hpp"

namespace gnet {

/// x -> sum_k a_k G(x, y_k).
class GNetwork {
 public:
  GNetwork(KernelSpec kernel, PointCloud centers, Eigen::VectorXd coeffs);

  const KernelSpec& kernel() const { return kernel_; }
  const PointCloud& centers() const { return centers_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  std::size_t size() const { return static_cast<std::size_t>(coeffs_.size()); }
  double coefficient_l1() const { return coeffs_.cwiseAbs().sum(); }

  double eval(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double eval(const Point& x) const {
    return eval(Eigen::Ref<const Eigen::VectorXd>(x));
  }
  Eigen::VectorXd eval(const PointCloud& xs, int threads = 1) const;

 private:
  KernelSpec kernel_;
  PointCloud centers_;
  Eigen::VectorXd coeffs_;
};

/// Header `kernel <name> gamma <g> q <q> Q <Q> N <terms>`, then one term per
/// line `a_k y_1 ... y_ambient`. Decimals round-trip exactly.
void write_network(std::ostream& os, const GNetwork& net);
GNetwork read_network(std::istream& is);
void save_network(const std::string& path, const GNetwork& net);
GNetwork load_network(const std::string& path);

struct EpsilonChoice {
  double eps = 1.0;     ///< radius used by the partition
  double raw = 1.0;     ///< (3 c_T (D_R + 2) / N)^{1/q}
  bool below_regime = false;  ///< raw > 1: budget under 3 c_T (D_R + 2)
};

/// eps = (3 c_T (D_R + 2) / N)^{1/q}, capped at the diameter 2.
EpsilonChoice choose_epsilon(double N, double c_T, double D_R, int q);

/// Terms (sign * scale * tau(A_k) * w_kj, p_kj) for each cell rule.
GNetwork assemble(const Partition& partition,
                  const std::vector<QuadratureRule>& rules,
                  const ProbabilityAtomMeasure& measure,
                  const KernelSpec& kernel, double scale = 1.0);

struct SupError {
  double error = 0.0;
  Eigen::Index argmax = 0;
};

SupError sup_error(const GNetwork& net, const Eigen::VectorXd& target_values,
                   const PointCloud& eval_points, int threads = 1);
SupError sup_error(const GNetwork& net, const SignedAtomMeasure& tau,
                   const PointCloud& eval_points, int threads = 1);

/// Farthest-point net at `eval_eps` over `samples` uniform draws of `space`.
PointCloud make_eval_net(const Space& space, double eval_eps,
                         std::size_t samples, std::uint64_t seed);

/// Closed-form bound on the Hoelder seminorm of G in x (kappa enters for the
/// sphere kernels); NaN for custom kernels.
double holder_bound(const KernelSpec& kernel, double kappa);

struct BuildConfig {
  std::size_t budget = 256;
  std::optional<int> degree;  ///< Pi_k degree bound; kernel default if unset
  int trials = 8;
  std::uint64_t seed = 1;
  std::optional<double> eval_eps;  ///< default: the chosen eps
  std::size_t eval_samples = 20000;
  std::optional<PointCloud> eval_points;  ///< overrides the eval net
  std::optional<double> partition_kappa;  ///< default_partition_kappa if unset
  int threads = 1;
};

struct TrialRecord {
  int trial = 0;
  bool ok = false;
  double error = 0.0;
  std::string note;
};

struct BuildResult {
  GNetwork network;
  double error = 0.0;
  int best_trial = 0;
  std::vector<TrialRecord> log;
  EpsilonChoice eps;
  double kappa = 1.0;  ///< partition kappa
  double c_T = 0.0;
  long D_R = 0;
  int degree = 1;
  std::size_t cells = 0;
  bool exact = false;  ///< budget covered every atom; no recombination
  PointCloud eval_points;
  double eval_eps = 0.0;
  double offnet_slack = 0.0;  ///< |tau| |G|_{X,alpha} 2 eval_eps^alpha
  std::vector<std::string> warnings;
};

/// Partition each Hahn part once, then run `trials` randomized
/// recombinations per cell (trial t, part p, cell k seeded by
/// derive_seed(seed, t, p, k)) and keep the network with the smallest sup
/// error over the eval net; ties go to the lower trial index.
BuildResult search_best(const SignedAtomMeasure& tau, const KernelSpec& kernel,
                        const BuildConfig& config);

}  // namespace gnet
