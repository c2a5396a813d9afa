// gnet: build, evaluate and benchmark shallow G-networks.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gnet/bounds.hpp"
#include "gnet/builder.hpp"
#include "gnet/harness.hpp"
#include "gnet/text_io.hpp"

namespace {

using namespace gnet;

/// Splices `key = value` lines from --config into argv after the subcommand
/// name, skipping keys already given as flags so flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i),
                 args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(path);
  } catch (const CLI::FileError& e) {
    throw ConfigError(e.what());
  }
  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::vector<std::string> extra;
  for (const auto& item : items) {
    if (item.name.empty() || item.name == "++" || item.name == "--") continue;
    std::string name = item.name;
    std::replace(name.begin(), name.end(), '_', '-');
    const std::string flag = "--" + name;
    if (given(flag)) continue;
    if (item.inputs.size() == 1) {
      extra.push_back(flag + "=" + item.inputs.front());
    } else {
      extra.push_back(flag);
      extra.insert(extra.end(), item.inputs.begin(), item.inputs.end());
    }
  }
  const auto at = std::min<std::size_t>(2, args.size());
  args.insert(args.begin() + static_cast<long>(at), extra.begin(), extra.end());
  return args;
}

struct KernelOpts {
  std::string kernel = "laplace";
  double gamma = 1.0;
  int q = 2;
  int Q = 3;

  void add(CLI::App* app) {
    app->add_option("--kernel", kernel, "relu-pow, zonal-pow or laplace")
        ->capture_default_str();
    app->add_option("--gamma", gamma, "kernel exponent")->capture_default_str();
    app->add_option("--q", q, "dimension of the y domain")->capture_default_str();
    app->add_option("--Q", Q, "dimension of the x domain")->capture_default_str();
  }
  KernelSpec spec() const { return KernelSpec::from_name(kernel, gamma, q, Q); }
};

SignedAtomMeasure obtain_measure(const KernelSpec& kernel,
                                 const std::string& tau_path,
                                 const std::string& surrogate,
                                 std::size_t atoms, std::uint64_t seed) {
  if (!tau_path.empty()) return load_measure(tau_path, kernel.y_space());
  Rng rng = make_rng(seed, 0x74'61'75ULL);
  return make_surrogate(SurrogateSpec::from_name(surrogate), atoms,
                        kernel.y_space(), rng);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shallow G-network construction by partition and quadrature"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");
  app.footer("Every subcommand accepts --config FILE with `key = value` lines "
             "named like the flags; flags win.");

  // build
  auto* build = app.add_subcommand("build", "Construct a network for a measure");
  KernelOpts bk;
  bk.add(build);
  std::size_t n = 256;
  int trials = 8;
  std::uint64_t seed = 1;
  std::string tau_path, out_path, surrogate = "uniform";
  std::size_t atoms = 100000;
  std::optional<int> degree;
  std::optional<double> eval_eps, kappa;
  std::size_t eval_samples = 20000;
  int threads = 1;
  build->add_option("--n", n, "budget N")->capture_default_str();
  build->add_option("--trials", trials, "randomized trials")->capture_default_str();
  build->add_option("--seed", seed, "master seed")->capture_default_str();
  build->add_option("--tau", tau_path, "measure file (w c_1 ... c_d per line)");
  build->add_option("--surrogate", surrogate,
                    "synthetic measure when --tau is absent: uniform, cap, "
                    "negative, signed")
      ->capture_default_str();
  build->add_option("--atoms", atoms, "synthetic measure size")->capture_default_str();
  build->add_option("--out", out_path, "network output file");
  build->add_option("--degree", degree, "polynomial degree bound k of Pi_k");
  build->add_option("--eval-eps", eval_eps, "eval net radius (default: eps)");
  build->add_option("--eval-samples", eval_samples, "samples behind the eval net")
      ->capture_default_str();
  build->add_option("--kappa", kappa, "covering constant for the partition");
  build->add_option("--threads", threads, "worker threads")->capture_default_str();

  // eval
  auto* eval = app.add_subcommand("eval", "Sup error of a saved network");
  std::string net_path, eval_tau;
  double e_eps = 0.1;
  std::size_t e_samples = 20000;
  std::uint64_t e_seed = 1;
  int e_threads = 1;
  eval->add_option("--net", net_path, "network file")->required();
  eval->add_option("--tau", eval_tau, "measure file")->required();
  eval->add_option("--eval-eps", e_eps, "eval net radius")->capture_default_str();
  eval->add_option("--eval-samples", e_samples, "samples behind the eval net")
      ->capture_default_str();
  eval->add_option("--seed", e_seed, "eval net seed")->capture_default_str();
  eval->add_option("--threads", e_threads, "worker threads")->capture_default_str();

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a rate experiment preset");
  std::string preset = "laplace", csv_path;
  std::optional<int> x_trials, x_threads;
  std::optional<std::uint64_t> x_seed;
  std::optional<std::size_t> x_atoms;
  std::optional<double> x_gamma, x_eval_eps, x_kappa;
  std::vector<std::size_t> x_ns;
  bool timing = false;
  exp->add_option("--preset", preset, "laplace, relu-q-eq-Q, relu-q-lt-Q, zonal")
      ->capture_default_str();
  exp->add_option("--out", csv_path, "CSV output file");
  exp->add_option("--trials", x_trials, "override trials");
  exp->add_option("--seed", x_seed, "override seed");
  exp->add_option("--atoms", x_atoms, "override atom count");
  exp->add_option("--gamma", x_gamma, "override gamma");
  exp->add_option("--eval-eps", x_eval_eps, "override eval net radius");
  exp->add_option("--kappa", x_kappa, "partition covering constant");
  exp->add_option("--n", x_ns, "override the N list");
  exp->add_option("--threads", x_threads, "worker threads");
  exp->add_flag("--timing", timing, "record wall_ms (CSV no longer byte-stable)");

  // bound
  auto* bnd = app.add_subcommand("bound", "Closed-form error bound");
  KernelOpts bo;
  bo.add(bnd);
  std::vector<double> b_ns{256};
  double b_kappa = 1.0, b_xi = 1.0, b_tv = 1.0;
  std::optional<double> b_R;
  bool b_csv = false;
  bnd->add_option("--n", b_ns, "budgets")->capture_default_str();
  bnd->add_option("--kappa", b_kappa, "covering constant")->capture_default_str();
  bnd->add_option("--xi", b_xi, "measure regularity Xi")->capture_default_str();
  bnd->add_option("--tv", b_tv, "total variation")->capture_default_str();
  bnd->add_option("--R", b_R, "relu smoothness order away from the equator");
  bnd->add_flag("--csv", b_csv, "machine-readable rows only");

  // sample
  auto* smp = app.add_subcommand("sample", "Write a synthetic measure");
  KernelOpts sk;
  sk.add(smp);
  std::string s_out, s_kind = "uniform";
  std::size_t s_atoms = 100000;
  std::uint64_t s_seed = 1;
  smp->add_option("--surrogate", s_kind, "uniform, cap, negative, signed")
      ->capture_default_str();
  smp->add_option("--atoms", s_atoms, "atom count")->capture_default_str();
  smp->add_option("--seed", s_seed, "seed")->capture_default_str();
  smp->add_option("--out", s_out, "output file")->required();

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    args.pop_back();
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*build) {
      const KernelSpec kernel = bk.spec();
      const SignedAtomMeasure tau =
          obtain_measure(kernel, tau_path, surrogate, atoms, seed);
      BuildConfig cfg;
      cfg.budget = n;
      cfg.trials = trials;
      cfg.seed = seed;
      cfg.degree = degree;
      cfg.eval_eps = eval_eps;
      cfg.eval_samples = eval_samples;
      cfg.partition_kappa = kappa;
      cfg.threads = threads;
      const BuildResult res = search_best(tau, kernel, cfg);
      for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "kernel      " << kernel.describe() << '\n'
                << "atoms       " << tau.size() << " (|tau| = "
                << format_double(tau.total_variation()) << ")\n"
                << "eps         " << format_double(res.eps.eps) << '\n'
                << "kappa       " << format_double(res.kappa) << '\n'
                << "cells       " << res.cells << '\n'
                << "terms       " << res.network.size() << '\n'
                << "sum |a_k|   " << format_double(res.network.coefficient_l1())
                << '\n'
                << "eval points " << res.eval_points.cols() << " (radius "
                << format_double(res.eval_eps) << ", off-net slack <= "
                << format_double(res.offnet_slack) << ")\n";
      for (const auto& t : res.log)
        std::cout << "trial " << t.trial << "     "
                  << (t.ok ? format_double(t.error) : "failed: " + t.note)
                  << '\n';
      std::cout << "sup error   " << format_double(res.error) << " (trial "
                << res.best_trial << ")\n";
      if (!out_path.empty()) save_network(out_path, res.network);
    } else if (*eval) {
      const GNetwork net = load_network(net_path);
      const SignedAtomMeasure tau = load_measure(eval_tau, net.kernel().y_space());
      const PointCloud pts =
          make_eval_net(net.kernel().x_space(), e_eps, e_samples, e_seed);
      const SupError err = sup_error(net, tau, pts, e_threads);
      std::cout << "eval points " << pts.cols() << '\n'
                << "sup error   " << format_double(err.error) << '\n';
    } else if (*exp) {
      ExperimentConfig cfg = preset_config(preset);
      if (x_trials) cfg.trials = *x_trials;
      if (x_seed) cfg.seed = *x_seed;
      if (x_atoms) cfg.atoms = *x_atoms;
      if (x_gamma) cfg.gamma = *x_gamma;
      if (x_eval_eps) cfg.eval_eps = *x_eval_eps;
      if (x_threads) cfg.threads = *x_threads;
      if (!x_ns.empty()) cfg.Ns = x_ns;
      cfg.partition_kappa = x_kappa;
      cfg.timing = timing;
      const RateReport report = run_experiment(cfg, [](const RateRow& r) {
        std::cerr << "N=" << r.N << " error=" << format_double(r.error) << '\n';
      });
      print_summary(std::cout, report);
      if (!csv_path.empty()) {
        std::ofstream os(csv_path);
        if (!os) throw ConfigError("cannot write " + csv_path);
        write_csv(os, report.rows);
      }
    } else if (*bnd) {
      const KernelSpec kernel =
          bo.kernel == "relu-pow" ? KernelSpec::relu_pow(bo.gamma, bo.q, bo.Q, b_R)
                                  : bo.spec();
      const BoundReport r = bound_kernel(kernel, b_ns, b_kappa, b_xi, b_tv);
      if (!b_csv) print_report(std::cout, r);
      print_report_rows(std::cout, r);
    } else if (*smp) {
      const KernelSpec kernel = sk.spec();
      Rng rng = make_rng(s_seed, 0x74'61'75ULL);
      const SignedAtomMeasure tau = make_surrogate(
          SurrogateSpec::from_name(s_kind), s_atoms, kernel.y_space(), rng);
      save_measure(s_out, tau);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
