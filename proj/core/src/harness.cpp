#include "gnet/harness.hpp"

#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "gnet/text_io.hpp"

namespace gnet {

ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig c;
  c.preset = std::string(name);
  if (name == "laplace") {
    c.kernel = "laplace";
    c.gamma = 0.0;
    c.q = 2;
    c.Q = 3;
    c.Ns = {16, 32, 64, 128, 256, 512};
    c.atoms = 100000;
    c.eval_eps = 0.1;
  } else if (name == "relu-q-eq-Q") {
    c.kernel = "relu-pow";
    c.gamma = 1.0;
    c.q = 3;
    c.Q = 3;
    c.Ns = {64, 128, 256, 512, 1024};
    c.atoms = 120000;
    c.eval_eps = 0.2;
  } else if (name == "relu-q-lt-Q") {
    c.kernel = "relu-pow";
    c.gamma = 1.0;
    c.q = 2;
    c.Q = 4;
    c.Ns = {32, 64, 128, 256, 512};
    c.atoms = 60000;
    c.eval_eps = 0.3;
  } else if (name == "zonal") {
    c.kernel = "zonal-pow";
    c.gamma = 1.5;
    c.q = 2;
    c.Q = 3;
    c.Ns = {64, 128, 256, 512, 1024};
    c.atoms = 120000;
    c.eval_eps = 0.2;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

std::vector<std::string> preset_names() {
  return {"laplace", "relu-q-eq-Q", "relu-q-lt-Q", "zonal"};
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> warnings;
  if (cfg.Ns.empty()) throw ConfigError("experiment needs at least one N");
  for (std::size_t i = 1; i < cfg.Ns.size(); ++i)
    if (cfg.Ns[i] <= cfg.Ns[i - 1])
      throw ConfigError("N list must be strictly increasing");
  if (cfg.Ns.front() == 0) throw ConfigError("N must be positive");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  if (cfg.atoms == 0) throw ConfigError("atom count must be positive");
  if (!(cfg.eval_eps > 0.0)) throw ConfigError("eval eps must be positive");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (cfg.atoms < 100 * cfg.Ns.back()) {
    std::ostringstream os;
    os << "atom count " << cfg.atoms << " is below 100 x max N = "
       << 100 * cfg.Ns.back();
    warnings.push_back(os.str());
  }
  return warnings;
}

FitResult fit_rate(std::span<const double> N, std::span<const double> error) {
  if (N.size() != error.size())
    throw FitError("fit_rate: N and error lengths differ");
  FitResult f;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < N.size(); ++i) {
    if (!(error[i] > 0.0) || !(N[i] > 0.0)) {
      std::ostringstream os;
      os << "row N=" << N[i] << " dropped (non-positive error)";
      f.notes.push_back(os.str());
      continue;
    }
    x.push_back(std::log(N[i]));
    y.push_back(std::log(error[i]));
  }
  if (x.size() < 4) throw FitError("fit_rate: fewer than 4 usable rows");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw FitError("fit_rate: all N are equal");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  f.used = x.size();
  return f;
}

FitResult fit_rate(std::span<const RateRow> rows) {
  std::vector<double> n, e;
  for (const auto& r : rows) {
    n.push_back(static_cast<double>(r.N));
    e.push_back(r.error);
  }
  return fit_rate(n, e);
}

RateReport run_experiment(const ExperimentConfig& cfg,
                          const std::function<void(const RateRow&)>& progress) {
  RateReport report;
  report.config = cfg;
  report.notes = validate(cfg);

  const KernelSpec kernel =
      KernelSpec::from_name(cfg.kernel, cfg.gamma, cfg.q, cfg.Q);
  Rng tau_rng = make_rng(cfg.seed, 0x74'61'75ULL);
  const SignedAtomMeasure tau = make_surrogate(
      SurrogateSpec::from_name(cfg.surrogate), cfg.atoms, kernel.y_space(),
      tau_rng);

  if (kernel.y_space().is_sphere()) {
    Rng xi_rng = make_rng(cfg.seed, 0x78'69ULL);
    report.xi = std::max(1.0, estimate_xi(tau, cfg.xi_probes, xi_rng));
  }
  std::vector<double> ns(cfg.Ns.begin(), cfg.Ns.end());
  report.bound = bound_kernel(kernel, ns, cfg.bound_kappa, report.xi,
                              tau.total_variation());
  report.target_exponent = -report.bound.exponent;

  const PointCloud eval_points = make_eval_net(
      kernel.x_space(), cfg.eval_eps, cfg.eval_samples, cfg.seed);

  for (std::size_t N : cfg.Ns) {
    BuildConfig b;
    b.budget = N;
    b.trials = cfg.trials;
    b.seed = cfg.seed;
    b.eval_points = eval_points;
    b.eval_eps = cfg.eval_eps;
    b.partition_kappa = cfg.partition_kappa;
    b.threads = cfg.threads;
    const auto start = std::chrono::steady_clock::now();
    try {
      const BuildResult res = search_best(tau, kernel, b);
      const auto stop = std::chrono::steady_clock::now();
      RateRow row;
      row.preset = cfg.preset;
      row.N = N;
      row.seed = cfg.seed;
      row.trials = cfg.trials;
      row.error = res.error;
      row.bound = report.bound.at(static_cast<double>(N));
      row.kappa = cfg.bound_kappa;
      row.eps = res.eps.eps;
      row.M = res.cells;
      if (cfg.timing)
        row.wall_ms =
            std::chrono::duration<double, std::milli>(stop - start).count();
      for (const auto& w : res.warnings) report.notes.push_back(w);
      report.rows.push_back(row);
      if (progress) progress(row);
    } catch (const FidelityError& e) {
      std::ostringstream os;
      os << "N=" << N << " skipped: " << e.what();
      report.notes.push_back(os.str());
    }
  }
  try {
    report.fit = fit_rate(report.rows);
    for (const auto& n : report.fit->notes) report.notes.push_back(n);
  } catch (const FitError& e) {
    report.notes.push_back(std::string("no rate fit: ") + e.what());
  }
  return report;
}

void write_csv(std::ostream& os, std::span<const RateRow> rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows)
    os << r.preset << ',' << r.N << ',' << r.seed << ',' << r.trials << ','
       << format_double(r.error) << ',' << format_double(r.bound) << ','
       << format_double(r.kappa) << ',' << format_double(r.eps) << ',' << r.M
       << ',' << format_double(r.wall_ms) << '\n';
}

std::vector<RateRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw ConfigError("unexpected CSV header: " + line);
  std::vector<RateRow> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10) throw ConfigError("CSV row needs 10 fields: " + line);
    RateRow r;
    r.preset = f[0];
    r.N = static_cast<std::size_t>(parse_double(f[1], "N"));
    r.seed = std::stoull(f[2]);
    r.trials = static_cast<int>(parse_double(f[3], "trials"));
    r.error = parse_double(f[4], "error");
    r.bound = parse_double(f[5], "bound");
    r.kappa = parse_double(f[6], "kappa");
    r.eps = parse_double(f[7], "eps");
    r.M = static_cast<std::size_t>(parse_double(f[8], "M"));
    r.wall_ms = parse_double(f[9], "wall_ms");
    rows.push_back(std::move(r));
  }
  return rows;
}

void print_summary(std::ostream& os, const RateReport& report) {
  const auto& c = report.config;
  os << "preset " << c.preset << ": " << c.kernel;
  if (c.kernel != "laplace") os << " gamma=" << c.gamma;
  os << " q=" << c.q << " Q=" << c.Q << " atoms=" << c.atoms
     << " trials=" << c.trials << " seed=" << c.seed << '\n';
  os << "Xi estimate " << format_double(report.xi) << ", bound constant "
     << format_double(report.bound.constant) << ", target exponent "
     << format_double(report.target_exponent) << '\n';
  for (const auto& r : report.rows)
    os << "  N=" << r.N << " eps=" << format_double(r.eps) << " M=" << r.M
       << " error=" << format_double(r.error)
       << " bound=" << format_double(r.bound) << '\n';
  if (report.fit)
    os << "fitted slope " << format_double(report.fit->slope) << ", R^2 "
       << format_double(report.fit->r2) << " over " << report.fit->used
       << " points\n";
  for (const auto& n : report.notes) os << "note: " << n << '\n';
}

}  // namespace gnet
