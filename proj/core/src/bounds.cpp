#include "gnet/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "gnet/polyspace.hpp"
#include "gnet/text_io.hpp"

namespace gnet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

bool is_integer(double v) { return v == std::floor(v); }

double sphere_const(double kappa, double q) {
  return kappa * std::pow(q, 1.5) * std::log(q);
}

void require_q(double q) {
  if (q < 2.0) throw DomainError("the kernel bounds need q >= 2");
}

}  // namespace

double exponent_a(double R, double r, double q, double s, double u) {
  if (R < r) throw DomainError("exponent_a: needs R >= r");
  const double denom = q - s + 2.0 * u;
  if (!(denom > 2.0 * R - 2.0 * r)) {
    std::ostringstream os;
    os << "exponent_a: q - s + 2u > 2R - 2r fails (" << denom
       << " <= " << 2.0 * R - 2.0 * r << ")";
    throw DomainError(os.str());
  }
  return (2.0 * R - 2.0 * r) / denom;
}

double lambda_relu(double R, double gamma) {
  if (R < gamma) throw DomainError("lambda: needs R >= gamma");
  const double d = 2.0 * R - 2.0 * gamma;
  return d / (d + 1.0);
}

double c1(const GeneralParams& p, double c_T, double c_X, double theta,
          double D_R) {
  const double a = exponent_a(p.R, p.r, p.q, p.s, p.u);
  const double e = 0.5 + (p.R - p.u * a) / p.q;
  const double inner =
      p.Q * (p.q + 2.0 * p.R - 2.0 * p.u * a) / (2.0 * p.alpha) + std::log(c_X);
  return 4.0 * kE * std::pow(c_T * (3.0 * D_R + 6.0), e) *
         (std::sqrt(inner) / std::sqrt(c_T) * std::sqrt(theta + 1.0) + 1.0);
}

double c1_prime(const GeneralParams& p, double c_T, double c_X, double D_R) {
  const double e = 1.0 + p.R / p.q;
  const double inner =
      p.Q * (p.q + 2.0 * p.R) / (2.0 * p.alpha) + std::log(c_X);
  return 8.0 * std::pow(c_T, e) * std::pow(3.0 * D_R + 6.0, e) *
         (std::sqrt(inner) / std::sqrt(c_T) + 1.0);
}

double rate_value(double c, double tv, double p, double N) {
  if (!(N >= 1.0)) throw DomainError("bound: N must be >= 1");
  return c * tv * std::sqrt(1.0 + std::log(N)) / std::pow(N, p);
}

GeneralBound bound_general(double N, const GeneralParams& p, double c_T,
                           double c_X, double theta, double D_R) {
  GeneralBound b;
  b.a = exponent_a(p.R, p.r, p.q, p.s, p.u);
  b.constant = c1(p, c_T, c_X, theta, D_R);
  b.exponent = 0.5 + (p.R - p.u * b.a) / p.q;
  b.value = rate_value(b.constant * p.G_norm, p.tv, b.exponent, N);
  b.threshold =
      3.0 * c_T * (D_R + 2.0) * std::pow(p.q - p.s, p.q / (1.0 - b.a));
  if (b.threshold == 0.0)
    b.notes.push_back("threshold factor (q-s)^{q/(1-a)} vanishes for s = q");
  return b;
}

GeneralBound bound_general_point(double N, const GeneralParams& p, double c_T,
                                 double c_X, double D_R) {
  GeneralBound b;
  b.constant = c1_prime(p, c_T, c_X, D_R);
  b.exponent = std::min(0.5 + p.R / p.q, 1.0 + p.r / p.q);
  b.value = rate_value(b.constant * p.G_norm, p.tv, b.exponent, N);
  b.threshold = 3.0 * c_T * (D_R + 2.0);
  return b;
}

double c2_equal(double q, double R, double kappa, double xi) {
  return 16.0 * std::sqrt(kPi) * kE * kappa * std::pow(2.0 * kPi, R) *
         std::pow(kappa * std::pow(q, 1.5) *
                      (3.0 * std::pow(q + 1.0, R + 1.0) + 6.0) * std::log(q),
                  0.5 + R / q) *
         ((q + 2.0 * R + std::log(kappa * q * q)) * std::sqrt(6.0 * xi) + 1.0);
}

double c2_lower(double q, double Q, double gamma, double kappa) {
  return 16.0 * kappa * std::pow(kPi, gamma) *
         std::pow(kappa * std::pow(q, 1.5) *
                      (3.0 * std::pow(q + 1.0, gamma) + 6.0) * std::log(q),
                  1.0 + gamma / q) *
         (std::sqrt(Q * (q + 2.0 * gamma) / 2.0 + std::log(kappa * Q * Q)) /
              std::sqrt(sphere_const(kappa, q)) +
          1.0);
}

double c2_prime(double q, double gamma, double kappa, double xi) {
  return 32.0 * std::sqrt(kPi) * kE * kappa * std::pow(2.0 * kPi, gamma) *
         std::pow(kappa * std::pow(q, 1.5) *
                      (3.0 * std::pow(q + 1.0, gamma) + 6.0) * std::log(q),
                  1.0 + (gamma + 1.0) / q) *
         ((q + gamma + 1.0 + std::log(kappa * q * q)) * std::sqrt(6.0 * xi) +
          1.0);
}

double c3(double q, double Q, double gamma, double kappa) {
  return 8.0 * kappa * std::pow(kPi, 2.0 * gamma) *
         std::pow(kappa * std::pow(q, 1.5) *
                      (3.0 * std::pow(q + 1.0, 2.0 * gamma + 1.0) + 6.0) *
                      std::log(q),
                  1.0 + 2.0 * gamma / q) *
         (std::sqrt(Q * (q + 2.0 * gamma) / 2.0 + std::log(kappa * Q * Q)) /
              std::sqrt(sphere_const(kappa, q)) +
          1.0);
}

double c4(double q, double Q, double kappa_b) {
  const double cb = sphere_const(kappa_b, q);
  return 8.0 * std::pow(cb * (3.0 * q + 9.0), 1.0 + 1.0 / q) *
         (std::sqrt((q + 2.0) / 2.0 * Q + 2.0 * std::log(Q) +
                    std::log(kappa_b)) /
              std::sqrt(cb) +
          1.0);
}

double theta_bound(double xi, double kappa, double q) {
  return 3.0 * kPi * xi * sphere_const(kappa, q);
}

double theta_uniform_sphere(double Q) { return 2.0 * std::sqrt((Q + 2.0) / kPi); }

BoundReport bound_kernel(const KernelSpec& kernel, std::span<const double> Ns,
                         double kappa, double xi, double tv) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  BoundReport r;
  r.kernel = kernel.name();
  r.q = kernel.q();
  r.Q = kernel.Q();
  r.gamma = kernel.gamma();
  const Smoothness& sm = kernel.smoothness();
  r.R = sm.R;
  r.r = sm.r;
  r.u = sm.u;
  r.s = sm.s;
  r.alpha = sm.alpha;
  r.kappa = kappa;
  r.xi = xi;
  r.tv = tv;
  require_q(r.q);
  r.c_T = sphere_const(kappa, r.q);
  r.c_X = kappa * r.Q * r.Q;
  r.D_R = static_cast<double>(basis_dim(kernel.q(), std::max(1.0, r.R)));
  const double q = r.q;
  const double g = r.gamma;

  switch (kernel.kind()) {
    case KernelKind::ReluPow:
      r.threshold =
          kappa * std::pow(q, 1.5) * (3.0 * std::pow(q + 1.0, g + 1.0) + 6.0) *
          std::log(q);
      if (r.q == r.Q) {
        r.lambda = lambda_relu(r.R, g);
        r.a = exponent_a(r.R, r.r, q, r.s, r.u);
        r.theta = theta_bound(xi, kappa, q);
        const double c = c2_equal(q, r.R, kappa, xi);
        const double p = 0.5 + g / q + r.lambda / (2.0 * q);
        if (is_integer(g)) {
          r.theorem = "relu-int-q-eq-Q";
          r.constant = c2_prime(q, g, kappa, xi);
          r.exponent = 0.5 + (2.0 * g + 1.0) / (2.0 * q);
          r.alt_constant = c;
          r.alt_exponent = p;
        } else {
          r.theorem = "relu-q-eq-Q";
          r.constant = c;
          r.exponent = p;
        }
      } else {
        r.theorem = "relu-q-lt-Q";
        r.constant = c2_lower(q, r.Q, g, kappa);
        r.exponent = 0.5 + g / q;
        r.notes.push_back(
            "empty singular set: exponent min(1/2+R/q, 1+r/q) with R=r=gamma");
      }
      break;
    case KernelKind::ZonalPow:
      if (is_integer(g))
        throw DomainError("zonal bound needs a non-integer gamma");
      r.theorem = "zonal";
      r.constant = c3(q, r.Q, g, kappa);
      r.exponent = 0.5 * (1.0 + 4.0 * g / q);
      r.threshold = kappa * std::pow(q, 1.5) * std::log(q) *
                    (3.0 * std::pow(q + 1.0, g) + 6.0);
      break;
    case KernelKind::Laplace:
      r.theorem = "laplace";
      r.constant = c4(q, r.Q, kappa);
      r.exponent = 0.5 * (1.0 + 2.0 / q);
      r.threshold = 3.0 * q + 9.0;
      break;
    case KernelKind::Custom:
      throw ConfigError("no closed-form bound for custom kernels");
  }
  for (double n : Ns) {
    r.N.push_back(n);
    r.value.push_back(r.at(n));
  }
  return r;
}

void print_report(std::ostream& os, const BoundReport& r) {
  auto line = [&](const char* key, const std::string& v) {
    os << std::left << std::setw(12) << key << v << '\n';
  };
  auto num = [](double v) { return format_double(v); };
  line("kernel", r.kernel);
  line("theorem", r.theorem);
  line("q", num(r.q));
  line("Q", num(r.Q));
  if (r.kernel != "laplace") line("gamma", num(r.gamma));
  line("alpha", num(r.alpha));
  line("r", num(r.r));
  line("R", num(r.R));
  line("u", num(r.u));
  line("s", num(r.s));
  if (r.lambda != 0.0) line("lambda", num(r.lambda));
  if (r.a != 0.0) line("a", num(r.a));
  line("kappa", num(r.kappa));
  line("c_T", num(r.c_T));
  line("c_X", num(r.c_X));
  line("Xi", num(r.xi));
  if (r.theta != 0.0) line("Theta<=", num(r.theta));
  line("D_R", num(r.D_R));
  line("constant", num(r.constant));
  line("exponent", num(r.exponent));
  line("N >=", num(r.threshold));
  if (r.alt_constant != 0.0) {
    line("alt const", num(r.alt_constant));
    line("alt expo", num(r.alt_exponent));
  }
  for (const auto& n : r.notes) line("note", n);
  for (std::size_t i = 0; i < r.N.size(); ++i) {
    std::ostringstream key;
    key << "bound N=" << r.N[i];
    os << std::left << std::setw(16) << key.str() << num(r.value[i]) << '\n';
  }
}

void print_report_rows(std::ostream& os, const BoundReport& r) {
  os << "kernel,theorem,q,Q,gamma,kappa,xi,constant,exponent,threshold,N,bound\n";
  for (std::size_t i = 0; i < r.N.size(); ++i)
    os << r.kernel << ',' << r.theorem << ',' << r.q << ',' << r.Q << ','
       << format_double(r.gamma) << ',' << format_double(r.kappa) << ','
       << format_double(r.xi) << ',' << format_double(r.constant) << ','
       << format_double(r.exponent) << ',' << format_double(r.threshold)
       << ',' << format_double(r.N[i]) << ',' << format_double(r.value[i])
       << '\n';
}

double cap_fraction(int q, double delta) {
  if (q < 1) throw DomainError("cap_fraction: q must be >= 1");
  delta = std::clamp(delta, 0.0, kPi);
  auto integral = [q](double upper) {
    const int n = 2000;
    const double h = upper / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += w * std::pow(std::sin(i * h), q - 1);
    }
    return acc * h / 3.0;
  };
  return integral(delta) / integral(kPi);
}

double estimate_xi(const SignedAtomMeasure& tau, int probes, Rng& rng) {
  const Space& Y = tau.space();
  if (!Y.is_sphere()) throw DomainError("estimate_xi: sphere measures only");
  if (probes < 1) throw DomainError("estimate_xi: probes must be >= 1");
  std::uniform_real_distribution<double> unif(0.1, kPi);
  const double tv = tau.total_variation();
  double best = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Point y = Y.sample_uniform(rng);
    const double delta = unif(rng);
    const double mass = ball_mass(tau, y, delta * 2.0 / kPi);
    best = std::max(best, mass / (tv * cap_fraction(Y.dim(), delta)));
  }
  return best;
}

ThetaEstimate estimate_theta(const SignedAtomMeasure& tau,
                             const KernelSpec& kernel, const PointCloud& xs,
                             std::span<const double> eps_grid) {
  ThetaEstimate out;
  if (!kernel.has_singular_set()) {
    out.empty = true;
    return out;
  }
  const double tv = tau.total_variation();
  std::vector<double> lx, ly;
  std::vector<std::pair<double, double>> samples;
  for (Eigen::Index i = 0; i < xs.cols(); ++i) {
    for (double eps : eps_grid) {
      if (!(eps > 0.0) || eps >= 2.0) continue;
      const double frac = tube_mass(tau, kernel, xs.col(i), eps) / tv;
      if (frac <= 0.0) continue;
      lx.push_back(std::log(eps));
      ly.push_back(std::log(frac));
      samples.emplace_back(eps, frac);
    }
  }
  if (lx.size() < 2) throw DomainError("estimate_theta: too few usable points");
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  if (sxx == 0.0) throw DomainError("estimate_theta: eps grid has one value");
  out.slope = sxy / sxx;
  out.s = kernel.q() - out.slope;
  for (const auto& [eps, frac] : samples)
    out.theta = std::max(out.theta, frac / std::pow(eps, out.slope));
  return out;
}

}  // namespace gnet
