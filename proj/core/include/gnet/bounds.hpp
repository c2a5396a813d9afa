#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gnet/kernels.hpp"

namespace gnet {

/// a = (2R - 2r) / (q - s + 2u); requires R >= r and q - s + 2u > 2R - 2r.
double exponent_a(double R, double r, double q, double s, double u);

/// lambda = (2R - 2 gamma) / (2R - 2 gamma + 1), R >= gamma.
double lambda_relu(double R, double gamma);

/// Parameters of a kernel class member for the general theorems.
struct GeneralParams {
  double q = 2;
  double Q = 2;
  double R = 1;
  double r = 1;
  double u = 0;
  double s = 0;
  double alpha = 1;
  double G_norm = 1;  ///< |G|_G
  double tv = 1;      ///< |tau|_TV
};

struct GeneralBound {
  double a = 0.0;
  double constant = 0.0;   ///< c1 or c1'
  double exponent = 0.0;   ///< power of N under the sqrt(1 + log N) factor
  double value = 0.0;
  double threshold = 0.0;  ///< smallest N the theorem covers
  std::vector<std::string> notes;
};

double c1(const GeneralParams& p, double c_T, double c_X, double theta,
          double D_R);
double c1_prime(const GeneralParams& p, double c_T, double c_X, double D_R);

/// Singular set with tube exponent s: c1 |G| |tau| sqrt(1+log N) /
/// N^{1/2 + (R - u a)/q}, threshold 3 c_T (D_R+2) (q-s)^{q/(1-a)}.
GeneralBound bound_general(double N, const GeneralParams& p, double c_T,
                           double c_X, double theta, double D_R);
/// Empty or one-point singular set: c1' with exponent
/// min(1/2 + R/q, 1 + r/q), threshold 3 c_T (D_R + 2).
GeneralBound bound_general_point(double N, const GeneralParams& p, double c_T,
                                 double c_X, double D_R);

/// ReLU^gamma, q = Q.
double c2_equal(double q, double R, double kappa, double xi);
/// ReLU^gamma, q < Q.
double c2_lower(double q, double Q, double gamma, double kappa);
/// ReLU^gamma, integer gamma, q = Q.
double c2_prime(double q, double gamma, double kappa, double xi);
/// (1 - x.y)^gamma, gamma not an integer.
double c3(double q, double Q, double gamma, double kappa);
/// exp(-|x - y|) on balls.
double c4(double q, double Q, double kappa_b);

/// Tube constant bound 3 pi Xi kappa q^{3/2} log q.
double theta_bound(double xi, double kappa, double q);
/// Tube constant of the uniform measure for the ReLU equator: 2 sqrt((Q+2)/pi).
double theta_uniform_sphere(double Q);

/// c * tv * sqrt(1 + log N) / N^p.
double rate_value(double c, double tv, double p, double N);

struct BoundReport {
  std::string kernel;
  std::string theorem;
  double q = 0, Q = 0, gamma = 0, R = 0, r = 0, u = 0, s = 0, alpha = 1;
  double lambda = 0;
  double a = 0;
  double kappa = 1;
  double c_T = 0;
  double c_X = 0;
  double xi = 1;
  double theta = 0;
  double D_R = 0;
  double tv = 1;
  double constant = 0;
  double exponent = 0;
  double threshold = 0;
  /// Secondary valid bound (the general-gamma form when gamma is an integer); 0 if none.
  double alt_constant = 0;
  double alt_exponent = 0;
  std::vector<double> N;
  std::vector<double> value;
  std::vector<std::string> notes;

  double at(double n) const { return rate_value(constant, tv, exponent, n); }
};

/// Closed-form bound for a concrete kernel at each N.
BoundReport bound_kernel(const KernelSpec& kernel, std::span<const double> Ns,
                         double kappa = 1.0, double xi = 1.0, double tv = 1.0);

void print_report(std::ostream& os, const BoundReport& r);
/// `kernel,theorem,q,Q,gamma,kappa,xi,constant,exponent,threshold,N,bound`
/// lines, one per N.
void print_report_rows(std::ostream& os, const BoundReport& r);

/// Normalized surface measure of a geodesic cap of radius delta on S^q.
double cap_fraction(int q, double delta);

/// Largest sampled |tau|(B*(y, delta)) / (|tau| mu*(B*(y, delta))) over
/// `probes` random centers and geodesic radii in [0.1, pi]; spheres only.
double estimate_xi(const SignedAtomMeasure& tau, int probes, Rng& rng);

struct ThetaEstimate {
  double theta = 0.0;   ///< max tube fraction / eps^{q - s}
  double s = 0.0;       ///< q minus the fitted log-log slope
  double slope = 0.0;
  bool empty = false;   ///< singular set empty; no estimate
};

/// Pooled log-log fit of tube fractions over the eps grid (points with
/// eps >= 2 or zero mass are skipped), maximized over the x samples.
ThetaEstimate estimate_theta(const SignedAtomMeasure& tau,
                             const KernelSpec& kernel, const PointCloud& xs,
                             std::span<const double> eps_grid);

}  // namespace gnet
