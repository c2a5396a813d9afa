#pragma once

// Independent re-derivations used as test oracles. Written from the closed
// forms directly, in log space where that keeps them distinct from core.

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Pascal's triangle, no factorials.
inline long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<long> row(static_cast<std::size_t>(k) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = std::min(i, k); j >= 1; --j)
      row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
  return row[static_cast<std::size_t>(k)];
}

inline double tractable(double kappa, double q) {
  return std::exp(std::log(kappa) + 1.5 * std::log(q) + std::log(std::log(q)));
}

inline double a(double R, double r, double q, double s, double u) {
  return 2.0 * (R - r) / (q - s + 2.0 * u);
}

inline double lambda(double R, double gamma) {
  const double t = 2.0 * (R - gamma);
  return 1.0 - 1.0 / (t + 1.0);
}

struct Params {
  double q, Q, R, r, u, s, alpha;
};

inline double c1(const Params& p, double cT, double cX, double theta,
                 double D) {
  const double av = a(p.R, p.r, p.q, p.s, p.u);
  const double expo = (p.q + 2.0 * (p.R - p.u * av)) / (2.0 * p.q);
  const double log_head =
      std::log(4.0) + 1.0 + expo * (std::log(cT) + std::log(3.0 * (D + 2.0)));
  const double bracket =
      std::sqrt((theta + 1.0) *
                (p.Q * (p.q + 2.0 * p.R - 2.0 * p.u * av) / (2.0 * p.alpha) +
                 std::log(cX)) /
                cT) +
      1.0;
  return std::exp(log_head) * bracket;
}

inline double c1_prime(const Params& p, double cT, double cX, double D) {
  const double expo = (p.q + p.R) / p.q;
  const double log_head = std::log(8.0) + expo * std::log(cT * (3.0 * D + 6.0));
  const double bracket =
      std::sqrt((p.Q * (p.q + 2.0 * p.R) / (2.0 * p.alpha) + std::log(cX)) /
                cT) +
      1.0;
  return std::exp(log_head) * bracket;
}

inline double c2_equal(double q, double R, double kappa, double xi) {
  const double base = tractable(kappa, q) * (3.0 * std::pow(q + 1.0, R + 1.0) + 6.0);
  const double log_head = std::log(16.0) + 0.5 * std::log(pi) + 1.0 +
                          std::log(kappa) + R * std::log(2.0 * pi) +
                          (0.5 + R / q) * std::log(base);
  return std::exp(log_head) *
         (1.0 + std::sqrt(6.0 * xi) * (q + 2.0 * R + std::log(kappa) + 2.0 * std::log(q)));
}

inline double c2_lower(double q, double Q, double gamma, double kappa) {
  const double cT = tractable(kappa, q);
  const double base = cT * (3.0 * std::pow(q + 1.0, gamma) + 6.0);
  const double log_head = std::log(16.0 * kappa) + gamma * std::log(pi) +
                          (1.0 + gamma / q) * std::log(base);
  const double inner = 0.5 * Q * (q + 2.0 * gamma) + std::log(kappa) + 2.0 * std::log(Q);
  return std::exp(log_head) * (1.0 + std::sqrt(inner / cT));
}

inline double c2_prime(double q, double gamma, double kappa, double xi) {
  const double base =
      tractable(kappa, q) * (3.0 * std::pow(q + 1.0, gamma) + 6.0);
  const double log_head = std::log(32.0) + 0.5 * std::log(pi) + 1.0 +
                          std::log(kappa) + gamma * std::log(2.0 * pi) +
                          (1.0 + (gamma + 1.0) / q) * std::log(base);
  return std::exp(log_head) *
         (1.0 + std::sqrt(6.0 * xi) *
                    (q + gamma + 1.0 + std::log(kappa) + 2.0 * std::log(q)));
}

inline double c3(double q, double Q, double gamma, double kappa) {
  const double cT = tractable(kappa, q);
  const double base = cT * (3.0 * std::pow(q + 1.0, 2.0 * gamma + 1.0) + 6.0);
  const double log_head = std::log(8.0 * kappa) + 2.0 * gamma * std::log(pi) +
                          (1.0 + 2.0 * gamma / q) * std::log(base);
  const double inner = 0.5 * Q * (q + 2.0 * gamma) + std::log(kappa) + 2.0 * std::log(Q);
  return std::exp(log_head) * (1.0 + std::sqrt(inner / cT));
}

inline double c4(double q, double Q, double kappa_b) {
  const double cB = tractable(kappa_b, q);
  const double log_head = std::log(8.0) + (1.0 + 1.0 / q) * std::log(cB * 3.0 * (q + 3.0));
  const double inner = (q + 2.0) * Q / 2.0 + std::log(Q * Q * kappa_b);
  return std::exp(log_head) * (1.0 + std::sqrt(inner / cB));
}

inline double theta_bound(double xi, double kappa, double q) {
  return 3.0 * pi * xi * tractable(kappa, q);
}

inline bool close(double got, double want, double rel) {
  return std::abs(got - want) <= rel * std::max(1.0, std::abs(want));
}

/// Product of coordinate powers, one multi-index at a time.
inline double monomial(const Eigen::VectorXd& y, const std::vector<int>& e) {
  double v = 1.0;
  for (std::size_t j = 0; j < e.size(); ++j)
    for (int t = 0; t < e[j]; ++t) v *= y[static_cast<Eigen::Index>(j)];
  return v;
}

/// All multi-indices over `vars` variables with total degree <= `deg`.
inline std::vector<std::vector<int>> multi_indices(int vars, int deg) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(vars), 0);
  auto rec = [&](auto&& self, int j, int left) -> void {
    if (j == vars) {
      out.push_back(cur);
      return;
    }
    for (int d = 0; d <= left; ++d) {
      cur[static_cast<std::size_t>(j)] = d;
      self(self, j + 1, left - d);
    }
    cur[static_cast<std::size_t>(j)] = 0;
  };
  rec(rec, 0, deg);
  return out;
}

}  // namespace oracle
