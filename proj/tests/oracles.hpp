#pragma once

#include <chaoskit/measures.hpp>
#include <chaoskit/quadrature.hpp>
#include <chaoskit/recurrence.hpp>
#include <chaoskit/types.hpp>

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using chaoskit::CanonicalKind;

inline long double binom(int n, int k) {
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Raw moments E[t^k], k = 0..kmax, from closed-form expressions.
inline std::vector<long double> moments(CanonicalKind kind, int kmax, double a = 0.0,
                                        double b = 0.0) {
  std::vector<long double> m(kmax + 1, 0.0L);
  switch (kind) {
    case CanonicalKind::gaussian:
    case CanonicalKind::hermite: {
      const long double var = kind == CanonicalKind::gaussian ? 1.0L : 0.5L;
      m[0] = 1.0L;
      for (int k = 2; k <= kmax; k += 2) m[k] = m[k - 2] * (k - 1) * var;
      break;
    }
    case CanonicalKind::uniform01:
      for (int k = 0; k <= kmax; ++k) m[k] = 1.0L / (k + 1);
      break;
    case CanonicalKind::legendre:
      for (int k = 0; k <= kmax; k += 2) m[k] = 1.0L / (k + 1);
      break;
    case CanonicalKind::beta01:
      m[0] = 1.0L;
      for (int k = 1; k <= kmax; ++k) m[k] = m[k - 1] * (a + k - 1) / (a + b + k - 1);
      break;
    case CanonicalKind::gamma:
      m[0] = 1.0L;
      for (int k = 1; k <= kmax; ++k) m[k] = m[k - 1] * (a + k - 1) / b;
      break;
    case CanonicalKind::laguerre:
      m[0] = 1.0L;
      for (int k = 1; k <= kmax; ++k) m[k] = m[k - 1] * k;
      break;
    case CanonicalKind::jacobi: {
      // t = 2 s - 1 with s ~ Beta(b + 1, a + 1).
      const auto s = moments(CanonicalKind::beta01, kmax, b + 1.0, a + 1.0);
      for (int k = 0; k <= kmax; ++k) {
        long double acc = 0.0L;
        for (int j = 0; j <= k; ++j) {
          acc += binom(k, j) * std::pow(2.0L, j) * ((k - j) % 2 ? -1.0L : 1.0L) * s[j];
        }
        m[k] = acc;
      }
      break;
    }
  }
  return m;
}

/// Recurrence coefficients from 2n raw moments (Chebyshev algorithm), long double.
inline chaoskit::RecurrenceCoefficients chebyshev(const std::vector<long double>& mu,
                                                  std::size_t n) {
  if (mu.size() < 2 * n) throw std::invalid_argument("need 2n moments");
  const std::size_t m = 2 * n;
  std::vector<std::vector<long double>> sigma(n + 1, std::vector<long double>(m, 0.0L));
  std::vector<long double> alpha(n), beta(n);
  for (std::size_t l = 0; l < m; ++l) sigma[1][l] = mu[l];
  alpha[0] = mu[1] / mu[0];
  beta[0] = mu[0];
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t l = k; l < m - k; ++l) {
      sigma[k + 1][l] = sigma[k][l + 1] - alpha[k - 1] * sigma[k][l] - beta[k - 1] * sigma[k - 1][l];
    }
    alpha[k] = sigma[k + 1][k + 1] / sigma[k + 1][k] - sigma[k][k] / sigma[k][k - 1];
    beta[k] = sigma[k + 1][k] / sigma[k][k - 1];
  }
  chaoskit::RecurrenceCoefficients rc;
  for (std::size_t k = 0; k < n; ++k) {
    rc.alpha.push_back(static_cast<double>(alpha[k]));
    rc.beta.push_back(static_cast<double>(beta[k]));
  }
  return rc;
}

/// Number of eigenvalues of T below x (Sturm sequence count).
inline std::size_t sturm_count(const chaoskit::SymTridiagonal& t, double x) {
  std::size_t count = 0;
  long double q = 1.0L;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const long double e2 = i == 0 ? 0.0L
                                  : static_cast<long double>(t.subdiagonal[i - 1]) *
                                        t.subdiagonal[i - 1];
    q = t.diagonal[i] - x - (i == 0 ? 0.0L : e2 / q);
    if (q == 0.0L) q = -1e-300L;
    if (q < 0.0L) ++count;
  }
  return count;
}

/// k-th smallest eigenvalue by bisection on the Gershgorin interval.
inline double bisect_eigenvalue(const chaoskit::SymTridiagonal& t, std::size_t k) {
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.subdiagonal[i - 1]);
    if (i + 1 < t.size()) r += std::abs(t.subdiagonal[i]);
    lo = std::min(lo, t.diagonal[i] - r);
    hi = std::max(hi, t.diagonal[i] + r);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(t, mid) > k) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// Integral of f against the measure density with an M-node Fejer rule on the
/// truncated support.
inline double brute_integral(const chaoskit::Measure& m, const std::function<double(double)>& f,
                             std::size_t nodes = 10000, std::size_t degree = 16) {
  const auto rule = chaoskit::fejer1_rule(nodes, m.truncated_support(degree));
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    s += rule.weights[i] * m.density(rule.nodes[i]) * f(rule.nodes[i]);
  }
  return s;
}

/// Rule integrating polynomials of degree < 60 against `m` exactly: closed-form
/// Gauss rules for canonical measures and their weighted union for mixtures of
/// canonical components. Anything else falls back to a 20000-node Fejer rule.
inline chaoskit::QuadratureRule truth_rule(const chaoskit::Measure& m) {
  using namespace chaoskit;
  if (m.canonical()) return gauss_rule(closed_form_coefficients(*m.canonical(), 30), 30);
  bool canonical_parts = m.has_components();
  for (const auto& c : m.components()) canonical_parts = canonical_parts && c.measure->canonical();
  QuadratureRule r;
  if (canonical_parts) {
    for (const auto& c : m.components()) {
      const auto g = gauss_rule(closed_form_coefficients(*c.measure->canonical(), 30), 30);
      for (std::size_t i = 0; i < g.size(); ++i) {
        r.nodes.push_back(g.nodes[i]);
        r.weights.push_back(c.weight * g.weights[i]);
      }
    }
    return r;
  }
  const auto f = fejer1_rule(20000, m.truncated_support(60));
  for (std::size_t i = 0; i < f.size(); ++i) {
    r.nodes.push_back(f.nodes[i]);
    r.weights.push_back(f.weights[i] * m.density(f.nodes[i]));
  }
  return r;
}

/// phi_k(t) by Horner's rule on ascending monomial coefficients.
inline double horner(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
  return v;
}

}  // namespace oracle
