#include "chaoskit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

constexpr double pi = std::numbers::pi;

void require_coefficients(const RecurrenceCoefficients& rc, std::size_t needed, const char* who) {
  if (rc.size() < needed || rc.beta.size() < needed) {
    throw InsufficientCoefficientsError(std::string(who) + ": need " + std::to_string(needed) +
                                        " recurrence pairs, have " + std::to_string(rc.size()));
  }
}

// Eigen-decomposition of the Jacobi matrix with (possibly modified) last entries.
QuadratureRule golub_welsch(std::vector<double> diag, std::vector<double> beta_tail, double beta0,
                            QuadratureKind kind) {
  SymTridiagonal jacobi;
  jacobi.diagonal = std::move(diag);
  jacobi.subdiagonal.reserve(beta_tail.size());
  for (double b : beta_tail) {
    if (!(b > 0.0)) throw BreakdownError("Jacobi matrix has non-positive beta coefficient");
    jacobi.subdiagonal.push_back(std::sqrt(b));
  }
  auto eig = symtridiag_eigen(jacobi);

  QuadratureRule rule;
  rule.kind = kind;
  rule.nodes = std::move(eig.eigenvalues);
  rule.weights.reserve(rule.nodes.size());
  for (double v : eig.first_components) {
    const double w = beta0 * v * v;
    if (!(w > 0.0)) {
      throw NegativeWeightError(std::string(to_string(kind)) +
                                " rule produced a non-positive weight");
    }
    rule.weights.push_back(w);
  }
  return rule;
}

// phi_{k}(x) and phi_{k-1}(x) by forward recurrence.
std::pair<double, double> monic_pair(const RecurrenceCoefficients& rc, std::size_t k, double x) {
  double prev = 0.0;
  double cur = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double next = (x - rc.alpha[j]) * cur - rc.beta[j] * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

bool strictly_inside(double x, Interval support) {
  const double scale = std::max({1.0, std::abs(support.lo), std::abs(support.hi)});
  const double tol = 1e-12 * (std::isfinite(scale) ? scale : 1.0);
  return x > support.lo + tol && x < support.hi - tol;
}

QuadratureRule map_reference(std::vector<double> ref_nodes, std::vector<double> ref_weights,
                             Interval interval, QuadratureKind kind) {
  if (!interval.bounded()) {
    throw TruncationRequiredError(std::string(to_string(kind)) +
                                  " rule needs a finite interval; truncate the support first");
  }
  if (!(interval.lo < interval.hi)) throw DomainError("quadrature interval must have lo < hi");
  const double mid = 0.5 * (interval.lo + interval.hi);
  const double half = 0.5 * (interval.hi - interval.lo);
  QuadratureRule rule;
  rule.kind = kind;
  rule.nodes.resize(ref_nodes.size());
  rule.weights.resize(ref_weights.size());
  for (std::size_t i = 0; i < ref_nodes.size(); ++i) {
    rule.nodes[i] = mid + half * ref_nodes[i];
    rule.weights[i] = half * ref_weights[i];
  }
  return rule;
}

}  // namespace

std::string_view to_string(QuadratureKind kind) {
  switch (kind) {
    case QuadratureKind::gauss: return "gauss";
    case QuadratureKind::gauss_radau: return "gauss_radau";
    case QuadratureKind::gauss_lobatto: return "gauss_lobatto";
    case QuadratureKind::fejer1: return "fejer1";
    case QuadratureKind::fejer2: return "fejer2";
    case QuadratureKind::clenshaw_curtis: return "clenshaw_curtis";
  }
  return "unknown";
}

QuadratureRule gauss_rule(const RecurrenceCoefficients& rc, std::size_t n) {
  if (n == 0) throw DomainError("gauss_rule: n must be positive");
  require_coefficients(rc, n, "gauss_rule");
  std::vector<double> diag(rc.alpha.begin(), rc.alpha.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> tail(rc.beta.begin() + 1, rc.beta.begin() + static_cast<std::ptrdiff_t>(n));
  return golub_welsch(std::move(diag), std::move(tail), rc.beta[0], QuadratureKind::gauss);
}

QuadratureRule gauss_radau_rule(const RecurrenceCoefficients& rc, std::size_t n, double endpoint,
                                Interval support) {
  if (n == 0) throw DomainError("gauss_radau_rule: n must be positive");
  if (strictly_inside(endpoint, support)) {
    throw InvalidEndpointError("gauss_radau_rule: endpoint lies inside the support");
  }
  require_coefficients(rc, n, "gauss_radau_rule");
  const std::size_t last = n - 1;
  const auto [p_last, p_prev] = monic_pair(rc, last, endpoint);
  if (p_last == 0.0) throw InvalidEndpointError("gauss_radau_rule: endpoint is a Gauss node");

  std::vector<double> diag(rc.alpha.begin(), rc.alpha.begin() + static_cast<std::ptrdiff_t>(n));
  diag[last] = endpoint - rc.beta[last] * p_prev / p_last;
  std::vector<double> tail(rc.beta.begin() + 1, rc.beta.begin() + static_cast<std::ptrdiff_t>(n));
  auto rule =
      golub_welsch(std::move(diag), std::move(tail), rc.beta[0], QuadratureKind::gauss_radau);
  // The prescribed node is exact mathematically; remove eigensolver rounding.
  auto& pinned = std::abs(rule.nodes.front() - endpoint) <= std::abs(rule.nodes.back() - endpoint)
                     ? rule.nodes.front()
                     : rule.nodes.back();
  pinned = endpoint;
  return rule;
}

QuadratureRule gauss_lobatto_rule(const RecurrenceCoefficients& rc, std::size_t n, double left,
                                  double right, Interval support) {
  if (n < 2) throw DomainError("gauss_lobatto_rule: n must be at least 2");
  if (!(left < right)) throw InvalidEndpointError("gauss_lobatto_rule: need left < right");
  if (strictly_inside(left, support) || strictly_inside(right, support)) {
    throw InvalidEndpointError("gauss_lobatto_rule: endpoint lies inside the support");
  }
  const std::size_t last = n - 1;
  require_coefficients(rc, last, "gauss_lobatto_rule");

  const auto [pl, pl_prev] = monic_pair(rc, last, left);
  const auto [pr, pr_prev] = monic_pair(rc, last, right);
  const double det = pl * pr_prev - pr * pl_prev;
  if (det == 0.0) throw InvalidEndpointError("gauss_lobatto_rule: singular endpoint system");

  std::vector<double> diag(rc.alpha.begin(), rc.alpha.begin() + static_cast<std::ptrdiff_t>(last));
  diag.push_back((left * pl * pr_prev - right * pr * pl_prev) / det);
  std::vector<double> tail(rc.beta.begin() + 1,
                           rc.beta.begin() + static_cast<std::ptrdiff_t>(last));
  tail.push_back((right - left) * pl * pr / det);
  auto rule =
      golub_welsch(std::move(diag), std::move(tail), rc.beta[0], QuadratureKind::gauss_lobatto);
  rule.nodes.front() = left;
  rule.nodes.back() = right;
  return rule;
}

namespace {

// cos/sin of start + j step for j = 1, 2, ... by repeated complex rotation.
class Rotation {
 public:
  explicit Rotation(double step) : Rotation(step, step) {}
  Rotation(double step, double start)
      : c_(std::cos(start)), s_(std::sin(start)), dc_(std::cos(step)), ds_(std::sin(step)) {}

  double cos() const { return c_; }
  double sin() const { return s_; }
  void advance() {
    const double c = c_ * dc_ - s_ * ds_;
    s_ = s_ * dc_ + c_ * ds_;
    c_ = c;
  }

 private:
  double c_, s_, dc_, ds_;
};

}  // namespace

QuadratureRule fejer1_rule(std::size_t n, Interval interval) {
  if (n == 0) throw DomainError("fejer1_rule: n must be positive");
  std::vector<double> x(n);
  std::vector<double> w(n);
  const double dn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = (2.0 * static_cast<double>(n - 1 - k) + 1.0) * pi / (2.0 * dn);
    // sin form keeps the nodes exactly antisymmetric (and 0 for odd n).
    x[k] = std::sin((2.0 * static_cast<double>(k) + 1.0 - dn) * pi / (2.0 * dn));
    if (n - 1 - k < k) {
      w[k] = w[n - 1 - k];
      continue;
    }
    double s = 0.0;
    Rotation r(2.0 * theta);
    for (std::size_t j = 1; j <= n / 2; ++j) {
      const double dj = static_cast<double>(j);
      s += r.cos() / (4.0 * dj * dj - 1.0);
      r.advance();
    }
    w[k] = 2.0 / dn * (1.0 - 2.0 * s);
  }
  return map_reference(std::move(x), std::move(w), interval, QuadratureKind::fejer1);
}

QuadratureRule fejer2_rule(std::size_t n, Interval interval) {
  if (n == 0) throw DomainError("fejer2_rule: n must be positive");
  std::vector<double> x(n);
  std::vector<double> w(n);
  const double np1 = static_cast<double>(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = static_cast<double>(n - k) * pi / np1;
    x[k] = std::sin((2.0 * static_cast<double>(k + 1) - np1) * pi / (2.0 * np1));
    if (n - 1 - k < k) {
      w[k] = w[n - 1 - k];
      continue;
    }
    double s = 0.0;
    // sin((2j - 1) theta) as the imaginary part of a rotation by 2 theta.
    Rotation r(2.0 * theta, theta);
    for (std::size_t j = 1; j <= (n + 1) / 2; ++j) {
      const double odd = 2.0 * static_cast<double>(j) - 1.0;
      s += r.sin() / odd;
      r.advance();
    }
    w[k] = 4.0 * std::sin(theta) / np1 * s;
  }
  return map_reference(std::move(x), std::move(w), interval, QuadratureKind::fejer2);
}

QuadratureRule clenshaw_curtis_rule(std::size_t n, Interval interval) {
  if (n < 2) throw DomainError("clenshaw_curtis_rule: n must be at least 2");
  const std::size_t big_n = n - 1;
  const double dn = static_cast<double>(big_n);
  std::vector<double> x(n);
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = static_cast<double>(big_n - k) * pi / dn;
    x[k] = std::sin((2.0 * static_cast<double>(k) - dn) * pi / (2.0 * dn));
    if (big_n - k < k) {
      w[k] = w[big_n - k];
      continue;
    }
    double s = 0.0;
    Rotation r(2.0 * theta);
    for (std::size_t j = 1; j <= big_n / 2; ++j) {
      const double dj = static_cast<double>(j);
      const double b = (2 * j == big_n) ? 1.0 : 2.0;
      s += b * r.cos() / (4.0 * dj * dj - 1.0);
      r.advance();
    }
    const double c = (k == 0 || k == big_n) ? 1.0 : 2.0;
    w[k] = c / dn * (1.0 - s);
  }
  return map_reference(std::move(x), std::move(w), interval, QuadratureKind::clenshaw_curtis);
}

}  // namespace chaoskit
