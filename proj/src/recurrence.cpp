#include "chaoskit/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

constexpr double kOrthogonalityTol = 1e-8;

void require_degree(std::size_t n, const char* who) {
  if (n == 0) throw DomainError(std::string(who) + ": at least one coefficient pair required");
}

void check_discrete(std::span<const double> nodes, std::span<const double> weights, std::size_t n,
                    const char* who) {
  require_degree(n, who);
  if (nodes.size() != weights.size()) throw ShapeError(std::string(who) + ": nodes/weights differ");
  if (nodes.size() < n) {
    throw DomainError(std::string(who) + ": discretization has fewer nodes (" +
                      std::to_string(nodes.size()) + ") than requested coefficients (" +
                      std::to_string(n) + ")");
  }
}

// Monic Jacobi coefficients for (1-x)^a (1+x)^b on [-1, 1], unit mass.
RecurrenceCoefficients jacobi_coefficients(std::size_t n, double a, double b) {
  RecurrenceCoefficients rc;
  rc.alpha.resize(n);
  rc.beta.resize(n);
  rc.alpha[0] = (b - a) / (a + b + 2.0);
  rc.beta[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double dk = static_cast<double>(k);
    const double nab = 2.0 * dk + a + b;
    rc.alpha[k] = (b * b - a * a) / (nab * (nab + 2.0));
    if (k == 1) {
      rc.beta[k] = 4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0));
    } else {
      rc.beta[k] = 4.0 * (dk + a) * (dk + b) * dk * (dk + a + b) /
                   (nab * nab * (nab + 1.0) * (nab - 1.0));
    }
  }
  return rc;
}

bool agree(const RecurrenceCoefficients& a, const RecurrenceCoefficients& b, double tol) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a.alpha[k] - b.alpha[k]) > tol * std::max(1.0, std::abs(b.alpha[k]))) return false;
    if (std::abs(a.beta[k] - b.beta[k]) > tol * std::max(1.0, std::abs(b.beta[k]))) return false;
  }
  return true;
}

std::vector<double> flatten(const RecurrenceCoefficients& rc) {
  std::vector<double> v = rc.alpha;
  v.insert(v.end(), rc.beta.begin(), rc.beta.end());
  return v;
}

QuadratureRule component_rule(const Measure& component, std::size_t nodes, std::size_t n) {
  if (component.canonical()) {
    return gauss_rule(closed_form_coefficients(*component.canonical(), nodes), nodes);
  }
  if (component.has_components()) {
    return gauss_rule(multiple_discretization(component, nodes), nodes);
  }
  return discretize(component, nodes, DiscretizationRule::fejer1, 2 * n);
}

std::size_t default_nodes(const DiscretizationConfig& disc, std::size_t n) {
  return disc.nodes != 0 ? disc.nodes : std::max<std::size_t>(10 * n, 1000);
}

}  // namespace

std::string_view to_string(RecurrenceSource source) {
  switch (source) {
    case RecurrenceSource::closed_form: return "closed_form";
    case RecurrenceSource::stieltjes: return "stieltjes";
    case RecurrenceSource::lanczos: return "lanczos";
    case RecurrenceSource::multiple_discretization: return "multiple_discretization";
  }
  return "unknown";
}

QuadratureRule discretize(const Measure& m, std::size_t nodes, DiscretizationRule rule,
                          std::size_t moment_degree) {
  const Interval support = m.truncated_support(moment_degree);
  QuadratureRule q;
  switch (rule) {
    case DiscretizationRule::fejer1: q = fejer1_rule(nodes, support); break;
    case DiscretizationRule::fejer2: q = fejer2_rule(nodes, support); break;
    case DiscretizationRule::clenshaw_curtis: q = clenshaw_curtis_rule(nodes, support); break;
  }
  for (std::size_t i = 0; i < q.size(); ++i) q.weights[i] *= m.density(q.nodes[i]);
  return q;
}

RecurrenceCoefficients closed_form_coefficients(const CanonicalParams& params, std::size_t n) {
  require_degree(n, "closed_form_coefficients");
  RecurrenceCoefficients rc;
  rc.alpha.assign(n, 0.0);
  rc.beta.assign(n, 1.0);
  const double a = params.alpha;
  const double b = params.beta;

  switch (params.kind) {
    case CanonicalKind::gaussian:
      for (std::size_t k = 1; k < n; ++k) rc.beta[k] = static_cast<double>(k);
      break;
    case CanonicalKind::hermite:
      for (std::size_t k = 1; k < n; ++k) rc.beta[k] = 0.5 * static_cast<double>(k);
      break;
    case CanonicalKind::uniform01:
      for (std::size_t k = 0; k < n; ++k) rc.alpha[k] = 0.5;
      for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k * k);
        rc.beta[k] = kk / (4.0 * (4.0 * kk - 1.0));
      }
      break;
    case CanonicalKind::legendre:
      for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k * k);
        rc.beta[k] = kk / (4.0 * kk - 1.0);
      }
      break;
    case CanonicalKind::jacobi:
      if (!(a > -1.0) || !(b > -1.0)) throw DomainError("jacobi parameters must exceed -1");
      rc = jacobi_coefficients(n, a, b);
      break;
    case CanonicalKind::beta01: {
      if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta01 shape parameters must be positive");
      // t = (x + 1)/2 maps Jacobi(b - 1, a - 1) on [-1, 1] onto Beta(a, b) on [0, 1].
      rc = jacobi_coefficients(n, b - 1.0, a - 1.0);
      for (std::size_t k = 0; k < n; ++k) rc.alpha[k] = 0.5 * (1.0 + rc.alpha[k]);
      for (std::size_t k = 1; k < n; ++k) rc.beta[k] *= 0.25;
      break;
    }
    case CanonicalKind::gamma:
      if (!(a > 0.0) || !(b > 0.0)) throw DomainError("gamma shape parameters must be positive");
      for (std::size_t k = 0; k < n; ++k) {
        const double dk = static_cast<double>(k);
        rc.alpha[k] = (2.0 * dk + a) / b;
        if (k > 0) rc.beta[k] = dk * (dk + a - 1.0) / (b * b);
      }
      break;
    case CanonicalKind::laguerre:
      for (std::size_t k = 0; k < n; ++k) {
        const double dk = static_cast<double>(k);
        rc.alpha[k] = 2.0 * dk + 1.0;
        if (k > 0) rc.beta[k] = dk * dk;
      }
      break;
  }
  rc.beta[0] = 1.0;
  rc.source = RecurrenceSource::closed_form;
  return rc;
}

RecurrenceCoefficients closed_form_coefficients(CanonicalKind kind, std::size_t n, double alpha,
                                                double beta) {
  return closed_form_coefficients(CanonicalParams{kind, alpha, beta}, n);
}

RecurrenceCoefficients stieltjes(std::span<const double> nodes, std::span<const double> weights,
                                 std::size_t n) {
  check_discrete(nodes, weights, n, "stieltjes");
  const std::size_t m = nodes.size();

  double mass = 0.0;
  for (double w : weights) mass += w;
  if (!(mass > 0.0)) throw BreakdownError("stieltjes: discrete measure has no mass");

  RecurrenceCoefficients rc;
  rc.source = RecurrenceSource::stieltjes;
  rc.alpha.resize(n);
  rc.beta.resize(n);
  rc.beta[0] = 1.0;

  // q_k = phi_k / ||phi_k||, so every inner product stays O(1).
  std::vector<double> q_prev(m, 0.0);
  std::vector<double> q(m, 1.0 / std::sqrt(mass));
  std::vector<double> p(m);

  auto alpha_of = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += weights[i] * nodes[i] * v[i] * v[i];
    return s;
  };
  rc.alpha[0] = alpha_of(q);

  double sqrt_beta_prev = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      p[i] = (nodes[i] - rc.alpha[k - 1]) * q[i] - sqrt_beta_prev * q_prev[i];
      norm2 += weights[i] * p[i] * p[i];
    }
    if (!std::isfinite(norm2)) {
      throw InstabilityError("stieltjes: overflow at degree " + std::to_string(k) +
                             "; rescale the weights and polynomials");
    }
    if (!(norm2 > 0.0)) {
      throw BreakdownError("stieltjes: beta_" + std::to_string(k) +
                           " <= 0; discretization too coarse for the requested degree");
    }
    rc.beta[k] = norm2;
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < m; ++i) {
      q_prev[i] = q[i];
      q[i] = p[i] * inv;
    }
    sqrt_beta_prev = std::sqrt(norm2);
    rc.alpha[k] = alpha_of(q);
  }
  return rc;
}

RecurrenceCoefficients stieltjes(const Measure& m, std::size_t n, const DiscretizationConfig& disc) {
  require_degree(n, "stieltjes");
  const auto q = discretize(m, default_nodes(disc, n), disc.rule, 2 * n);
  return stieltjes(q.nodes, q.weights, n);
}

RecurrenceCoefficients lanczos(std::span<const double> nodes, std::span<const double> weights,
                               std::size_t n) {
  check_discrete(nodes, weights, n, "lanczos");
  const std::size_t m = nodes.size();

  // Krylov basis of diag(nodes) started from sqrt(weights); the resulting
  // tridiagonal matrix is the Jacobi matrix of the discrete measure.
  std::vector<std::vector<double>> basis;
  basis.reserve(n);
  std::vector<double> start(m);
  double norm2 = 0.0;
  double node_scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (weights[i] < 0.0) throw DomainError("lanczos: negative discretization weight");
    start[i] = std::sqrt(weights[i]);
    norm2 += weights[i];
    node_scale = std::max(node_scale, std::abs(nodes[i]));
  }
  if (!(norm2 > 0.0)) throw BreakdownError("lanczos: discrete measure has no mass");
  for (double& v : start) v /= std::sqrt(norm2);
  basis.push_back(std::move(start));

  RecurrenceCoefficients rc;
  rc.source = RecurrenceSource::lanczos;
  rc.alpha.resize(n);
  rc.beta.resize(n);
  rc.beta[0] = 1.0;

  std::vector<double> r(m);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& q = basis[k];
    double a = 0.0;
    for (std::size_t i = 0; i < m; ++i) a += nodes[i] * q[i] * q[i];
    rc.alpha[k] = a;
    if (k + 1 == n) break;

    const double sb = k == 0 ? 0.0 : std::sqrt(rc.beta[k]);
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = (nodes[i] - a) * q[i] - (k == 0 ? 0.0 : sb * basis[k - 1][i]);
    }
    // Two passes of classical Gram-Schmidt against every previous vector.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& v : basis) {
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += v[i] * r[i];
        for (std::size_t i = 0; i < m; ++i) r[i] -= dot * v[i];
      }
    }
    double b = 0.0;
    for (double v : r) b += v * v;
    if (!std::isfinite(b)) throw InstabilityError("lanczos: non-finite residual");
    const double floor = 1e-28 * std::max(1.0, node_scale * node_scale);
    if (!(b > floor)) {
      throw BreakdownError("lanczos: beta_" + std::to_string(k + 1) +
                           " vanished; discretization too coarse for the requested degree");
    }
    rc.beta[k + 1] = b;
    std::vector<double> next(m);
    const double inv = 1.0 / std::sqrt(b);
    for (std::size_t i = 0; i < m; ++i) next[i] = r[i] * inv;

    double worst = 0.0;
    for (const auto& v : basis) {
      double dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) dot += v[i] * next[i];
      worst = std::max(worst, std::abs(dot));
    }
    if (worst > kOrthogonalityTol) {
      throw InstabilityError("lanczos: loss of orthogonality (" + std::to_string(worst) +
                             ") at step " + std::to_string(k + 1));
    }
    basis.push_back(std::move(next));
  }
  return rc;
}

RecurrenceCoefficients lanczos(const Measure& m, std::size_t n, const DiscretizationConfig& disc) {
  require_degree(n, "lanczos");
  const auto q = discretize(m, default_nodes(disc, n), disc.rule, 2 * n);
  return lanczos(q.nodes, q.weights, n);
}

RecurrenceCoefficients multiple_discretization(const Measure& m, std::size_t n,
                                               const MultipleDiscretizationOptions& opts) {
  require_degree(n, "multiple_discretization");
  if (!m.has_components()) {
    throw DomainError("multiple_discretization: measure has no component decomposition");
  }
  std::size_t per_component = opts.per_component_nodes != 0 ? opts.per_component_nodes : 2 * n + 1;

  std::optional<RecurrenceCoefficients> previous;
  RecurrenceCoefficients current;
  for (int it = 0; it < opts.max_iterations; ++it) {
    std::vector<double> nodes;
    std::vector<double> weights;
    for (const auto& c : m.components()) {
      const auto rule = component_rule(*c.measure, per_component, n);
      nodes.insert(nodes.end(), rule.nodes.begin(), rule.nodes.end());
      for (double w : rule.weights) weights.push_back(c.weight * w);
    }
    current = opts.inner == InnerProcedure::lanczos ? lanczos(nodes, weights, n)
                                                    : stieltjes(nodes, weights, n);
    current.source = RecurrenceSource::multiple_discretization;
    if (previous && agree(*previous, current, opts.tol)) return current;
    previous = current;
    per_component *= 2;
  }
  throw ConvergenceError("multiple_discretization: no convergence after " +
                             std::to_string(opts.max_iterations) + " iterations",
                         previous && opts.max_iterations > 1 ? flatten(*previous)
                                                             : std::vector<double>{},
                         flatten(current));
}

RecurrenceCoefficients recurrence_for(const Measure& m, std::size_t n) {
  if (m.canonical()) return closed_form_coefficients(*m.canonical(), n);
  if (m.has_components()) return multiple_discretization(m, n);
  return lanczos(m, n);
}

std::vector<double> expand_monic(const RecurrenceCoefficients& rc, std::size_t k) {
  if (k >= rc.size()) {
    throw IndexError("expand_monic: degree " + std::to_string(k) + " needs more than " +
                     std::to_string(rc.size()) + " recurrence pairs");
  }
  std::vector<double> prev;        // phi_{-1} = 0
  std::vector<double> cur{1.0};    // phi_0 = 1
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i + 1] += cur[i];
      next[i] -= rc.alpha[j] * cur[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= rc.beta[j] * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  cur.back() = 1.0;
  return cur;
}

}  // namespace chaoskit
