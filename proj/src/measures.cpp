#include "chaoskit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chaoskit/errors.hpp"
#include "chaoskit/quadrature.hpp"

namespace chaoskit {

namespace {

constexpr double kTruncationRatio = 1e-14;
constexpr double kWeightSumTol = 1e-12;

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string("shape parameter ") + what + " must be positive, got " +
                      std::to_string(v));
  }
}

// Probe the density on a geometric grid around a reference point and return
// the location of the largest finite value.
double probe_mode(const Measure::Density& rho, Interval support, double scale) {
  double center = 0.0;
  if (std::isfinite(support.lo) && std::isfinite(support.hi)) {
    center = 0.5 * (support.lo + support.hi);
  } else if (std::isfinite(support.lo)) {
    center = support.lo;
  } else if (std::isfinite(support.hi)) {
    center = support.hi;
  }
  double best_t = center;
  double best = -1.0;
  auto visit = [&](double t) {
    if (t <= support.lo || t >= support.hi) return;
    const double v = rho(t);
    if (std::isfinite(v) && v > best) {
      best = v;
      best_t = t;
    }
  };
  visit(center);
  for (int j = -8; j <= 12; ++j) {
    const double h = scale * std::ldexp(1.0, j);
    visit(center + h);
    visit(center - h);
  }
  return best_t;
}

}  // namespace

std::string_view to_string(CanonicalKind kind) {
  switch (kind) {
    case CanonicalKind::gaussian: return "gaussian";
    case CanonicalKind::uniform01: return "uniform01";
    case CanonicalKind::beta01: return "beta01";
    case CanonicalKind::gamma: return "gamma";
    case CanonicalKind::hermite: return "hermite";
    case CanonicalKind::legendre: return "legendre";
    case CanonicalKind::jacobi: return "jacobi";
    case CanonicalKind::laguerre: return "laguerre";
  }
  return "unknown";
}

CanonicalKind canonical_kind_from_string(std::string_view name) {
  for (auto k : {CanonicalKind::gaussian, CanonicalKind::uniform01, CanonicalKind::beta01,
                 CanonicalKind::gamma, CanonicalKind::hermite, CanonicalKind::legendre,
                 CanonicalKind::jacobi, CanonicalKind::laguerre}) {
    if (to_string(k) == name) return k;
  }
  throw UnsupportedMeasureError("unknown canonical measure '" + std::string(name) + "'");
}

Measure Measure::from_density(Density density, Interval support, bool symmetric,
                              bool auto_normalize) {
  if (!(support.lo < support.hi)) throw DomainError("measure support must satisfy lo < hi");
  if (!density) throw DomainError("measure density must be callable");
  Measure m(std::move(density), support);
  m.symmetric_ = symmetric;
  if (auto_normalize) {
    const double mass = m.mass(2000);
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      throw NormalizationError("density has non-positive or non-finite mass");
    }
    m.density_ = [rho = std::move(m.density_), inv = 1.0 / mass](double t) { return inv * rho(t); };
  }
  return m;
}

double Measure::density(double t) const {
  if (!(t >= support_.lo && t <= support_.hi)) return 0.0;
  return density_(t);
}

double Measure::symmetry_center() const {
  if (support_.bounded()) return 0.5 * (support_.lo + support_.hi);
  return 0.0;
}

Interval Measure::truncated_support(std::size_t moment_degree) const {
  if (support_.bounded()) return support_;

  const double peak = mode_hint_ ? *mode_hint_ : probe_mode(density_, support_, scale_hint_);
  const double deg = static_cast<double>(moment_degree);
  auto log_weighted = [&](double h) {
    return std::log(density(peak + h)) + deg * std::log1p(std::abs(h) / scale_hint_);
  };
  double top = log_weighted(0.0);
  if (!std::isfinite(top)) top = std::log(density(probe_mode(density_, support_, scale_hint_)));
  const double log_ratio = std::log(kTruncationRatio);

  auto search = [&](double direction) {
    double best = top;
    double h = scale_hint_;
    for (int it = 0; it < 200; ++it) {
      const double v = log_weighted(direction * h);
      if (v < best + log_ratio) return peak + direction * h;
      best = std::max(best, v);
      h *= 2.0;
    }
    throw DomainError("density does not decay; cannot truncate unbounded support");
  };

  Interval out = support_;
  if (!std::isfinite(support_.hi)) out.hi = search(+1.0);
  if (!std::isfinite(support_.lo)) out.lo = search(-1.0);
  return out;
}

double Measure::mass(std::size_t nodes) const {
  const auto rule = fejer1_rule(nodes, truncated_support());
  return integrate(rule, [this](double t) { return density(t); });
}

Measure canonical_measure(CanonicalKind kind, double alpha, double beta) {
  constexpr double pi = std::numbers::pi;
  Measure::Density rho;
  Interval support{};
  bool symmetric = false;
  std::optional<double> mode;
  double scale = 1.0;

  switch (kind) {
    case CanonicalKind::gaussian: {
      const double c = 1.0 / std::sqrt(2.0 * pi);
      rho = [c](double t) { return c * std::exp(-0.5 * t * t); };
      support = {-kInf, kInf};
      symmetric = true;
      mode = 0.0;
      break;
    }
    case CanonicalKind::uniform01:
      rho = [](double) { return 1.0; };
      support = {0.0, 1.0};
      symmetric = true;
      break;
    case CanonicalKind::beta01: {
      require_positive(alpha, "alpha");
      require_positive(beta, "beta");
      const double inv_b = std::exp(-log_beta(alpha, beta));
      rho = [alpha, beta, inv_b](double t) {
        return inv_b * std::pow(t, alpha - 1.0) * std::pow(1.0 - t, beta - 1.0);
      };
      support = {0.0, 1.0};
      symmetric = alpha == beta;
      break;
    }
    case CanonicalKind::gamma: {
      require_positive(alpha, "alpha");
      require_positive(beta, "beta");
      const double log_c = alpha * std::log(beta) - std::lgamma(alpha);
      rho = [alpha, beta, log_c](double t) {
        if (t == 0.0) {
          if (alpha == 1.0) return beta;
          return alpha < 1.0 ? kInf : 0.0;
        }
        return std::exp(log_c + (alpha - 1.0) * std::log(t) - beta * t);
      };
      support = {0.0, kInf};
      mode = alpha > 1.0 ? (alpha - 1.0) / beta : 0.0;
      scale = 1.0 / beta;
      break;
    }
    case CanonicalKind::hermite: {
      const double c = 1.0 / std::sqrt(pi);
      rho = [c](double t) { return c * std::exp(-t * t); };
      support = {-kInf, kInf};
      symmetric = true;
      mode = 0.0;
      scale = std::sqrt(0.5);
      break;
    }
    case CanonicalKind::legendre:
      rho = [](double) { return 0.5; };
      support = {-1.0, 1.0};
      symmetric = true;
      break;
    case CanonicalKind::jacobi: {
      if (!(alpha > -1.0) || !(beta > -1.0)) {
        throw DomainError("jacobi parameters must exceed -1");
      }
      // (1-t)^a (1+t)^b integrates to 2^(a+b+1) B(a+1, b+1) on [-1, 1].
      const double inv_mass =
          std::exp(-((alpha + beta + 1.0) * std::log(2.0) + log_beta(alpha + 1.0, beta + 1.0)));
      rho = [alpha, beta, inv_mass](double t) {
        return inv_mass * std::pow(1.0 - t, alpha) * std::pow(1.0 + t, beta);
      };
      support = {-1.0, 1.0};
      symmetric = alpha == beta;
      break;
    }
    case CanonicalKind::laguerre:
      rho = [](double t) { return std::exp(-t); };
      support = {0.0, kInf};
      mode = 0.0;
      break;
  }

  Measure m(std::move(rho), support);
  m.symmetric_ = symmetric;
  m.canonical_ = CanonicalParams{kind, alpha, beta};
  m.mode_hint_ = mode;
  m.scale_hint_ = scale;
  return m;
}

Measure mixture(std::span<const double> weights, std::span<const Measure> components) {
  if (weights.empty() || weights.size() != components.size()) {
    throw DomainError("mixture needs equally many (non-zero) weights and components");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw DomainError("mixture weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    throw NormalizationError("mixture weights sum to " + std::to_string(sum) + ", expected 1");
  }

  bool all_bounded = true;
  bool identical = true;
  bool symmetric = true;
  Interval hull = components.front().support();
  for (const auto& c : components) {
    all_bounded = all_bounded && c.support().bounded();
    identical = identical && c.support() == components.front().support();
    symmetric = symmetric && c.is_symmetric();
    hull.lo = std::min(hull.lo, c.support().lo);
    hull.hi = std::max(hull.hi, c.support().hi);
  }
  if (!all_bounded && !identical) {
    throw DomainError("mixture components must all be bounded or share one support");
  }

  std::vector<Measure::Component> parts;
  parts.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    parts.push_back({weights[i], std::make_shared<const Measure>(components[i])});
  }

  auto rho = [parts](double t) {
    double v = 0.0;
    for (const auto& p : parts) v += p.weight * p.measure->density(t);
    return v;
  };
  Measure m(std::move(rho), hull);
  m.symmetric_ = symmetric && identical;
  m.components_ = std::move(parts);
  if (m.components_.size() == 1) {
    m.mode_hint_ = components.front().mode_hint_;
  }
  m.scale_hint_ = components.front().scale_hint_;
  return m;
}

ProductMeasure::ProductMeasure(std::vector<Measure> f) : factors(std::move(f)) {
  if (factors.empty()) throw DomainError("product measure needs at least one factor");
}

double ProductMeasure::density(std::span<const double> t) const {
  if (t.size() != factors.size()) throw ShapeError("product measure: dimension mismatch");
  double v = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i) v *= factors[i].density(t[i]);
  return v;
}

Measure beta_mixture(std::span<const double> weights, std::span<const double> a,
                     std::span<const double> b) {
  if (a.size() != weights.size() || b.size() != weights.size()) {
    throw DomainError("beta_mixture: parameter lists differ in length");
  }
  std::vector<Measure> comps;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    comps.push_back(canonical_measure(CanonicalKind::beta01, a[i], b[i]));
  }
  return mixture(weights, comps);
}

}  // namespace chaoskit
