#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "chaoskit/types.hpp"

namespace chaoskit {

/// Canonical (Askey-scheme) measures. The probabilistic kinds carry their
/// usual meaning; hermite/legendre/jacobi/laguerre are the classical weight
/// functions rescaled to unit mass.
enum class CanonicalKind {
  gaussian,   // exp(-t^2/2)/sqrt(2 pi) on R
  uniform01,  // 1 on [0, 1]
  beta01,     // t^(a-1) (1-t)^(b-1) / B(a, b) on (0, 1)
  gamma,      // b^a t^(a-1) exp(-b t) / Gamma(a) on (0, inf), rate b
  hermite,    // exp(-t^2)/sqrt(pi) on R
  legendre,   // 1/2 on [-1, 1]
  jacobi,     // (1-t)^a (1+t)^b / const on [-1, 1]
  laguerre,   // exp(-t) on (0, inf)
};

std::string_view to_string(CanonicalKind kind);
/// Throws UnsupportedMeasureError for unknown names.
CanonicalKind canonical_kind_from_string(std::string_view name);

struct CanonicalParams {
  CanonicalKind kind = CanonicalKind::gaussian;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Normalized, absolutely continuous probability measure on an interval.
///
/// Instances are immutable after construction and share their density and
/// components, so copies are cheap and safe to read concurrently.
class Measure {
 public:
  using Density = std::function<double(double)>;

  struct Component {
    double weight;
    std::shared_ptr<const Measure> measure;
  };

  /// User-supplied density. With `auto_normalize` the density is divided by
  /// its numerically integrated mass; otherwise it must already integrate to 1.
  static Measure from_density(Density density, Interval support, bool symmetric = false,
                              bool auto_normalize = false);

  /// rho(t) inside the support, 0 outside.
  double density(double t) const;
  const Interval& support() const { return support_; }
  bool is_symmetric() const { return symmetric_; }
  /// Midpoint of the support (0 for the whole real line).
  double symmetry_center() const;
  const std::vector<Component>& components() const { return components_; }
  bool has_components() const { return !components_.empty(); }
  const std::optional<CanonicalParams>& canonical() const { return canonical_; }

  /// Bounded interval used by discretization-based integration. Infinite ends
  /// are cut where rho(t) (1 + |t - mode| / scale)^moment_degree drops below
  /// 1e-14 of its largest value, located by a doubling search from the mode.
  Interval truncated_support(std::size_t moment_degree = 0) const;

  /// Numerically integrated mass on the truncated support.
  double mass(std::size_t nodes = 200) const;

 private:
  friend Measure canonical_measure(CanonicalKind, double, double);
  friend Measure mixture(std::span<const double>, std::span<const Measure>);

  Measure(Density density, Interval support) : density_(std::move(density)), support_(support) {}

  Density density_;
  Interval support_;
  bool symmetric_ = false;
  std::vector<Component> components_;
  std::optional<CanonicalParams> canonical_;
  std::optional<double> mode_hint_;
  double scale_hint_ = 1.0;
};

/// Throws DomainError for non-positive shape parameters (jacobi needs > -1).
Measure canonical_measure(CanonicalKind kind, double alpha = 0.0, double beta = 0.0);
inline Measure canonical_measure(const CanonicalParams& p) {
  return canonical_measure(p.kind, p.alpha, p.beta);
}

/// Weighted sum of component measures; support is the convex hull.
Measure mixture(std::span<const double> weights, std::span<const Measure> components);

/// Mixture of beta01(a_i, b_i) components.
Measure beta_mixture(std::span<const double> weights, std::span<const double> a,
                     std::span<const double> b);

inline double density_eval(const Measure& m, double t) { return m.density(t); }

/// Independent univariate marginals.
struct ProductMeasure {
  std::vector<Measure> factors;

  explicit ProductMeasure(std::vector<Measure> f);
  std::size_t dimension() const { return factors.size(); }
  double density(std::span<const double> t) const;
};

}  // namespace chaoskit
