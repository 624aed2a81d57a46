#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chaoskit/measures.hpp"
#include "chaoskit/quadrature.hpp"
#include "chaoskit/types.hpp"

namespace chaoskit {

enum class DiscretizationRule { fejer1, fejer2, clenshaw_curtis };

/// How a continuous measure is turned into a discrete one for the
/// Stieltjes/Lanczos procedures.
struct DiscretizationConfig {
  DiscretizationRule rule = DiscretizationRule::fejer1;
  /// Node count M; 0 selects max(10 N, 1000).
  std::size_t nodes = 0;
};

/// Discrete approximation of `m`: nodes of the chosen rule on the truncated
/// support with weights w_i rho(x_i). The truncation keeps moments up to
/// `moment_degree` accurate.
QuadratureRule discretize(const Measure& m, std::size_t nodes,
                          DiscretizationRule rule = DiscretizationRule::fejer1,
                          std::size_t moment_degree = 0);

/// First `n` recurrence pairs of a canonical measure, in closed form.
RecurrenceCoefficients closed_form_coefficients(const CanonicalParams& params, std::size_t n);
RecurrenceCoefficients closed_form_coefficients(CanonicalKind kind, std::size_t n,
                                                double alpha = 0.0, double beta = 0.0);

/// Stieltjes procedure on a discrete measure. Polynomials are carried in
/// orthonormal scaling so that high degrees do not over- or underflow.
RecurrenceCoefficients stieltjes(std::span<const double> nodes, std::span<const double> weights,
                                 std::size_t n);
RecurrenceCoefficients stieltjes(const Measure& m, std::size_t n,
                                 const DiscretizationConfig& disc = {});

/// Lanczos procedure: tridiagonalize diag(nodes) starting from sqrt(weights),
/// with full reorthogonalization. Same coefficients as Stieltjes on the same
/// discretization.
RecurrenceCoefficients lanczos(std::span<const double> nodes, std::span<const double> weights,
                               std::size_t n);
RecurrenceCoefficients lanczos(const Measure& m, std::size_t n,
                               const DiscretizationConfig& disc = {});

enum class InnerProcedure { stieltjes, lanczos };

struct MultipleDiscretizationOptions {
  /// Initial per-component node count; 0 selects 2 N + 1. Doubles every iteration.
  std::size_t per_component_nodes = 0;
  double tol = 1e-10;
  int max_iterations = 12;
  InnerProcedure inner = InnerProcedure::lanczos;
};

/// Coefficients of a mixture measure built from the union of its components'
/// quadrature rules, refined until successive iterates agree within `tol`.
/// Throws ConvergenceError carrying the last two iterates (alpha then beta).
RecurrenceCoefficients multiple_discretization(const Measure& m, std::size_t n,
                                               const MultipleDiscretizationOptions& opts = {});

/// Picks closed forms for canonical measures, multiple discretization for
/// mixtures and Lanczos otherwise.
RecurrenceCoefficients recurrence_for(const Measure& m, std::size_t n);

/// Ascending monomial coefficients of phi_k; the last entry is exactly 1.
std::vector<double> expand_monic(const RecurrenceCoefficients& rc, std::size_t k);

}  // namespace chaoskit
