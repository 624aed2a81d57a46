#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "chaoskit/types.hpp"

namespace chaoskit {

enum class QuadratureKind { gauss, gauss_radau, gauss_lobatto, fejer1, fejer2, clenshaw_curtis };

std::string_view to_string(QuadratureKind kind);

/// Nodes (strictly ascending) and weights approximating integrals against a
/// measure (Gauss kinds) or the Lebesgue measure on an interval (Fejer/CC).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  QuadratureKind kind = QuadratureKind::gauss;

  std::size_t size() const { return nodes.size(); }
};

struct SymTridiagonal {
  std::vector<double> diagonal;
  std::vector<double> subdiagonal;  // length n - 1

  std::size_t size() const { return diagonal.size(); }
};

struct TridiagonalEigen {
  std::vector<double> eigenvalues;       // ascending
  std::vector<double> first_components;  // e_1^T v for each unit eigenvector v
};

/// Implicit-shift QL with Wilkinson shifts. Only the first row of the
/// eigenvector matrix is accumulated. Throws EigensolverError after 30 n
/// sweeps without deflation.
TridiagonalEigen symtridiag_eigen(const SymTridiagonal& t);

/// Golub-Welsch. Exact for polynomials of degree <= 2n - 1.
QuadratureRule gauss_rule(const RecurrenceCoefficients& rc, std::size_t n);

/// n-point rule with one node fixed at `endpoint`, exact to degree 2n - 2.
/// `support` is the measure's support; endpoints strictly inside it are rejected.
QuadratureRule gauss_radau_rule(const RecurrenceCoefficients& rc, std::size_t n, double endpoint,
                                Interval support);

/// n-point rule (n >= 2) with nodes fixed at `left` and `right`, exact to degree 2n - 3.
QuadratureRule gauss_lobatto_rule(const RecurrenceCoefficients& rc, std::size_t n, double left,
                                  double right, Interval support);

// Chebyshev-point rules for the Lebesgue weight on a finite interval.
// Weights sum to the interval length.
QuadratureRule fejer1_rule(std::size_t n, Interval interval);
QuadratureRule fejer2_rule(std::size_t n, Interval interval);
QuadratureRule clenshaw_curtis_rule(std::size_t n, Interval interval);

template <class F>
double integrate(const QuadratureRule& rule, F&& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

}  // namespace chaoskit
