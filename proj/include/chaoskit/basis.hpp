#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "chaoskit/measures.hpp"
#include "chaoskit/quadrature.hpp"
#include "chaoskit/recurrence.hpp"

namespace chaoskit {

enum class ConstructionMethod { automatic, closed_form, stieltjes, lanczos, multiple_discretization };

/// Recurrence coefficients of `m` using the requested construction method.
/// Stieltjes and Lanczos run on a Fejer discretization of max(10 n, 8000) nodes.
RecurrenceCoefficients construct_coefficients(const Measure& m, std::size_t n,
                                              ConstructionMethod method);

/// Monic orthogonal polynomials phi_0..phi_d of one measure together with a
/// companion Gauss rule of 2 (d + 1) nodes.
class OrthoBasis {
 public:
  OrthoBasis(Measure measure, std::size_t degree,
             ConstructionMethod method = ConstructionMethod::automatic);

  static OrthoBasis canonical(CanonicalKind kind, std::size_t degree, double alpha = 0.0,
                              double beta = 0.0);

  const Measure& measure() const { return measure_; }
  const RecurrenceCoefficients& coefficients() const { return rc_; }
  std::size_t degree() const { return degree_; }
  std::size_t size() const { return degree_ + 1; }
  const QuadratureRule& quadrature() const { return quad_; }
  ConstructionMethod method() const { return method_; }

  /// phi_k(t) by forward recurrence. Throws IndexError for k > degree.
  double evaluate(std::size_t k, double t) const;
  /// phi_0(t) .. phi_d(t).
  std::vector<double> evaluate_all(double t) const;
  /// <phi_k, phi_k> = beta_0 beta_1 ... beta_k.
  double norm_squared(std::size_t k) const;

  /// At least `count` recurrence pairs, recomputed with the same method when
  /// the stored ones are not enough.
  RecurrenceCoefficients coefficients_with(std::size_t count) const;

 private:
  Measure measure_;
  std::size_t degree_;
  ConstructionMethod method_;
  RecurrenceCoefficients rc_;
  QuadratureRule quad_;
};

inline double evaluate(const OrthoBasis& b, std::size_t k, double t) { return b.evaluate(k, t); }

using MultiIndex = std::vector<std::size_t>;

/// {k in N_0^m : |k| <= p}, graded, and within a grade ordered with the
/// leading components descending: (0,0),(1,0),(0,1),(2,0),(1,1),(0,2).
std::vector<MultiIndex> total_degree_index_set(std::size_t m, std::size_t p);

/// Product basis of m independent univariate bases, total-degree truncated.
class MultiOrthoBasis {
 public:
  MultiOrthoBasis(std::vector<OrthoBasis> factors, std::size_t total_degree);

  /// m = 1 wrapper, total degree = the factor's degree.
  static MultiOrthoBasis univariate(OrthoBasis factor);

  const std::vector<OrthoBasis>& factors() const { return factors_; }
  std::size_t dimension() const { return factors_.size(); }
  std::size_t total_degree() const { return total_degree_; }
  const std::vector<MultiIndex>& index_set() const { return index_set_; }
  std::size_t size() const { return index_set_.size(); }

  /// Position of `idx` in the index set; throws IndexError if absent.
  std::size_t position(const MultiIndex& idx) const;
  /// Position of the first-degree element of dimension `dim`.
  std::size_t first_degree_position(std::size_t dim) const;

  double evaluate(const MultiIndex& idx, std::span<const double> t) const;
  double evaluate(std::size_t position, std::span<const double> t) const;
  /// Values of all basis elements at `t`, in index-set order.
  std::vector<double> evaluate_all(std::span<const double> t) const;
  double norm_squared(std::size_t position) const;

 private:
  void check_point(std::span<const double> t) const;

  std::vector<OrthoBasis> factors_;
  std::size_t total_degree_;
  std::vector<MultiIndex> index_set_;
  std::map<MultiIndex, std::size_t> lookup_;
};

inline double evaluate_multi(const MultiOrthoBasis& mb, const MultiIndex& idx,
                             std::span<const double> t) {
  return mb.evaluate(idx, t);
}

}  // namespace chaoskit
