#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "chaoskit/basis.hpp"
#include "chaoskit/tensor.hpp"

namespace chaoskit {

using BasisPtr = std::shared_ptr<const MultiOrthoBasis>;

/// Coefficients x_k of x = sum_k x_k Phi_k over a shared product basis.
class PceVector {
 public:
  PceVector(BasisPtr basis, std::vector<double> coefficients);

  static PceVector zeros(BasisPtr basis);
  static PceVector constant(BasisPtr basis, double c);

  const BasisPtr& basis() const { return basis_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  std::vector<double>& coefficients() { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  double operator[](std::size_t k) const { return coeffs_[k]; }

 private:
  BasisPtr basis_;
  std::vector<double> coeffs_;
};

/// PCE of a + b z_dim. Exact since z = alpha_0 + phi_1(z) for a monic basis.
PceVector affine_input(const BasisPtr& basis, std::size_t dim, double a, double b);
/// Uniform variable with the given mean and standard deviation on a uniform01 germ.
PceVector uniform_input(const BasisPtr& basis, std::size_t dim, double mean, double std_dev);
/// Normal variable with the given mean and standard deviation on a gaussian germ.
PceVector gaussian_input(const BasisPtr& basis, std::size_t dim, double mean, double std_dev);

/// Same dimension, total degree and recurrence coefficients.
bool same_basis(const MultiOrthoBasis& a, const MultiOrthoBasis& b);

double mean(const PceVector& x);
/// sqrt(sum_{k>=1} x_k^2 t2(k,k)); throws NumericalError on a radicand below -1e-14.
double std_dev(const PceVector& x, const Tensor& t2);
double variance(const PceVector& x, const Tensor& t2);

/// Truncated Galerkin product of two expansions.
PceVector galerkin_multiply(const PceVector& x, const PceVector& y, const GalerkinMap& nu);
PceVector galerkin_multiply(const PceVector& x, const PceVector& y, const Tensor& t3,
                            const Tensor& t2);

/// x evaluated at one germ realization.
double sample(const PceVector& x, std::span<const double> tau);

/// `count` germ vectors drawn i.i.d. from the basis factors. Dimension i uses
/// its own mt19937_64 stream seeded with seed_seq{seed, i}.
std::vector<std::vector<double>> sample_germ(const MultiOrthoBasis& basis, std::size_t count,
                                             std::uint64_t seed);

/// Inverse-CDF sampler for one measure.
class MeasureSampler {
 public:
  explicit MeasureSampler(Measure m);
  /// Value at cumulative probability u in (0, 1). Mixture CDFs are inverted
  /// to 1e-12 by Newton steps safeguarded with bisection on a tabulated bracket.
  double draw(double u) const;
  double cdf(double t) const;

 private:
  double quantile(double u) const;
  double generic_quantile(double u) const;
  double generic_cdf(double t) const;

  Measure measure_;
  std::vector<MeasureSampler> components_;
  std::vector<double> cumulative_weights_;
  // Tabulated CDF for densities without a closed-form quantile, and a
  // coarse bracketing table for mixtures.
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

}  // namespace chaoskit
