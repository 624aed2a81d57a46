#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "chaoskit/basis.hpp"

namespace chaoskit {

/// Scalar products <phi_k1 ... phi_k(n-1), phi_kn> over a basis of size L.
///
/// Only canonical representatives (ascending index tuples) with magnitude
/// above 1e-12 of the largest entry are stored; every other tuple is looked
/// up through its sorted permutation and absent tuples read as 0.
class Tensor {
 public:
  Tensor(std::size_t order, std::size_t basis_size);

  std::size_t order() const { return order_; }
  std::size_t basis_size() const { return basis_size_; }
  std::size_t nonzeros() const { return values_.size(); }

  double get(std::span<const std::size_t> idx) const;
  double operator()(std::initializer_list<std::size_t> idx) const {
    return get(std::span<const std::size_t>(idx.begin(), idx.size()));
  }

  /// Sorted index tuple of stored entry `i`.
  std::span<const std::size_t> index(std::size_t i) const {
    return {keys_.data() + i * order_, order_};
  }
  double value(std::size_t i) const { return values_[i]; }

  /// Appends an entry; callers must insert in ascending lexicographic order.
  void push_sorted(std::span<const std::size_t> idx, double value);

 private:
  std::size_t order_;
  std::size_t basis_size_;
  std::vector<std::size_t> keys_;
  std::vector<double> values_;
};

/// Exact Gauss-quadrature tensor of the given order. The rule has
/// ceil((order * d + 1) / 2) nodes, enough for the degree order*d integrand.
Tensor compute_tensor(const OrthoBasis& basis, std::size_t order);
/// Entries factorize over the dimensions of the product basis.
Tensor compute_tensor(const MultiOrthoBasis& basis, std::size_t order);

/// Dense nu(k1, k2, k3) = t3(k2, k3, k1) / t2(k1, k1); k1 is the projection index.
class GalerkinMap {
 public:
  struct Term {
    std::size_t k1;
    std::size_t k2;
    std::size_t k3;
    double value;
  };

  explicit GalerkinMap(std::size_t basis_size);

  std::size_t size() const { return size_; }
  double operator()(std::size_t k1, std::size_t k2, std::size_t k3) const {
    return dense_[(k1 * size_ + k2) * size_ + k3];
  }
  /// Non-zero terms over all permutations, ordered by k1.
  const std::vector<Term>& terms() const { return terms_; }

  /// out_k1 = sum_{k2,k3} x_k2 y_k3 nu(k1, k2, k3).
  void multiply(std::span<const double> x, std::span<const double> y, std::span<double> out) const;

 private:
  friend GalerkinMap galerkin_nu(const Tensor&, const Tensor&);

  std::size_t size_;
  std::vector<double> dense_;
  std::vector<Term> terms_;
};

GalerkinMap galerkin_nu(const Tensor& t3, const Tensor& t2);

}  // namespace chaoskit
