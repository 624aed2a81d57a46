#include "chaoskit/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

constexpr double kZeroThreshold = 1e-12;

// Visits every ascending tuple 0 <= i1 <= ... <= in < size in lexicographic order.
template <class F>
void for_each_sorted_tuple(std::size_t order, std::size_t size, F&& visit) {
  std::vector<std::size_t> idx(order, 0);
  while (true) {
    visit(std::span<const std::size_t>(idx));
    std::size_t pos = order;
    while (pos > 0 && idx[pos - 1] + 1 == size) --pos;
    if (pos == 0) return;
    const std::size_t v = idx[pos - 1] + 1;
    for (std::size_t j = pos - 1; j < order; ++j) idx[j] = v;
  }
}

// Raw values in tuple order, then the thresholded tensor.
Tensor finalize(std::size_t order, std::size_t size, const std::vector<double>& raw) {
  double peak = 0.0;
  for (double v : raw) peak = std::max(peak, std::abs(v));
  const double cut = kZeroThreshold * peak;
  Tensor t(order, size);
  std::size_t i = 0;
  for_each_sorted_tuple(order, size, [&](std::span<const std::size_t> idx) {
    const double v = raw[i++];
    if (std::abs(v) > cut) t.push_sorted(idx, v);
  });
  return t;
}

void require_order(std::size_t order) {
  if (order < 1) throw OrderError("tensor order must be at least 1");
}

}  // namespace

Tensor::Tensor(std::size_t order, std::size_t basis_size) : order_(order), basis_size_(basis_size) {
  require_order(order);
}

void Tensor::push_sorted(std::span<const std::size_t> idx, double value) {
  if (idx.size() != order_) throw ShapeError("tensor entry has wrong order");
  keys_.insert(keys_.end(), idx.begin(), idx.end());
  values_.push_back(value);
}

double Tensor::get(std::span<const std::size_t> idx) const {
  if (idx.size() != order_) {
    throw ShapeError("tensor of order " + std::to_string(order_) + " indexed with " +
                     std::to_string(idx.size()) + " indices");
  }
  std::vector<std::size_t> key(idx.begin(), idx.end());
  for (std::size_t k : key) {
    if (k >= basis_size_) throw IndexError("tensor index out of range");
  }
  std::sort(key.begin(), key.end());

  std::size_t lo = 0;
  std::size_t hi = values_.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const auto probe = index(mid);
    if (std::lexicographical_compare(probe.begin(), probe.end(), key.begin(), key.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < values_.size()) {
    const auto probe = index(lo);
    if (std::equal(probe.begin(), probe.end(), key.begin())) return values_[lo];
  }
  return 0.0;
}

Tensor compute_tensor(const OrthoBasis& basis, std::size_t order) {
  require_order(order);
  const std::size_t d = basis.degree();
  const std::size_t nodes = std::max<std::size_t>(1, (order * d + 2) / 2);
  const auto rule = gauss_rule(basis.coefficients_with(nodes), nodes);

  const std::size_t size = d + 1;
  std::vector<std::vector<double>> values(size, std::vector<double>(rule.size()));
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto phi = basis.evaluate_all(rule.nodes[i]);
    for (std::size_t k = 0; k < size; ++k) values[k][i] = phi[k];
  }

  std::vector<double> raw;
  for_each_sorted_tuple(order, size, [&](std::span<const std::size_t> idx) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      double prod = rule.weights[i];
      for (std::size_t k : idx) prod *= values[k][i];
      s += prod;
    }
    raw.push_back(s);
  });
  return finalize(order, size, raw);
}

Tensor compute_tensor(const MultiOrthoBasis& basis, std::size_t order) {
  require_order(order);
  const std::size_t m = basis.dimension();

  // Dense per-dimension lookup tables of the univariate entries, indexed by
  // the full (unsorted) tuple of degrees <= total degree.
  const std::size_t span_deg = basis.total_degree() + 1;
  std::size_t table_size = 1;
  for (std::size_t j = 0; j < order; ++j) table_size *= span_deg;
  std::vector<std::vector<double>> tables(m, std::vector<double>(table_size, 0.0));
  for (std::size_t dim = 0; dim < m; ++dim) {
    const Tensor univ = compute_tensor(basis.factors()[dim], order);
    std::vector<std::size_t> degs(order, 0);
    for (std::size_t flat = 0; flat < table_size; ++flat) {
      std::size_t rest = flat;
      for (std::size_t j = order; j-- > 0;) {
        degs[j] = rest % span_deg;
        rest /= span_deg;
      }
      tables[dim][flat] = univ.get(degs);
    }
  }

  const auto& set = basis.index_set();
  std::vector<double> raw;
  for_each_sorted_tuple(order, basis.size(), [&](std::span<const std::size_t> idx) {
    double prod = 1.0;
    for (std::size_t dim = 0; dim < m && prod != 0.0; ++dim) {
      std::size_t flat = 0;
      for (std::size_t pos : idx) flat = flat * span_deg + set[pos][dim];
      prod *= tables[dim][flat];
    }
    raw.push_back(prod);
  });
  return finalize(order, basis.size(), raw);
}

GalerkinMap::GalerkinMap(std::size_t basis_size)
    : size_(basis_size), dense_(basis_size * basis_size * basis_size, 0.0) {}

void GalerkinMap::multiply(std::span<const double> x, std::span<const double> y,
                           std::span<double> out) const {
  if (x.size() != size_ || y.size() != size_ || out.size() != size_) {
    throw ShapeError("galerkin product: coefficient length does not match the basis");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& t : terms_) out[t.k1] += t.value * x[t.k2] * y[t.k3];
}

GalerkinMap galerkin_nu(const Tensor& t3, const Tensor& t2) {
  if (t3.order() != 3 || t2.order() != 2) throw OrderError("galerkin_nu needs tensors of order 3 and 2");
  if (t3.basis_size() != t2.basis_size()) throw ShapeError("galerkin_nu: basis sizes differ");
  const std::size_t n = t3.basis_size();
  GalerkinMap map(n);
  std::vector<double> norms(n);
  for (std::size_t k = 0; k < n; ++k) {
    norms[k] = t2({k, k});
    if (!(norms[k] > 0.0)) throw NumericalError("galerkin_nu: non-positive basis norm");
  }
  for (std::size_t k1 = 0; k1 < n; ++k1) {
    for (std::size_t k2 = 0; k2 < n; ++k2) {
      for (std::size_t k3 = 0; k3 < n; ++k3) {
        const double v = t3({k2, k3, k1});
        if (v == 0.0) continue;
        const double nu = v / norms[k1];
        map.dense_[(k1 * n + k2) * n + k3] = nu;
        map.terms_.push_back({k1, k2, k3, nu});
      }
    }
  }
  return map;
}

}  // namespace chaoskit
