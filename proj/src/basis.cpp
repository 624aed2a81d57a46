#include "chaoskit/basis.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

// Fejer discretization converges only algebraically at endpoint singularities
// such as (1 - t)^(1/2); bases get a finer one than the procedure default.
DiscretizationConfig basis_discretization(std::size_t n) {
  return {DiscretizationRule::fejer1, std::max<std::size_t>(10 * n, 8000)};
}

}  // namespace

RecurrenceCoefficients construct_coefficients(const Measure& m, std::size_t n,
                                              ConstructionMethod method) {
  switch (method) {
    case ConstructionMethod::automatic:
      if (m.canonical() || m.has_components()) return recurrence_for(m, n);
      return lanczos(m, n, basis_discretization(n));
    case ConstructionMethod::closed_form:
      if (!m.canonical()) throw UnsupportedMeasureError("closed form requires a canonical measure");
      return closed_form_coefficients(*m.canonical(), n);
    case ConstructionMethod::stieltjes: return stieltjes(m, n, basis_discretization(n));
    case ConstructionMethod::lanczos: return lanczos(m, n, basis_discretization(n));
    case ConstructionMethod::multiple_discretization: return multiple_discretization(m, n);
  }
  throw UnsupportedMeasureError("unknown construction method");
}

OrthoBasis::OrthoBasis(Measure measure, std::size_t degree, ConstructionMethod method)
    : measure_(std::move(measure)), degree_(degree), method_(method) {
  const std::size_t quad_nodes = 2 * (degree_ + 1);
  rc_ = construct_coefficients(measure_, quad_nodes, method_);
  quad_ = gauss_rule(rc_, quad_nodes);
}

OrthoBasis OrthoBasis::canonical(CanonicalKind kind, std::size_t degree, double alpha,
                                 double beta) {
  return OrthoBasis(canonical_measure(kind, alpha, beta), degree, ConstructionMethod::closed_form);
}

double OrthoBasis::evaluate(std::size_t k, double t) const {
  if (k > degree_) {
    throw IndexError("OrthoBasis::evaluate: degree " + std::to_string(k) + " exceeds basis degree " +
                     std::to_string(degree_));
  }
  double prev = 0.0;
  double cur = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double next = (t - rc_.alpha[j]) * cur - rc_.beta[j] * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> OrthoBasis::evaluate_all(double t) const {
  std::vector<double> v(degree_ + 1);
  v[0] = 1.0;
  if (degree_ >= 1) v[1] = t - rc_.alpha[0];
  for (std::size_t k = 1; k < degree_; ++k) {
    v[k + 1] = (t - rc_.alpha[k]) * v[k] - rc_.beta[k] * v[k - 1];
  }
  return v;
}

double OrthoBasis::norm_squared(std::size_t k) const {
  if (k >= rc_.size()) throw IndexError("OrthoBasis::norm_squared: degree out of range");
  double g = 1.0;
  for (std::size_t j = 0; j <= k; ++j) g *= rc_.beta[j];
  return g;
}

RecurrenceCoefficients OrthoBasis::coefficients_with(std::size_t count) const {
  if (count <= rc_.size()) return rc_;
  return construct_coefficients(measure_, count, method_);
}

std::vector<MultiIndex> total_degree_index_set(std::size_t m, std::size_t p) {
  if (m == 0) throw DomainError("total_degree_index_set: dimension must be positive");
  std::vector<MultiIndex> out;
  MultiIndex current(m, 0);
  // Fill position `pos` onward so the entries sum to `remaining`, leading
  // components first and largest first.
  std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t pos, std::size_t remaining) {
    if (pos + 1 == m) {
      current[pos] = remaining;
      out.push_back(current);
      return;
    }
    for (std::size_t v = remaining + 1; v-- > 0;) {
      current[pos] = v;
      fill(pos + 1, remaining - v);
    }
  };
  for (std::size_t grade = 0; grade <= p; ++grade) fill(0, grade);
  return out;
}

MultiOrthoBasis::MultiOrthoBasis(std::vector<OrthoBasis> factors, std::size_t total_degree)
    : factors_(std::move(factors)), total_degree_(total_degree) {
  if (factors_.empty()) throw DomainError("MultiOrthoBasis needs at least one factor");
  for (const auto& f : factors_) {
    if (f.degree() < total_degree_) {
      throw DomainError("MultiOrthoBasis: factor degree " + std::to_string(f.degree()) +
                        " below total degree " + std::to_string(total_degree_));
    }
  }
  index_set_ = total_degree_index_set(factors_.size(), total_degree_);
  for (std::size_t i = 0; i < index_set_.size(); ++i) lookup_.emplace(index_set_[i], i);
}

MultiOrthoBasis MultiOrthoBasis::univariate(OrthoBasis factor) {
  const std::size_t d = factor.degree();
  std::vector<OrthoBasis> f;
  f.push_back(std::move(factor));
  return MultiOrthoBasis(std::move(f), d);
}

std::size_t MultiOrthoBasis::position(const MultiIndex& idx) const {
  if (idx.size() != dimension()) throw ShapeError("multi-index has wrong dimension");
  const auto it = lookup_.find(idx);
  if (it == lookup_.end()) throw IndexError("multi-index not in the total-degree index set");
  return it->second;
}

std::size_t MultiOrthoBasis::first_degree_position(std::size_t dim) const {
  if (dim >= dimension()) throw IndexError("germ dimension out of range");
  if (total_degree_ == 0) throw IndexError("basis of total degree 0 has no first-degree element");
  MultiIndex idx(dimension(), 0);
  idx[dim] = 1;
  return position(idx);
}

void MultiOrthoBasis::check_point(std::span<const double> t) const {
  if (t.size() != dimension()) {
    throw ShapeError("evaluation point has " + std::to_string(t.size()) +
                     " coordinates, basis has dimension " + std::to_string(dimension()));
  }
}

double MultiOrthoBasis::evaluate(const MultiIndex& idx, std::span<const double> t) const {
  check_point(t);
  (void)position(idx);
  double v = 1.0;
  for (std::size_t i = 0; i < dimension(); ++i) v *= factors_[i].evaluate(idx[i], t[i]);
  return v;
}

double MultiOrthoBasis::evaluate(std::size_t position, std::span<const double> t) const {
  if (position >= size()) throw IndexError("basis position out of range");
  return evaluate(index_set_[position], t);
}

std::vector<double> MultiOrthoBasis::evaluate_all(std::span<const double> t) const {
  check_point(t);
  std::vector<std::vector<double>> per_dim;
  per_dim.reserve(dimension());
  for (std::size_t i = 0; i < dimension(); ++i) per_dim.push_back(factors_[i].evaluate_all(t[i]));
  std::vector<double> out(size(), 1.0);
  for (std::size_t j = 0; j < size(); ++j) {
    for (std::size_t i = 0; i < dimension(); ++i) out[j] *= per_dim[i][index_set_[j][i]];
  }
  return out;
}

double MultiOrthoBasis::norm_squared(std::size_t position) const {
  if (position >= size()) throw IndexError("basis position out of range");
  double g = 1.0;
  for (std::size_t i = 0; i < dimension(); ++i) {
    g *= factors_[i].norm_squared(index_set_[position][i]);
  }
  return g;
}

}  // namespace chaoskit
