#include "chaoskit/pce.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/exponential.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>

#include "chaoskit/errors.hpp"

namespace chaoskit {

PceVector::PceVector(BasisPtr basis, std::vector<double> coefficients)
    : basis_(std::move(basis)), coeffs_(std::move(coefficients)) {
  if (!basis_) throw ShapeError("PceVector needs a basis");
  if (coeffs_.size() != basis_->size()) {
    throw ShapeError("PceVector has " + std::to_string(coeffs_.size()) +
                     " coefficients, basis has " + std::to_string(basis_->size()));
  }
}

PceVector PceVector::zeros(BasisPtr basis) {
  const std::size_t n = basis->size();
  return PceVector(std::move(basis), std::vector<double>(n, 0.0));
}

PceVector PceVector::constant(BasisPtr basis, double c) {
  PceVector x = zeros(std::move(basis));
  x.coeffs_[0] = c;
  return x;
}

PceVector affine_input(const BasisPtr& basis, std::size_t dim, double a, double b) {
  if (dim >= basis->dimension()) throw IndexError("affine_input: germ dimension out of range");
  PceVector x = PceVector::constant(basis, a);
  if (b == 0.0) return x;
  const double alpha0 = basis->factors()[dim].coefficients().alpha[0];
  x.coefficients()[0] = a + b * alpha0;
  x.coefficients()[basis->first_degree_position(dim)] = b;
  return x;
}

PceVector uniform_input(const BasisPtr& basis, std::size_t dim, double mean, double std_dev) {
  const double width = 2.0 * std::sqrt(3.0) * std_dev;
  return affine_input(basis, dim, mean - 0.5 * width, width);
}

PceVector gaussian_input(const BasisPtr& basis, std::size_t dim, double mean, double std_dev) {
  return affine_input(basis, dim, mean, std_dev);
}

bool same_basis(const MultiOrthoBasis& a, const MultiOrthoBasis& b) {
  if (&a == &b) return true;
  if (a.dimension() != b.dimension() || a.total_degree() != b.total_degree()) return false;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    const auto& ra = a.factors()[i].coefficients();
    const auto& rb = b.factors()[i].coefficients();
    const std::size_t n = a.total_degree() + 1;
    if (ra.size() < n || rb.size() < n) return false;
    if (!std::equal(ra.alpha.begin(), ra.alpha.begin() + n, rb.alpha.begin()) ||
        !std::equal(ra.beta.begin(), ra.beta.begin() + n, rb.beta.begin())) {
      return false;
    }
  }
  return true;
}

double mean(const PceVector& x) { return x[0]; }

double variance(const PceVector& x, const Tensor& t2) {
  if (t2.order() != 2 || t2.basis_size() != x.size()) {
    throw ShapeError("variance: order-2 tensor does not match the expansion");
  }
  double v = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) v += x[k] * x[k] * t2({k, k});
  if (v < 0.0) {
    if (v < -1e-14) throw NumericalError("negative variance " + std::to_string(v));
    v = 0.0;
  }
  return v;
}

double std_dev(const PceVector& x, const Tensor& t2) { return std::sqrt(variance(x, t2)); }

PceVector galerkin_multiply(const PceVector& x, const PceVector& y, const GalerkinMap& nu) {
  if (!same_basis(*x.basis(), *y.basis())) {
    throw ShapeError("galerkin_multiply: expansions live on different bases");
  }
  PceVector z = PceVector::zeros(x.basis());
  nu.multiply(x.coefficients(), y.coefficients(), z.coefficients());
  return z;
}

PceVector galerkin_multiply(const PceVector& x, const PceVector& y, const Tensor& t3,
                            const Tensor& t2) {
  return galerkin_multiply(x, y, galerkin_nu(t3, t2));
}

double sample(const PceVector& x, std::span<const double> tau) {
  const auto phi = x.basis()->evaluate_all(tau);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * phi[k];
  return s;
}

namespace {

constexpr std::size_t kCdfCells = 2048;
constexpr std::size_t kMixtureCells = 2048;
constexpr std::array<double, 5> kGlNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                            0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGlWeights = {0.2369268850561891, 0.4786286704993665,
                                              0.5688888888888889, 0.4786286704993665,
                                              0.2369268850561891};

template <class F>
double gauss_legendre(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kGlNodes.size(); ++i) s += kGlWeights[i] * f(c + h * kGlNodes[i]);
  return s * h;
}

double unit_uniform(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

MeasureSampler::MeasureSampler(Measure m) : measure_(std::move(m)) {
  if (measure_.canonical()) return;
  if (measure_.has_components()) {
    double acc = 0.0;
    for (const auto& c : measure_.components()) {
      components_.emplace_back(*c.measure);
      acc += c.weight;
      cumulative_weights_.push_back(acc);
    }
    // Coarse table of the mixture CDF to bracket the root search.
    const Interval s = measure_.truncated_support();
    const double h = s.length() / static_cast<double>(kMixtureCells);
    for (std::size_t i = 0; i <= kMixtureCells; ++i) {
      grid_.push_back(i == kMixtureCells ? s.hi : s.lo + h * static_cast<double>(i));
      cdf_.push_back(cdf(grid_.back()));
    }
    return;
  }
  const Interval s = measure_.truncated_support();
  const double h = s.length() / static_cast<double>(kCdfCells);
  grid_.resize(kCdfCells + 1);
  cdf_.assign(kCdfCells + 1, 0.0);
  for (std::size_t i = 0; i <= kCdfCells; ++i) grid_[i] = s.lo + h * static_cast<double>(i);
  grid_.back() = s.hi;
  for (std::size_t i = 0; i < kCdfCells; ++i) {
    cdf_[i + 1] = cdf_[i] + gauss_legendre([&](double t) { return measure_.density(t); }, grid_[i],
                                           grid_[i + 1]);
  }
  const double total = cdf_.back();
  for (double& c : cdf_) c /= total;
}

double MeasureSampler::draw(double u) const {
  if (components_.empty()) return quantile(u);
  double lo = kInf;
  double hi = -kInf;
  double t = 0.0;
  if (u > cdf_.front() && u < cdf_.back()) {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto cell = static_cast<std::size_t>(it - cdf_.begin()) - 1;
    lo = grid_[cell];
    hi = grid_[cell + 1];
    const double span = cdf_[cell + 1] - cdf_[cell];
    t = span > 0.0 ? lo + (hi - lo) * (u - cdf_[cell]) / span : 0.5 * (lo + hi);
  } else {
    for (const auto& c : components_) {
      const double q = c.draw(u);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    t = 0.5 * (lo + hi);
  }
  // Newton on F(t) = u, falling back to bisection whenever a step leaves the bracket.
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double f = cdf(t) - u;
    if (f == 0.0) return t;
    (f < 0.0 ? lo : hi) = t;
    const double rho = measure_.density(t);
    double next = rho > 0.0 ? t - f / rho : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-12) return next;
    t = next;
  }
  return t;
}

double MeasureSampler::cdf(double t) const {
  namespace bm = boost::math;
  if (!components_.empty()) {
    double f = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      f += (cumulative_weights_[i] - prev) * components_[i].cdf(t);
      prev = cumulative_weights_[i];
    }
    return f / prev;
  }
  const auto& c = measure_.canonical();
  if (!c) return generic_cdf(t);
  const Interval s = measure_.support();
  if (t <= s.lo) return 0.0;
  if (t >= s.hi) return 1.0;
  switch (c->kind) {
    case CanonicalKind::gaussian: return bm::cdf(bm::normal_distribution<>(0.0, 1.0), t);
    case CanonicalKind::hermite: return bm::cdf(bm::normal_distribution<>(0.0, std::sqrt(0.5)), t);
    case CanonicalKind::uniform01: return t;
    case CanonicalKind::legendre: return 0.5 * (t + 1.0);
    case CanonicalKind::beta01: return bm::cdf(bm::beta_distribution<>(c->alpha, c->beta), t);
    case CanonicalKind::gamma: return bm::cdf(bm::gamma_distribution<>(c->alpha, 1.0 / c->beta), t);
    case CanonicalKind::laguerre: return bm::cdf(bm::exponential_distribution<>(1.0), t);
    case CanonicalKind::jacobi:
      return bm::cdf(bm::beta_distribution<>(c->beta + 1.0, c->alpha + 1.0), 0.5 * (t + 1.0));
  }
  throw UnsupportedMeasureError("no sampler for this measure");
}

double MeasureSampler::generic_cdf(double t) const {
  if (t <= grid_.front()) return 0.0;
  if (t >= grid_.back()) return 1.0;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const std::size_t cell = std::min(static_cast<std::size_t>(it - grid_.begin()) - 1, kCdfCells - 1);
  const double a = grid_[cell];
  const double b = grid_[cell + 1];
  auto rho = [&](double x) { return measure_.density(x); };
  const double raw = gauss_legendre(rho, a, b);
  const double scale = raw > 0.0 ? (cdf_[cell + 1] - cdf_[cell]) / raw : 0.0;
  return cdf_[cell] + scale * gauss_legendre(rho, a, t);
}

double MeasureSampler::quantile(double u) const {
  namespace bm = boost::math;
  const auto& c = measure_.canonical();
  if (!c) return generic_quantile(u);
  switch (c->kind) {
    case CanonicalKind::gaussian: return bm::quantile(bm::normal_distribution<>(0.0, 1.0), u);
    case CanonicalKind::hermite:
      return bm::quantile(bm::normal_distribution<>(0.0, std::sqrt(0.5)), u);
    case CanonicalKind::uniform01: return u;
    case CanonicalKind::legendre: return 2.0 * u - 1.0;
    case CanonicalKind::beta01:
      return bm::quantile(bm::beta_distribution<>(c->alpha, c->beta), u);
    case CanonicalKind::gamma:
      return bm::quantile(bm::gamma_distribution<>(c->alpha, 1.0 / c->beta), u);
    case CanonicalKind::laguerre: return bm::quantile(bm::exponential_distribution<>(1.0), u);
    case CanonicalKind::jacobi:
      return 2.0 * bm::quantile(bm::beta_distribution<>(c->beta + 1.0, c->alpha + 1.0), u) - 1.0;
  }
  throw UnsupportedMeasureError("no sampler for this measure");
}

double MeasureSampler::generic_quantile(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t cell = it == cdf_.begin() ? 0 : static_cast<std::size_t>(it - cdf_.begin()) - 1;
  cell = std::min(cell, kCdfCells - 1);
  double lo = grid_[cell];
  double hi = grid_[cell + 1];
  const double target = u - cdf_[cell];
  const double a = grid_[cell];
  const double raw = gauss_legendre([&](double t) { return measure_.density(t); }, a, hi);
  const double scale = raw > 0.0 ? (cdf_[cell + 1] - cdf_[cell]) / raw : 0.0;
  while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    const double part =
        scale * gauss_legendre([&](double t) { return measure_.density(t); }, a, mid);
    if (part < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<std::vector<double>> sample_germ(const MultiOrthoBasis& basis, std::size_t count,
                                             std::uint64_t seed) {
  const std::size_t m = basis.dimension();
  std::vector<std::vector<double>> out(count, std::vector<double>(m));
  for (std::size_t dim = 0; dim < m; ++dim) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(dim)};
    std::mt19937_64 gen(seq);
    const MeasureSampler sampler(basis.factors()[dim].measure());
    for (std::size_t i = 0; i < count; ++i) out[i][dim] = sampler.draw(unit_uniform(gen));
  }
  return out;
}

}  // namespace chaoskit
