#include <doctest.h>

#include <chaoskit/errors.hpp>
#include <chaoskit/tensor.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"

using namespace chaoskit;

namespace {

Measure eq_mixture() {
  const double w[] = {0.3, 0.7}, a[] = {2.0, 4.0}, b[] = {4.5, 1.5};
  return beta_mixture(w, a, b);
}

double max_abs(const Tensor& t) {
  double m = 0.0;
  for (std::size_t i = 0; i < t.nonzeros(); ++i) m = std::max(m, std::abs(t.value(i)));
  return m;
}

}  // namespace

TEST_CASE("order 2 tensor is the diagonal of norms") {
  for (const auto& b : {OrthoBasis::canonical(CanonicalKind::uniform01, 4),
                        OrthoBasis::canonical(CanonicalKind::gamma, 5, 2.0, 1.0), OrthoBasis(eq_mixture(), 4)}) {
    const auto t2 = compute_tensor(b, 2);
    double cum = 1.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      cum *= b.coefficients().beta[i];
      CHECK(t2({i, i}) == doctest::Approx(cum).epsilon(1e-10));
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (i != j) CHECK(t2({i, j}) == 0.0);
      }
    }
  }
  const auto u = compute_tensor(OrthoBasis::canonical(CanonicalKind::uniform01, 4), 2);
  CHECK(u({1, 1}) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
}

TEST_CASE("gaussian order 3 entries") {
  const auto b = OrthoBasis::canonical(CanonicalKind::gaussian, 4);
  const auto t3 = compute_tensor(b, 3);
  const auto t2 = compute_tensor(b, 2);
  CHECK(t3({1, 1, 2}) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(t3({2, 1, 1}) == t3({1, 1, 2}));
  CHECK(t3({1, 2, 1}) == t3({1, 1, 2}));
  CHECK(t3({0, 0, 1}) == 0.0);
  const auto nu = galerkin_nu(t3, t2);
  CHECK(nu(2, 1, 1) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(nu(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(nu(k, 0, k) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("tensors match brute-force integration") {
  for (const auto& b : {OrthoBasis::canonical(CanonicalKind::gaussian, 4),
                        OrthoBasis::canonical(CanonicalKind::uniform01, 4),
                        OrthoBasis::canonical(CanonicalKind::beta01, 4, 2.0, 4.5)}) {
    const auto t2 = compute_tensor(b, 2);
    const auto t3 = compute_tensor(b, 3);
    const std::size_t n = b.size();
    const auto rule = fejer1_rule(10000, b.measure().truncated_support(12));
    std::vector<double> w(rule.size());
    std::vector<std::vector<double>> v(n, std::vector<double>(rule.size()));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      w[q] = rule.weights[q] * b.measure().density(rule.nodes[q]);
      for (std::size_t k = 0; k < n; ++k) v[k][q] = b.evaluate(k, rule.nodes[q]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double ref2 = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) ref2 += w[q] * v[i][q] * v[j][q];
        CHECK(std::abs(t2({i, j}) - ref2) <= 1e-9);
        for (std::size_t k = 0; k < n; ++k) {
          double ref3 = 0.0;
          for (std::size_t q = 0; q < rule.size(); ++q) ref3 += w[q] * v[i][q] * v[j][q] * v[k][q];
          CHECK(std::abs(t3({i, j, k}) - ref3) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("storage invariants") {
  const auto b = OrthoBasis(eq_mixture(), 4);
  const auto t3 = compute_tensor(b, 3);
  const double scale = max_abs(t3);
  for (std::size_t e = 0; e < t3.nonzeros(); ++e) {
    const auto idx = t3.index(e);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    CHECK(std::abs(t3.value(e)) > 1e-12 * scale);
    std::vector<std::size_t> perm(idx.begin(), idx.end());
    do {
      CHECK(t3.get(perm) == t3.value(e));
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (e > 0) {
      const auto prev = t3.index(e - 1);
      CHECK(std::lexicographical_compare(prev.begin(), prev.end(), idx.begin(), idx.end()));
    }
  }
  const std::size_t short_idx[] = {1, 2};
  CHECK_THROWS_AS(t3.get(short_idx), ShapeError);
  CHECK_THROWS_AS(t3({0, 0, 5}), IndexError);
  CHECK_THROWS_AS(Tensor(0, 3), OrderError);
}

TEST_CASE("parity sparsity for symmetric measures") {
  for (const auto& b : {OrthoBasis::canonical(CanonicalKind::gaussian, 5),
                        OrthoBasis::canonical(CanonicalKind::uniform01, 5)}) {
    const auto t3 = compute_tensor(b, 3);
    const auto t4 = compute_tensor(b, 4);
    for (const Tensor* t : {&t3, &t4}) {
      for (std::size_t e = 0; e < t->nonzeros(); ++e) {
        std::size_t deg = 0;
        for (std::size_t k : t->index(e)) deg += k;
        CHECK(deg % 2 == 0);
      }
    }
  }
}

TEST_CASE("larger companion rules change nothing") {
  const auto m = canonical_measure(CanonicalKind::beta01, 2.0, 4.5);
  const OrthoBasis b(m, 4);
  const auto rc = b.coefficients_with(40);
  const auto fine = gauss_rule(rc, 20);
  const auto t3 = compute_tensor(b, 3);
  const double scale = max_abs(t3);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i; j < 5; ++j) {
      for (std::size_t k = j; k < 5; ++k) {
        const double v = integrate(fine, [&](double t) { return b.evaluate(i, t) * b.evaluate(j, t) * b.evaluate(k, t); });
        CHECK(std::abs(t3({i, j, k}) - v) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("multivariate tensors factorize") {
  const MultiOrthoBasis mb({OrthoBasis(eq_mixture(), 4), OrthoBasis::canonical(CanonicalKind::gaussian, 4),
                            OrthoBasis::canonical(CanonicalKind::gaussian, 4)},
                           4);
  const auto t3 = compute_tensor(mb, 3);
  std::vector<Tensor> uni;
  for (const auto& f : mb.factors()) uni.push_back(compute_tensor(f, 3));
  const auto& set = mb.index_set();
  const std::size_t n = mb.size();
  std::size_t nonzero = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      for (std::size_t c = b; c < n; ++c) {
        double prod = 1.0;
        for (std::size_t d = 0; d < 3; ++d) prod *= uni[d]({set[a][d], set[b][d], set[c][d]});
        CHECK(t3({a, b, c}) == prod);
        if (prod != 0.0) ++nonzero;
      }
    }
  }
  CHECK(t3.nonzeros() == nonzero);
  const auto t2 = compute_tensor(mb, 2);
  for (std::size_t a = 0; a < n; ++a) CHECK(t2({a, a}) == doctest::Approx(mb.norm_squared(a)).epsilon(1e-13));
}

TEST_CASE("galerkin map product") {
  const MultiOrthoBasis mb({OrthoBasis::canonical(CanonicalKind::uniform01, 3),
                            OrthoBasis::canonical(CanonicalKind::gaussian, 3)},
                           3);
  const auto t2 = compute_tensor(mb, 2);
  const auto t3 = compute_tensor(mb, 3);
  const auto nu = galerkin_nu(t3, t2);
  const std::size_t n = mb.size();
  std::vector<double> x(n), y(n), out(n), ref(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 0.3 + 0.1 * static_cast<double>(i);
    y[i] = 1.0 / (1.0 + static_cast<double>(i));
  }
  nu.multiply(x, y, out);
  for (std::size_t k1 = 0; k1 < n; ++k1) {
    for (std::size_t k2 = 0; k2 < n; ++k2) {
      for (std::size_t k3 = 0; k3 < n; ++k3) {
        ref[k1] += x[k2] * y[k3] * t3({k2, k3, k1}) / t2({k1, k1});
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) CHECK(out[k] == doctest::Approx(ref[k]).epsilon(1e-13).scale(1.0));
  std::vector<double> wrong(n + 1);
  CHECK_THROWS_AS(nu.multiply(wrong, y, out), ShapeError);
  CHECK_THROWS_AS(galerkin_nu(t2, t2), OrderError);
  CHECK_THROWS_AS(galerkin_nu(t3, compute_tensor(OrthoBasis::canonical(CanonicalKind::gaussian, 2), 2)),
                  ShapeError);
}
