#include <doctest.h>

#include <chaoskit/basis.hpp>
#include <chaoskit/errors.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"

using namespace chaoskit;

namespace {

Measure eq_mixture() {
  const double w[] = {0.3, 0.7}, a[] = {2.0, 4.0}, b[] = {4.5, 1.5};
  return beta_mixture(w, a, b);
}

std::size_t choose(std::size_t n, std::size_t k) {
  return static_cast<std::size_t>(std::llround(oracle::binom(static_cast<int>(n), static_cast<int>(k))));
}

}  // namespace

TEST_CASE("univariate evaluation") {
  const auto u = OrthoBasis::canonical(CanonicalKind::uniform01, 4);
  CHECK(evaluate(u, 0, 0.77) == 1.0);
  CHECK(evaluate(u, 2, 0.5) == doctest::Approx(-1.0 / 12.0).epsilon(1e-15));
  CHECK(u.quadrature().size() == 10);
  CHECK(u.norm_squared(1) == doctest::Approx(1.0 / 12.0));
  CHECK_THROWS_AS(u.evaluate(5, 0.1), IndexError);
  const OrthoBasis mix(eq_mixture(), 4);
  CHECK(std::abs(evaluate(mix, 1, 0.6)) < 0.0015);
  CHECK(evaluate(mix, 1, mix.coefficients().alpha[0]) == 0.0);
}

TEST_CASE("forward recurrence matches expanded monomials") {
  std::mt19937_64 gen(99);
  const OrthoBasis bases[] = {OrthoBasis::canonical(CanonicalKind::uniform01, 10),
                              OrthoBasis::canonical(CanonicalKind::beta01, 10, 2.0, 4.5),
                              OrthoBasis::canonical(CanonicalKind::gaussian, 10),
                              OrthoBasis(eq_mixture(), 10)};
  for (const auto& b : bases) {
    const auto s = b.measure().truncated_support();
    const double lo = std::isfinite(s.lo) ? s.lo : -4.0;
    const double hi = std::isfinite(s.hi) ? s.hi : 4.0;
    std::uniform_real_distribution<double> dist(std::max(lo, -4.0), std::min(hi, 4.0));
    for (std::size_t k = 0; k <= 10; ++k) {
      const auto c = expand_monic(b.coefficients(), k);
      for (int i = 0; i < 100; ++i) {
        const double t = dist(gen);
        const double ref = oracle::horner(c, t);
        double scale = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) scale += std::abs(c[j]) * std::pow(std::abs(t), j);
        CHECK(std::abs(b.evaluate(k, t) - ref) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("construction methods agree") {
  const auto m = canonical_measure(CanonicalKind::beta01, 2.0, 4.5);
  const OrthoBasis cf(m, 6, ConstructionMethod::closed_form);
  const OrthoBasis st(m, 6, ConstructionMethod::stieltjes);
  const OrthoBasis la(m, 6, ConstructionMethod::lanczos);
  for (std::size_t k = 0; k < cf.coefficients().size(); ++k) {
    CHECK(std::abs(st.coefficients().alpha[k] - cf.coefficients().alpha[k]) < 1e-10);
    CHECK(std::abs(la.coefficients().beta[k] - cf.coefficients().beta[k]) < 1e-10);
  }
  CHECK_THROWS_AS(OrthoBasis(eq_mixture(), 3, ConstructionMethod::closed_form), UnsupportedMeasureError);
}

TEST_CASE("total-degree index sets") {
  const auto a = total_degree_index_set(1, 4);
  REQUIRE(a.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(a[k] == MultiIndex{k});
  const auto b = total_degree_index_set(2, 2);
  const std::vector<MultiIndex> expected = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  CHECK(b == expected);
  CHECK(total_degree_index_set(3, 4).size() == 35);
  for (std::size_t m = 1; m <= 4; ++m) {
    for (std::size_t p = 0; p <= 5; ++p) {
      const auto s = total_degree_index_set(m, p);
      CHECK(s.size() == choose(m + p, p));
      CHECK(s.front() == MultiIndex(m, 0));
    }
  }
}

TEST_CASE("multivariate evaluation") {
  const MultiOrthoBasis mb({OrthoBasis::canonical(CanonicalKind::uniform01, 3),
                            OrthoBasis::canonical(CanonicalKind::gaussian, 3)},
                           3);
  const double t[] = {0.5, 0.0};
  CHECK(evaluate_multi(mb, {0, 0}, t) == 1.0);
  CHECK(evaluate_multi(mb, {1, 1}, t) == 0.0);
  const double t1[] = {0.9, -1.3};
  const double t2[] = {0.9, 2.7};
  CHECK(mb.evaluate({2, 0}, t1) == mb.evaluate({2, 0}, t2));
  CHECK(mb.evaluate({1, 2}, t1) ==
        doctest::Approx(mb.factors()[0].evaluate(1, 0.9) * mb.factors()[1].evaluate(2, -1.3)));
  const auto all = mb.evaluate_all(t1);
  for (std::size_t p = 0; p < mb.size(); ++p) CHECK(all[p] == mb.evaluate(p, t1));
  CHECK(mb.position({1, 1}) == 4);
  CHECK(mb.first_degree_position(0) == 1);
  CHECK(mb.first_degree_position(1) == 2);
  CHECK_THROWS_AS(mb.position({3, 1}), IndexError);
  CHECK_THROWS_AS(mb.position({1}), ShapeError);
  const double bad[] = {0.1};
  CHECK_THROWS_AS(mb.evaluate_all(bad), ShapeError);
}

TEST_CASE("tensorized orthogonality of a product basis") {
  const MultiOrthoBasis mb({OrthoBasis(eq_mixture(), 3), OrthoBasis::canonical(CanonicalKind::gaussian, 3),
                            OrthoBasis::canonical(CanonicalKind::uniform01, 3)},
                           3);
  std::vector<const QuadratureRule*> rules;
  for (const auto& f : mb.factors()) rules.push_back(&f.quadrature());
  const std::size_t n = mb.size();
  std::vector<double> gram(n * n, 0.0);
  const auto& q0 = *rules[0];
  const auto& q1 = *rules[1];
  const auto& q2 = *rules[2];
  for (std::size_t i = 0; i < q0.size(); ++i) {
    for (std::size_t j = 0; j < q1.size(); ++j) {
      for (std::size_t k = 0; k < q2.size(); ++k) {
        const double t[] = {q0.nodes[i], q1.nodes[j], q2.nodes[k]};
        const double w = q0.weights[i] * q1.weights[j] * q2.weights[k];
        const auto v = mb.evaluate_all(t);
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) gram[a * n + b] += w * v[a] * v[b];
        }
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    double norm = 1.0;
    for (std::size_t d = 0; d < 3; ++d) norm *= mb.factors()[d].norm_squared(mb.index_set()[a][d]);
    CHECK(gram[a * n + a] == doctest::Approx(norm).epsilon(1e-10));
    CHECK(mb.norm_squared(a) == doctest::Approx(norm).epsilon(1e-14));
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b) CHECK(std::abs(gram[a * n + b]) <= 1e-9 * std::sqrt(gram[a * n + a] * gram[b * n + b]));
    }
  }
}

TEST_CASE("basis construction errors") {
  CHECK_THROWS_AS(total_degree_index_set(0, 2), DomainError);
  CHECK_THROWS_AS(MultiOrthoBasis({}, 2), DomainError);
  CHECK_THROWS_AS(MultiOrthoBasis({OrthoBasis::canonical(CanonicalKind::gaussian, 2)}, 3), DomainError);
  const auto uni = MultiOrthoBasis::univariate(OrthoBasis::canonical(CanonicalKind::gaussian, 4));
  CHECK(uni.size() == 5);
  CHECK(uni.total_degree() == 4);
}
