#include "chaoskit/ocp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "chaoskit/errors.hpp"

namespace chaoskit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Measure reactor_rate_mixture() {
  const std::array<double, 2> w = {0.3, 0.7};
  const std::array<double, 2> a = {2.0, 4.0};
  const std::array<double, 2> b = {4.5, 1.5};
  return beta_mixture(w, a, b);
}

OcpConfig ocp_reference_config(std::size_t total_degree) {
  std::vector<OrthoBasis> factors;
  factors.emplace_back(reactor_rate_mixture(), total_degree);
  factors.push_back(OrthoBasis::canonical(CanonicalKind::gaussian, total_degree));
  factors.push_back(OrthoBasis::canonical(CanonicalKind::gaussian, total_degree));
  auto basis = std::make_shared<const MultiOrthoBasis>(std::move(factors), total_degree);
  OcpConfig cfg{
      .basis = basis,
      .k = affine_input(basis, 0, 0.923, 0.926 - 0.923),
      .x10 = gaussian_input(basis, 1, 0.5, 1.0 / 60.0),
      .x20 = gaussian_input(basis, 2, 0.1, 0.01),
  };
  return cfg;
}

namespace {

void check_basis(const PceVector& x, const OcpConfig& cfg) {
  if (!same_basis(*x.basis(), *cfg.basis)) throw ShapeError("OCP expansion on a foreign basis");
}

// Coefficient-space matrix of y -> galerkin(k, y).
MatrixXd multiplication_matrix(const PceVector& k, const GalerkinMap& nu) {
  const std::size_t n = k.size();
  MatrixXd m = MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& t : nu.terms()) {
    m(static_cast<Eigen::Index>(t.k1), static_cast<Eigen::Index>(t.k3)) += k[t.k2] * t.value;
  }
  return m;
}

std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

struct Condensed {
  Eigen::Index basis_size = 0;
  std::vector<VectorXd> offsets;     // c_t, t = 0..T
  std::vector<MatrixXd> sensitivity;  // Gamma_t, t = 0..T
  MatrixXd p;                        // J = u'Pu + 2q'u + c
  VectorXd q;
  double c = 0.0;
  VectorXd norms;
};

Condensed condense(const OcpConfig& cfg) {
  if (cfg.horizon == 0) throw DomainError("OCP horizon must be positive");
  if (!(cfg.r > 0.0)) throw DomainError("control weight R must be positive");
  const Eigen::Matrix2d qm{{cfg.q[0], 0.5 * (cfg.q[1] + cfg.q[2])},
                           {0.5 * (cfg.q[1] + cfg.q[2]), cfg.q[3]}};
  if (qm.determinant() <= 0.0 || qm(0, 0) <= 0.0) throw DomainError("state weight Q must be positive definite");
  check_basis(cfg.k, cfg);
  check_basis(cfg.x10, cfg);
  check_basis(cfg.x20, cfg);

  const Tensor t2 = compute_tensor(*cfg.basis, 2);
  const Tensor t3 = compute_tensor(*cfg.basis, 3);
  const GalerkinMap nu = galerkin_nu(t3, t2);

  Condensed out;
  const Eigen::Index l = static_cast<Eigen::Index>(cfg.basis->size());
  const Eigen::Index n = 2 * l;
  const Eigen::Index T = static_cast<Eigen::Index>(cfg.horizon);
  out.basis_size = l;
  out.norms.resize(l);
  for (Eigen::Index k = 0; k < l; ++k) {
    out.norms(k) = t2({static_cast<std::size_t>(k), static_cast<std::size_t>(k)});
  }

  MatrixXd a = MatrixXd::Zero(n, n);
  a.topLeftCorner(l, l) = multiplication_matrix(cfg.k, nu);
  a.bottomLeftCorner(l, l).diagonal().setConstant(cfg.a21);
  a.bottomRightCorner(l, l).diagonal().setConstant(cfg.a22);
  VectorXd b = VectorXd::Zero(n);
  b(0) = cfg.b1;
  b(l) = cfg.b2;

  MatrixXd w(n, n);
  w.setZero();
  w.topLeftCorner(l, l) = qm(0, 0) * out.norms.asDiagonal();
  w.topRightCorner(l, l) = qm(0, 1) * out.norms.asDiagonal();
  w.bottomLeftCorner(l, l) = qm(1, 0) * out.norms.asDiagonal();
  w.bottomRightCorner(l, l) = qm(1, 1) * out.norms.asDiagonal();

  VectorXd x0(n);
  for (Eigen::Index k = 0; k < l; ++k) {
    x0(k) = cfg.x10[static_cast<std::size_t>(k)];
    x0(l + k) = cfg.x20[static_cast<std::size_t>(k)];
  }
  out.offsets.push_back(x0);
  out.sensitivity.push_back(MatrixXd::Zero(n, T));
  out.p = cfg.r * MatrixXd::Identity(T, T);
  out.q = VectorXd::Zero(T);
  for (Eigen::Index t = 1; t <= T; ++t) {
    VectorXd c = a * out.offsets.back();
    MatrixXd g = a * out.sensitivity.back();
    g.col(t - 1) += b;
    const MatrixXd wg = w * g;
    out.p.noalias() += g.transpose() * wg;
    out.q.noalias() += wg.transpose() * c;
    out.c += c.dot(w * c);
    out.offsets.push_back(std::move(c));
    out.sensitivity.push_back(std::move(g));
  }
  out.p = 0.5 * (out.p + out.p.transpose());
  return out;
}

// E[x2] + lambda std(x2) <= x2_max as the cone (w0, w1) with
// w0 = x2_max - a'u - a0 and w1 = lambda (F u + f).
struct Cone {
  VectorXd a;
  double a0 = 0.0;
  MatrixXd f_mat;
  VectorXd f_vec;
  MatrixXd ftf;
};

struct ConeEval {
  double w0 = 0.0;
  VectorXd w1;
  double det = 0.0;
};

class Barrier {
 public:
  Barrier(const OcpConfig& cfg, const Condensed& cd) : x2_max_(cfg.x2_max), lambda_(cfg.lambda) {
    const Eigen::Index l = cd.basis_size;
    const VectorXd scale = cd.norms.tail(l - 1).cwiseSqrt();
    for (std::size_t t = 1; t < cd.offsets.size(); ++t) {
      Cone c;
      c.a = cd.sensitivity[t].row(l).transpose();
      c.a0 = cd.offsets[t](l);
      c.f_mat = scale.asDiagonal() * cd.sensitivity[t].middleRows(l + 1, l - 1);
      c.f_vec = scale.asDiagonal() * cd.offsets[t].segment(l + 1, l - 1);
      c.ftf = c.f_mat.transpose() * c.f_mat;
      cones_.push_back(std::move(c));
    }
  }

  std::size_t size() const { return cones_.size(); }
  double degree() const { return 2.0 * static_cast<double>(cones_.size()); }

  ConeEval eval(const Cone& c, const VectorXd& u) const {
    ConeEval e;
    e.w0 = x2_max_ - c.a0 - c.a.dot(u);
    e.w1 = lambda_ * (c.f_mat * u + c.f_vec);
    const double nrm = e.w1.norm();
    e.det = (e.w0 - nrm) * (e.w0 + nrm);
    if (e.w0 <= nrm) e.det = -1.0;
    return e;
  }

  bool strictly_feasible(const VectorXd& u) const {
    return std::all_of(cones_.begin(), cones_.end(),
                       [&](const Cone& c) { return eval(c, u).det > 0.0; });
  }

  double value(const VectorXd& u) const {
    double s = 0.0;
    for (const auto& c : cones_) {
      const auto e = eval(c, u);
      if (e.det <= 0.0) return std::numeric_limits<double>::infinity();
      s -= std::log(e.det);
    }
    return s;
  }

  // Gradient and Hessian of the barrier.
  void derivatives(const VectorXd& u, VectorXd& grad, MatrixXd& hess) const {
    grad.setZero(u.size());
    hess.setZero(u.size(), u.size());
    for (const auto& c : cones_) {
      const auto e = eval(c, u);
      const VectorXd p = e.w0 * c.a + lambda_ * (c.f_mat.transpose() * e.w1);
      grad.noalias() += (2.0 / e.det) * p;
      hess.noalias() += (-2.0 / e.det) * (c.a * c.a.transpose() - lambda_ * lambda_ * c.ftf);
      hess.noalias() += (4.0 / (e.det * e.det)) * (p * p.transpose());
    }
  }

  // Scalar form g(u) = a'u + a0 + lambda ||F u + f|| - x2_max <= 0.
  struct Scalar {
    double g = 0.0;
    VectorXd grad;
    MatrixXd hess;
    double multiplier = 0.0;  // barrier estimate 2 w0 / (tb det)
  };

  Scalar scalar(std::size_t i, const VectorXd& u, double tb) const {
    const Cone& c = cones_[i];
    const auto e = eval(c, u);
    const double nrm = e.w1.norm();
    Scalar s;
    s.g = nrm - e.w0;
    s.grad = c.a;
    s.hess = MatrixXd::Zero(u.size(), u.size());
    if (nrm > 0.0) {
      const VectorXd fw = lambda_ * (c.f_mat.transpose() * e.w1);
      s.grad += fw / nrm;
      s.hess = (lambda_ * lambda_ / nrm) * c.ftf - (fw * fw.transpose()) / (nrm * nrm * nrm);
    }
    if (e.det > 0.0) s.multiplier = 2.0 * e.w0 / (tb * e.det);
    return s;
  }

 private:
  double x2_max_;
  double lambda_;
  std::vector<Cone> cones_;
};

double quadratic(const Condensed& cd, const VectorXd& u) {
  return u.dot(cd.p * u) + 2.0 * cd.q.dot(u) + cd.c;
}

void fill_result(const OcpConfig& cfg, const Condensed& cd, const VectorXd& u, OcpResult& res) {
  const Eigen::Index l = cd.basis_size;
  res.u = to_std(u);
  res.objective = quadratic(cd, u);
  res.max_constraint_value = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < cd.offsets.size(); ++t) {
    const VectorXd x = cd.offsets[t] + cd.sensitivity[t] * u;
    const VectorXd x1 = x.head(l);
    const VectorXd x2 = x.tail(l);
    res.x1.push_back(to_std(x1));
    res.x2.push_back(to_std(x2));
    auto moment = [&](const VectorXd& v) {
      const double var = (v.tail(l - 1).array().square() * cd.norms.tail(l - 1).array()).sum();
      return std::sqrt(std::max(var, 0.0));
    };
    res.mean_x1.push_back(x1(0));
    res.std_x1.push_back(moment(x1));
    res.mean_x2.push_back(x2(0));
    res.std_x2.push_back(moment(x2));
    res.max_constraint_value = std::max(
        res.max_constraint_value, x2(0) + cfg.lambda * res.std_x2.back() - cfg.x2_max);
  }
}

struct Kkt {
  double stationarity = 0.0;
  double complementarity = 0.0;
};

Kkt kkt_residuals(const Condensed& cd, const Barrier& barrier, const VectorXd& u,
                  const VectorXd& mu) {
  const VectorXd grad_j = 2.0 * (cd.p * u + cd.q);
  VectorXd r = grad_j;
  double comp = 0.0;
  for (std::size_t i = 0; i < barrier.size(); ++i) {
    const auto s = barrier.scalar(i, u, 1.0);
    r += mu(static_cast<Eigen::Index>(i)) * s.grad;
    comp = std::max(comp, std::abs(mu(static_cast<Eigen::Index>(i)) * s.g));
  }
  return {r.lpNorm<Eigen::Infinity>() / std::max(1.0, grad_j.lpNorm<Eigen::Infinity>()),
          comp / std::max(1.0, std::abs(quadratic(cd, u)))};
}

// Newton on the KKT system of the constraints the barrier identified as
// active (multiplier above slack). Accepted only if the multipliers stay
// nonnegative and every constraint holds.
bool polish(const Condensed& cd, const Barrier& barrier, double tb, VectorXd& u, VectorXd& mu) {
  const Eigen::Index n = u.size();
  std::vector<std::size_t> active;
  VectorXd m0(static_cast<Eigen::Index>(barrier.size()));
  for (std::size_t i = 0; i < barrier.size(); ++i) {
    const auto s = barrier.scalar(i, u, tb);
    m0(static_cast<Eigen::Index>(i)) = s.multiplier;
    if (s.multiplier > -s.g) active.push_back(i);
  }
  const Eigen::Index na = static_cast<Eigen::Index>(active.size());
  VectorXd v = u;
  VectorXd m(na);
  for (Eigen::Index j = 0; j < na; ++j) m(j) = m0(static_cast<Eigen::Index>(active[j]));

  for (int it = 0; it < 30; ++it) {
    MatrixXd kkt = MatrixXd::Zero(n + na, n + na);
    VectorXd rhs(n + na);
    kkt.topLeftCorner(n, n) = 2.0 * cd.p;
    rhs.head(n) = -2.0 * (cd.p * v + cd.q);
    for (Eigen::Index j = 0; j < na; ++j) {
      const auto s = barrier.scalar(active[static_cast<std::size_t>(j)], v, tb);
      kkt.topLeftCorner(n, n) += m(j) * s.hess;
      kkt.block(0, n + j, n, 1) = s.grad;
      kkt.block(n + j, 0, 1, n) = s.grad.transpose();
      rhs(n + j) = -s.g;
    }
    const VectorXd sol = kkt.fullPivLu().solve(rhs);
    if (!sol.allFinite()) return false;
    v += sol.head(n);
    m = sol.tail(na);
    if (sol.head(n).lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + v.lpNorm<Eigen::Infinity>())) break;
  }

  if (na > 0 && m.minCoeff() < 0.0) return false;
  for (std::size_t i = 0; i < barrier.size(); ++i) {
    if (barrier.scalar(i, v, tb).g > 1e-12) return false;
  }
  VectorXd full = VectorXd::Zero(static_cast<Eigen::Index>(barrier.size()));
  for (Eigen::Index j = 0; j < na; ++j) full(static_cast<Eigen::Index>(active[static_cast<std::size_t>(j)])) = m(j);
  if (kkt_residuals(cd, barrier, v, full).stationarity > kkt_residuals(cd, barrier, u, m0).stationarity) {
    return false;
  }
  u = v;
  mu = full;
  return true;
}

}  // namespace

std::pair<PceVector, PceVector> ocp_galerkin_dynamics(const PceVector& x1, const PceVector& x2,
                                                      double u, const OcpConfig& cfg,
                                                      const GalerkinMap& nu) {
  check_basis(x1, cfg);
  check_basis(x2, cfg);
  check_basis(cfg.k, cfg);
  PceVector n1 = galerkin_multiply(cfg.k, x1, nu);
  PceVector n2 = PceVector::zeros(cfg.basis);
  for (std::size_t k = 0; k < x1.size(); ++k) {
    n2.coefficients()[k] = cfg.a21 * x1[k] + cfg.a22 * x2[k];
  }
  n1.coefficients()[0] += cfg.b1 * u;
  n2.coefficients()[0] += cfg.b2 * u;
  return {std::move(n1), std::move(n2)};
}

OcpResult ocp_solve(const OcpConfig& cfg) {
  const Condensed cd = condense(cfg);
  const Eigen::Index T = static_cast<Eigen::Index>(cfg.horizon);
  OcpResult res;

  if (!std::isfinite(cfg.x2_max)) {
    res.constrained = false;
    const VectorXd u = cd.p.llt().solve(-cd.q);
    fill_result(cfg, cd, u, res);
    const VectorXd grad = 2.0 * (cd.p * u + cd.q);
    res.stationarity = grad.lpNorm<Eigen::Infinity>() /
                       std::max(1.0, (2.0 * cd.q).lpNorm<Eigen::Infinity>());
    res.complementarity = 0.0;
    res.objective_history.push_back(res.objective);
    res.newton_iterations = 1;
    return res;
  }

  {
    const Eigen::Index l = cd.basis_size;
    const VectorXd x20 = cd.offsets[0].tail(l);
    const double sd =
        std::sqrt((x20.tail(l - 1).array().square() * cd.norms.tail(l - 1).array()).sum());
    const double v0 = x20(0) + cfg.lambda * sd;
    if (v0 > cfg.x2_max) {
      throw InfeasibleError("chance constraint violated at t = 0: " + std::to_string(v0) + " > " +
                            std::to_string(cfg.x2_max));
    }
  }

  const Barrier barrier(cfg, cd);
  VectorXd u = VectorXd::Zero(T);
  {
    bool found = barrier.strictly_feasible(u);
    for (double c = 0.125; !found && c <= 1e6; c *= 2.0) {
      u.setConstant(c);
      found = barrier.strictly_feasible(u);
    }
    if (!found) throw InfeasibleError("no strictly feasible control found");
  }

  auto merit = [&](const VectorXd& v, double tb) { return tb * quadratic(cd, v) + barrier.value(v); };

  double tb = std::max(1.0, barrier.degree() / std::max(1e-3, std::abs(quadratic(cd, u))));
  const double growth = 10.0;
  VectorXd gb;
  MatrixXd hb;
  std::size_t iterations = 0;
  while (true) {
    // Centering.
    double previous = std::numeric_limits<double>::infinity();
    for (;;) {
      if (++iterations > cfg.max_newton_iterations) {
        throw ConvergenceError("barrier Newton iterations exhausted", {}, to_std(u));
      }
      barrier.derivatives(u, gb, hb);
      const VectorXd grad = tb * 2.0 * (cd.p * u + cd.q) + gb;
      const MatrixXd hess = tb * 2.0 * cd.p + hb;
      const VectorXd step = -hess.ldlt().solve(grad);
      const double decrement = -grad.dot(step);
      if (!(decrement >= 0.0) || !std::isfinite(decrement)) {
        throw ConvergenceError("barrier Hessian lost definiteness", {}, to_std(u));
      }
      // Stop at the rounding floor, where Newton no longer contracts.
      if (decrement < 1e-12 || (decrement < 1e-6 && decrement > 0.5 * previous)) break;
      previous = decrement;
      double s = 1.0;
      while (!barrier.strictly_feasible(u + s * step)) s *= 0.5;
      if (decrement > 1e-8) {
        const double f0 = merit(u, tb);
        while (merit(u + s * step, tb) > f0 - 0.25 * s * decrement && s > 1e-16) s *= 0.5;
      }
      u += s * step;
      if (s < 1e-16) break;
    }
    res.objective_history.push_back(quadratic(cd, u));
    const double gap = barrier.degree() / tb;
    if (gap <= cfg.tolerance * std::max(1.0, std::abs(res.objective_history.back()))) break;
    tb *= growth;
  }

  VectorXd mu(static_cast<Eigen::Index>(barrier.size()));
  for (std::size_t i = 0; i < barrier.size(); ++i) {
    mu(static_cast<Eigen::Index>(i)) = barrier.scalar(i, u, tb).multiplier;
  }
  res.polished = polish(cd, barrier, tb, u, mu);
  if (res.polished) res.objective_history.push_back(quadratic(cd, u));
  fill_result(cfg, cd, u, res);
  const Kkt kkt = kkt_residuals(cd, barrier, u, mu);
  res.stationarity = kkt.stationarity;
  res.complementarity = kkt.complementarity;
  res.multipliers = to_std(mu);
  res.newton_iterations = iterations;
  return res;
}

double ocp_violation_rate(const OcpConfig& cfg, const std::vector<double>& u, std::size_t samples,
                          std::uint64_t seed) {
  if (u.size() != cfg.horizon) throw ShapeError("control sequence length differs from the horizon");
  if (samples == 0) throw DomainError("at least one sample is required");
  const auto germs = sample_germ(*cfg.basis, samples, seed);
  std::size_t violations = 0;
  for (const auto& g : germs) {
    const double k = sample(cfg.k, g);
    double x1 = sample(cfg.x10, g);
    double x2 = sample(cfg.x20, g);
    bool bad = x2 > cfg.x2_max;
    for (std::size_t t = 0; t < cfg.horizon && !bad; ++t) {
      const double n1 = k * x1 + cfg.b1 * u[t];
      const double n2 = cfg.a21 * x1 + cfg.a22 * x2 + cfg.b2 * u[t];
      x1 = n1;
      x2 = n2;
      bad = x2 > cfg.x2_max;
    }
    if (bad) ++violations;
  }
  return static_cast<double>(violations) / static_cast<double>(samples);
}

}  // namespace chaoskit
