#include "chaoskit/vandevusse.hpp"

#include <cmath>
#include <string>

#include "chaoskit/errors.hpp"

namespace chaoskit {

std::size_t VanDeVusseConfig::steps() const {
  if (!(dt > 0.0)) throw DomainError("step size must be positive");
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

VanDeVusseConfig vdv_reference_config(std::size_t total_degree, double relative_std) {
  std::vector<OrthoBasis> factors;
  factors.push_back(OrthoBasis::canonical(CanonicalKind::uniform01, total_degree));
  factors.push_back(OrthoBasis::canonical(CanonicalKind::uniform01, total_degree));
  auto basis = std::make_shared<const MultiOrthoBasis>(std::move(factors), total_degree);
  return VanDeVusseConfig{
      .basis = basis,
      .r1 = uniform_input(basis, 0, 50.0, relative_std * 50.0),
      .r2 = uniform_input(basis, 1, 100.0, relative_std * 100.0),
      .r3 = 10.0,
      .u = 0.1,
      .cA0 = PceVector::constant(basis, 0.5),
      .cB0 = PceVector::constant(basis, 0.1),
      .t_end = 0.1,
      .dt = 1e-4,
  };
}

namespace {

void check_lengths(const VdvState& s, std::size_t n) {
  if (s.cA.size() != n || s.cB.size() != n) {
    throw ShapeError("Van de Vusse state does not match the basis size");
  }
}

}  // namespace

VdvState vdv_galerkin_rhs(const VdvState& state, const VanDeVusseConfig& cfg,
                          const GalerkinMap& nu) {
  const std::size_t n = cfg.basis->size();
  check_lengths(state, n);
  if (nu.size() != n) throw ShapeError("Galerkin map does not match the basis size");
  const auto& r1 = cfg.r1.coefficients();
  const auto& r2 = cfg.r2.coefficients();

  VdvState out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.cA[k] = -state.cA[k] * cfg.u;
    out.cB[k] = -state.cB[k] * cfg.u;
  }
  for (const auto& t : nu.terms()) {
    const double r1cA = r1[t.k2] * state.cA[t.k3] * t.value;
    out.cA[t.k1] -= r1cA + cfg.r3 * state.cA[t.k2] * state.cA[t.k3] * t.value;
    out.cB[t.k1] += r1cA - r2[t.k2] * state.cB[t.k3] * t.value;
  }
  return out;
}

VdvTrajectory vdv_propagate(const VanDeVusseConfig& cfg) {
  const std::size_t n = cfg.basis->size();
  const std::size_t steps = cfg.steps();
  const Tensor t2 = compute_tensor(*cfg.basis, 2);
  const Tensor t3 = compute_tensor(*cfg.basis, 3);
  const GalerkinMap nu = galerkin_nu(t3, t2);

  VdvTrajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  VdvState x{cfg.cA0.coefficients(), cfg.cB0.coefficients()};
  check_lengths(x, n);

  auto axpy = [n](const VdvState& a, double h, const VdvState& b) {
    VdvState r = a;
    for (std::size_t k = 0; k < n; ++k) {
      r.cA[k] += h * b.cA[k];
      r.cB[k] += h * b.cB[k];
    }
    return r;
  };

  const double h = cfg.dt;
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  for (std::size_t s = 0; s < steps; ++s) {
    const VdvState k1 = vdv_galerkin_rhs(x, cfg, nu);
    const VdvState k2 = vdv_galerkin_rhs(axpy(x, 0.5 * h, k1), cfg, nu);
    const VdvState k3 = vdv_galerkin_rhs(axpy(x, 0.5 * h, k2), cfg, nu);
    const VdvState k4 = vdv_galerkin_rhs(axpy(x, h, k3), cfg, nu);
    const double t = static_cast<double>(s + 1) * h;
    for (std::size_t k = 0; k < n; ++k) {
      x.cA[k] += h / 6.0 * (k1.cA[k] + 2.0 * k2.cA[k] + 2.0 * k3.cA[k] + k4.cA[k]);
      x.cB[k] += h / 6.0 * (k1.cB[k] + 2.0 * k2.cB[k] + 2.0 * k3.cB[k] + k4.cB[k]);
      if (!std::isfinite(x.cA[k]) || !std::isfinite(x.cB[k])) {
        throw BlowUpError("Galerkin system diverged at t = " + std::to_string(t), t);
      }
    }
    traj.times.push_back(t);
    traj.states.push_back(x);
  }

  for (const auto& st : traj.states) {
    const PceVector a(cfg.basis, st.cA);
    const PceVector b(cfg.basis, st.cB);
    traj.mean_cA.push_back(mean(a));
    traj.std_cA.push_back(std_dev(a, t2));
    traj.mean_cB.push_back(mean(b));
    traj.std_cB.push_back(std_dev(b, t2));
  }
  return traj;
}

std::vector<std::pair<double, double>> vdv_deterministic(double r1, double r2, double r3,
                                                         double u, double cA0, double cB0,
                                                         double dt, std::size_t steps) {
  auto rhs = [&](double a, double b) {
    return std::pair{-a * u - (r1 * a + r3 * a * a), -b * u + (r1 * a - r2 * b)};
  };
  std::vector<std::pair<double, double>> out;
  out.reserve(steps + 1);
  double a = cA0;
  double b = cB0;
  out.emplace_back(a, b);
  for (std::size_t s = 0; s < steps; ++s) {
    const auto [a1, b1] = rhs(a, b);
    const auto [a2, b2] = rhs(a + 0.5 * dt * a1, b + 0.5 * dt * b1);
    const auto [a3, b3] = rhs(a + 0.5 * dt * a2, b + 0.5 * dt * b2);
    const auto [a4, b4] = rhs(a + dt * a3, b + dt * b3);
    a += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    b += dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
    if (!std::isfinite(a) || !std::isfinite(b)) {
      const double t = static_cast<double>(s + 1) * dt;
      throw BlowUpError("model diverged at t = " + std::to_string(t), t);
    }
    out.emplace_back(a, b);
  }
  return out;
}

std::vector<std::size_t> vdv_checkpoints(const VanDeVusseConfig& cfg, std::size_t count) {
  const std::size_t steps = cfg.steps();
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= count; ++i) out.push_back(steps * i / count);
  return out;
}

VdvMonteCarlo vdv_monte_carlo(const VanDeVusseConfig& cfg, std::size_t samples,
                              std::uint64_t seed, const std::vector<std::size_t>& steps) {
  const std::size_t total = cfg.steps();
  for (std::size_t s : steps) {
    if (s > total) throw IndexError("checkpoint beyond the integration horizon");
  }
  const auto germs = sample_germ(*cfg.basis, samples, seed);
  const std::size_t c = steps.size();
  // Welford accumulators per checkpoint.
  std::vector<double> ma(c, 0.0), sa(c, 0.0), mb(c, 0.0), sb(c, 0.0);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto& g = germs[i];
    const auto path = vdv_deterministic(sample(cfg.r1, g), sample(cfg.r2, g), cfg.r3, cfg.u,
                                        sample(cfg.cA0, g), sample(cfg.cB0, g), cfg.dt, total);
    const double n = static_cast<double>(i + 1);
    for (std::size_t j = 0; j < c; ++j) {
      const auto [a, b] = path[steps[j]];
      const double da = a - ma[j];
      ma[j] += da / n;
      sa[j] += da * (a - ma[j]);
      const double db = b - mb[j];
      mb[j] += db / n;
      sb[j] += db * (b - mb[j]);
    }
  }
  VdvMonteCarlo mc;
  mc.checkpoint_steps = steps;
  mc.samples = samples;
  const double denom = samples > 1 ? static_cast<double>(samples - 1) : 1.0;
  for (std::size_t j = 0; j < c; ++j) {
    mc.times.push_back(static_cast<double>(steps[j]) * cfg.dt);
    mc.mean_cA.push_back(ma[j]);
    mc.std_cA.push_back(std::sqrt(sa[j] / denom));
    mc.mean_cB.push_back(mb[j]);
    mc.std_cB.push_back(std::sqrt(sb[j] / denom));
  }
  return mc;
}

}  // namespace chaoskit
