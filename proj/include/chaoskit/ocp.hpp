#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "chaoskit/pce.hpp"
#include "chaoskit/tensor.hpp"

namespace chaoskit {

/// x(t+1) = A x(t) + B u(t) with A = (k 0; a21 a22), uncertain k and x(0).
/// Minimizes sum_t E[x(t+1)' Q x(t+1)] + R u(t)^2 subject to
/// E[x2(t)] + lambda std(x2(t)) <= x2_max for t = 0..horizon.
struct OcpConfig {
  BasisPtr basis;
  PceVector k;
  double a21 = 0.088;
  double a22 = 0.819;
  double b1 = -0.005;
  double b2 = -0.002;
  std::array<double, 4> q = {1.0, 0.0, 0.0, 1.0};  // row-major 2x2
  double r = 1.0;
  std::size_t horizon = 75;
  double lambda = 1.618;
  double x2_max = 0.17;
  PceVector x10;
  PceVector x20;

  // Barrier solver settings.
  double tolerance = 1e-9;  // relative duality gap
  std::size_t max_newton_iterations = 2000;
};

/// Beta mixture 0.3 Beta(2, 4.5) + 0.7 Beta(4, 1.5) on [0, 1].
Measure reactor_rate_mixture();

/// k = 0.923 + 0.003 z on the beta-mixture germ, x1(0) ~ N(1/2, (1/60)^2),
/// x2(0) ~ N(1/10, (1/100)^2); three germs, total degree 4.
OcpConfig ocp_reference_config(std::size_t total_degree = 4);

/// One step of the projected dynamics.
std::pair<PceVector, PceVector> ocp_galerkin_dynamics(const PceVector& x1, const PceVector& x2,
                                                      double u, const OcpConfig& cfg,
                                                      const GalerkinMap& nu);

struct OcpResult {
  std::vector<double> u;
  double objective = 0.0;
  // Coefficients and moments of x1, x2 at t = 0..horizon.
  std::vector<std::vector<double>> x1, x2;
  std::vector<double> mean_x1, std_x1, mean_x2, std_x2;
  // max_t (E[x2] + lambda std[x2] - x2_max); <= 0 when feasible.
  double max_constraint_value = 0.0;
  double stationarity = 0.0;     // relative gradient-of-Lagrangian norm
  double complementarity = 0.0;  // max |mu_t g_t| relative to the objective
  std::vector<double> multipliers;  // one per constrained step t = 1..horizon
  bool polished = false;            // active-set KKT refinement accepted
  std::vector<double> objective_history;  // at each central-path point
  std::size_t newton_iterations = 0;
  bool constrained = true;
};

/// Condenses the projected dynamics into a QP in u and solves it. Without a
/// finite x2_max the problem is an unconstrained least-squares solve; otherwise
/// a log-barrier Newton method over second-order-cone constraints is used.
/// Throws InfeasibleError if x(0) violates the constraint or no strictly
/// feasible start is found, ConvergenceError if Newton stalls.
OcpResult ocp_solve(const OcpConfig& cfg);

/// Fraction of seeded realizations (k, x(0)) driven by `u` whose x2 exceeds
/// x2_max at any t = 0..horizon.
double ocp_violation_rate(const OcpConfig& cfg, const std::vector<double>& u, std::size_t samples,
                          std::uint64_t seed);

}  // namespace chaoskit
