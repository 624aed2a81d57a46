#pragma once

#include <cstdint>
#include <vector>

#include "chaoskit/pce.hpp"
#include "chaoskit/tensor.hpp"

namespace chaoskit {

/// Van de Vusse reactor with uncertain rates r1, r2:
///   cA' = -cA u - r1 cA - r3 cA^2
///   cB' = -cB u + r1 cA - r2 cB
struct VanDeVusseConfig {
  BasisPtr basis;
  PceVector r1;
  PceVector r2;
  double r3 = 10.0;
  double u = 0.1;
  PceVector cA0;
  PceVector cB0;
  double t_end = 0.1;
  double dt = 1e-4;

  std::size_t steps() const;
};

/// Two uniform germs, total degree 4; r1 ~ U with mean 50 and std 5,
/// r2 ~ U with mean 100 and std 10, r3 = 10, u = 0.1, cA0 = 0.5, cB0 = 0.1.
VanDeVusseConfig vdv_reference_config(std::size_t total_degree = 4, double relative_std = 0.1);

struct VdvState {
  std::vector<double> cA;
  std::vector<double> cB;
};

/// Right-hand side of the projected system for every basis index.
VdvState vdv_galerkin_rhs(const VdvState& state, const VanDeVusseConfig& cfg,
                          const GalerkinMap& nu);

struct VdvTrajectory {
  std::vector<double> times;
  std::vector<VdvState> states;
  std::vector<double> mean_cA, std_cA, mean_cB, std_cB;
};

/// Classical RK4 with the configured fixed step. Throws BlowUpError with the
/// offending time if a coefficient becomes non-finite.
VdvTrajectory vdv_propagate(const VanDeVusseConfig& cfg);

/// One realization of the scalar model, same RK4 discretization. Returns
/// (cA, cB) at every step including t = 0.
std::vector<std::pair<double, double>> vdv_deterministic(double r1, double r2, double r3,
                                                         double u, double cA0, double cB0,
                                                         double dt, std::size_t steps);

struct VdvMonteCarlo {
  std::vector<std::size_t> checkpoint_steps;
  std::vector<double> times;
  std::vector<double> mean_cA, std_cA, mean_cB, std_cB;
  std::size_t samples = 0;
};

/// Steps of `count` evenly spaced checkpoints ending at t_end.
std::vector<std::size_t> vdv_checkpoints(const VanDeVusseConfig& cfg, std::size_t count);

/// Seeded sample moments at the given steps, each sample integrated by
/// vdv_deterministic with PCE inputs evaluated at a germ draw.
VdvMonteCarlo vdv_monte_carlo(const VanDeVusseConfig& cfg, std::size_t samples,
                              std::uint64_t seed, const std::vector<std::size_t>& steps);

}  // namespace chaoskit
