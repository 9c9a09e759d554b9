#pragma once

#include <string>
#include <vector>

#include "cosym/variational.hpp"

namespace cosym {

struct OptimizerOptions {
  int steps = 500;
  double tolerance = 1e-14;   // absolute gap at which the run stops
  int snapshot_stride = 50;   // keep every n-th iterate in the trajectory
  double armijo = 1e-4;       // sufficient-decrease constant
  int max_backtracks = 60;
  double initial_step = 1e-3;
};

enum class OptimizerStatus {
  converged,  // gap below tolerance or no further decrease possible
  max_steps,
};
const char* to_string(OptimizerStatus s);

struct OptimizerResult {
  Deformation final;
  std::vector<double> gap_history;      // one entry per accepted iterate, starting with the initial gap
  std::vector<Deformation> trajectory;  // snapshots at the stride, plus the final iterate
  std::vector<int> trajectory_steps;
  int iterations = 0;
  OptimizerStatus status = OptimizerStatus::max_steps;
  double sup_r = 0.0;
  double sup_Ru = 0.0;
  double divergence_residual = 0.0;  // max |int 8 mu R(u)| over the initial and final iterates
};

// Gradient descent with Barzilai-Borwein steps and Armijo backtracking on the
// closed-form energy gap over (u, r). Gradients use the exact adjoint of the
// difference operators, which needs a periodic fiber.
OptimizerResult minimize_energy(const Deformation& initial, double mu,
                                const AlmostCosymplecticStructure& s,
                                const OptimizerOptions& options = {});

// The discrete objective and its gradient with respect to the grid values.
struct GapGradient {
  double gap = 0.0;
  std::vector<double> d_u;
  std::vector<double> d_r;
};
GapGradient gap_gradient(const Deformation& d, double mu, const AlmostCosymplecticStructure& s,
                         const std::vector<double>& weights);

}  // namespace cosym
