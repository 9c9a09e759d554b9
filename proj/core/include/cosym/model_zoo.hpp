#pragma once

#include <cmath>

#include "cosym/cosymplectic_core.hpp"

namespace cosym {

struct HyperbolicModel {
  IntMat2 L{2, 1, 1, 1};
  double lambda = 0.0;        // eigenvalue with |lambda| > 1
  Eigen::Vector2d w_plus;     // L w+ = lambda w+
  Eigen::Vector2d w_minus;    // L w- = lambda^{-1} w-
  Eigen::Vector2d theta_plus;   // dual coframe: theta+(w+) = 1, theta+(w-) = 0
  Eigen::Vector2d theta_minus;
  double tau = 1.0;
  double V = 1.0;

  double log_abs_lambda() const { return std::log(std::abs(lambda)); }
  // Growth rate of the Reeb flow, tau^{-1} ln|lambda|.
  double mu() const { return log_abs_lambda() / tau; }
  double critical_energy() const { return 8.0 * V * log_abs_lambda() * log_abs_lambda() / tau; }

  // Same model with (w+, w-) replaced by (c w+, c^{-1} w-).
  HyperbolicModel rescaled(double c) const;

  // Closed-form critical metric at fiber coordinate t in (t, x, y) components.
  Mat3 metric_at(double t) const;
};

// Throws NotSymplectic (det != 1) or NotHyperbolic (|trace| <= 2). The
// eigenvectors are scaled to equal Euclidean length with w+ having a positive
// first nonzero component and (V dx^dy)(w+, w-) = 1.
HyperbolicModel build_hyperbolic_model(const IntMat2& L, double tau = 1.0, double V = 1.0);

struct CosymplecticModel {
  AlmostCosymplecticStructure structure;
  CompatibleMetric metric;
};

// (tau dt, V dx^dy) with g = tau^2 dt^2 + |lambda|^{2t} theta+^2 + |lambda|^{-2t} theta-^2.
CosymplecticModel critical_metric(const HyperbolicModel& model, const GridPtr& grid,
                                  const Tolerances& tol = {});

// Orthonormal frame adapted to the flow on the critical metric:
// v+ = |lambda|^t w- and v- = -|lambda|^{-t} w+, so that [R, v+-] = +-mu v+- and
// v- = -phi v+. The flats are the metric duals g(v+-, .).
struct CriticalFrame {
  TensorField reeb;
  TensorField v_plus;
  TensorField v_minus;
  TensorField v_plus_flat;
  TensorField v_minus_flat;
  double mu = 0.0;
};

CriticalFrame critical_frame(const HyperbolicModel& model, const GridPtr& grid);

// Left-invariant Sol structure (mu dt, dx+ ^ dx-) with
// g = mu^2 dt^2 + e^{-2t} dx+^2 + e^{2t} dx-^2 on an interval chart.
struct SolModel {
  double mu = 1.0;
  CosymplecticModel model;
  // Left-invariant frame Y = d_t, X+- = e^{+-t} d_{x+-}.
  TensorField Y, X_plus, X_minus;
};

SolModel sol_model(double mu, const GridPtr& grid, const Tolerances& tol = {});

// (dt, dx^dy) with the flat metric on the untwisted torus.
CosymplecticModel flat_cokahler(const GridPtr& grid, const Tolerances& tol = {});

// alpha = cos(2 pi n t) dx + sin(2 pi n t) dy, beta = d alpha and
// g = dx^2 + dy^2 + (2 pi n)^2 dt^2 on the flat torus. The winding axis is the
// first grid axis.
CosymplecticModel contact_t3_testbed(int n, const GridPtr& grid, const Tolerances& tol = {});

// Affine map from the mapping-torus chart (s, x, y) to Sol coordinates
// (t, x+, x-) = (k s, theta-(x, y), -theta+(x, y)) with k = ln lambda. It
// carries (tau ds, V dx^dy, g) to the Sol model with parameter tau / k and
// conjugates the gluing to left translation by (k, 0, 0).
struct SolChartMap {
  double k = 0.0;
  double sol_parameter = 0.0;  // the Sol model's mu
  double torsion_rate = 0.0;   // k / tau
  Mat3 jacobian;               // d(t, x+, x-) / d(s, x, y)

  Vec3 apply(const Vec3& s_xy) const { return jacobian * s_xy; }
  Vec3 inverse(const Vec3& sol) const { return jacobian.inverse() * sol; }
};

struct SolEquivalenceReport {
  SolChartMap map;
  double alpha_residual = 0.0;
  double beta_residual = 0.0;
  double metric_residual = 0.0;
  double inverse_residual = 0.0;  // |inverse(apply(p)) - p|
  double gluing_residual = 0.0;   // Phi(p, s+1) vs left translation of Phi(Lp, s)
};

SolChartMap sol_chart_map(const HyperbolicModel& model);
// Throws OutOfScope for lambda < 0.
SolEquivalenceReport sol_to_mapping_torus(const HyperbolicModel& model, const GridPtr& grid);

}  // namespace cosym
