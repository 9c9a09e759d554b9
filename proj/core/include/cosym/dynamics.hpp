#pragma once

#include <vector>

#include "cosym/model_zoo.hpp"

namespace cosym {

// Suspension flow of L on the mapping torus, the Reeb flow of (tau dt, V dx^dy).
// Points are chart coordinates (t, x, y) with t in [0, 1) and x, y in [0, 1).
// Crossing t = 1 uses (p, t + 1) ~ (Lp, t), so flowing for time tau from
// (x, 0) lands at (L x mod 1, 0).
struct Suspension {
  IntMat2 L{1, 0, 0, 1};
  double tau = 1.0;

  static Suspension of(const HyperbolicModel& m) { return {m.L, m.tau}; }
};

struct FlowStep {
  Vec3 point;
  Mat3 transport;  // d Phi in chart coordinates, from the start point
};

Vec3 reeb_flow(const Suspension& s, const Vec3& point, double time);
// Net number of seam crossings and the differential diag(1, L^n).
Mat3 flow_differential(const Suspension& s, const Vec3& point, double time);

// Samples of the orbit and of the transport at the given times.
struct FlowCocycle {
  std::vector<double> times;
  std::vector<FlowStep> steps;
};
FlowCocycle flow_cocycle(const Suspension& s, const Vec3& point, const std::vector<double>& times);

// Growth rates of d Phi along the orbit of a t = 0 grid point, measured in the
// metric g: Benettin QR of the cocycle C(L^{n+1} p) diag(1, L) C(L^n p)^{-1},
// where C is the Cholesky factor of g at the orbit points. The orbit stays on
// the grid because L is integral. A warm-up on the backward orbit aligns the
// frame before measuring. Throws HorizonTooShort below one period.
std::array<double, 3> lyapunov_exponents(const Suspension& s, const TensorField& g, int i, int j,
                                         double horizon, int warmup_periods = 40);

struct SplittingFrame {
  TensorField e_plus;   // normalised u+ + u-
  TensorField e_minus;  // normalised u+ - u-
  TensorField u_plus;   // h u+ = mu u+
  TensorField u_minus;  // phi u+
  ScalarField mu_field;
  double mu = 0.0;
  // Growth rates g([R, e], e) of the two lines; the positive one contracts
  // under the forward flow.
  double rate_plus = 0.0;
  double rate_minus = 0.0;
  double min_frame_determinant = 0.0;  // |det(R, e+, e-)| in g-orthonormal terms
};

// From the eigen-decomposition of h = 1/2 L_R phi. Throws NotHyperbolicTorsion
// when the torsion falls below min_torsion somewhere.
SplittingFrame anosov_splitting(const CompatibleMetric& metric, const AlmostCosymplecticStructure& s,
                                double min_torsion = 1e-6);

// The line through e+ (or e-) transported by the exact flow for times up to
// max_time, compared with the line at the image point. Expanding lines are
// followed forwards and contracting ones backwards.
struct SplittingInvariance {
  double max_angle_plus = 0.0;
  double max_angle_minus = 0.0;
  // max |log |Phi_* e|_g - log |e|_g + rate t| for the two lines, where rate
  // is mu with the sign of the measured rate of that line.
  double growth_defect_plus = 0.0;
  double growth_defect_minus = 0.0;
};
// mu <= 0 uses the frame's own averaged mu.
SplittingInvariance splitting_invariance(const SplittingFrame& frame, const TensorField& g,
                                         const Suspension& s, double max_time, double mu = 0.0);

struct BracketReport {
  double reeb_plus = 0.0;    // |[R, v+] - mu v+|_g
  double reeb_minus = 0.0;   // |[R, v-] + mu v-|_g
  double plus_minus = 0.0;   // |[v+, v-]|_g
  double reeb_u_plus = 0.0;  // |[R, u+] - mu u-|_g with u+- = (v+ +- v-) / 2
  double reeb_u_minus = 0.0; // |[R, u-] - mu u+|_g

  double max() const;
};
BracketReport bracket_check(const TensorField& reeb, const TensorField& v_plus,
                            const TensorField& v_minus, double mu, const TensorField& g,
                            Differencing mode = Differencing::line_field);

struct SolBracketReport {
  double y_plus = 0.0;      // |[Y, X+] - X+|
  double y_minus = 0.0;     // |[Y, X-] + X-|
  double plus_minus = 0.0;  // |[X+, X-]|
};
SolBracketReport sol_bracket_check(const SolModel& sol);

}  // namespace cosym
