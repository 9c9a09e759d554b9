#pragma once

#include "cosym/model_zoo.hpp"

namespace cosym {

struct TorsionReport {
  ScalarField torsion_field;  // |L_R g|^2
  TensorField lie_g;          // L_R g
  TensorField h;              // 1/2 L_R phi
  ScalarField mu_field;       // 2^{-3/2} sqrt(torsion)
  double energy = 0.0;
  double first_integral_residual = 0.0;  // sup |R(torsion)|
};

TorsionReport torsion_report(const CompatibleMetric& metric, const AlmostCosymplecticStructure& s);

// |L_R g|^2 and its integral only.
ScalarField torsion_field(const TensorField& g, const AlmostCosymplecticStructure& s);
double energy(const TensorField& g, const AlmostCosymplecticStructure& s);

// d alpha^+ is the metric dual of d alpha taken in the convention
// d alpha(X, Y) = 1/2 (X alpha(Y) - Y alpha(X) - alpha([X, Y])), half of what
// exterior_derivative returns. With it the first variation below is exact; with
// the full convention the factor 2 in front of the d alpha^+ term would be 1.
struct EulerLagrange {
  TensorField residual;       // nabla_R L_R g - 2 (L_R g)(., d alpha^+ .)
  TensorField d_alpha_plus;   // g(., d alpha^+ .) = d alpha, a (1,1) field
  double d_alpha_plus_sup = 0.0;
};

EulerLagrange euler_lagrange(const CompatibleMetric& metric, const AlmostCosymplecticStructure& s);
TensorField euler_lagrange_residual(const CompatibleMetric& metric,
                                    const AlmostCosymplecticStructure& s);

// g-norm sup of nabla_R h.
double nabla_R_h_residual(const CompatibleMetric& metric, const AlmostCosymplecticStructure& s);

struct TangentDeformation {
  TensorField H;  // symmetric (0,2), i_R H = 0, H(phi., .) = H(., phi.)
};

// Drops the Reeb components with Pi = 1 - R (x) alpha, then averages with
// -H(phi., phi.).
TangentDeformation tangent_project(const TensorField& H_raw, const CompatibleMetric& metric,
                                   const AlmostCosymplecticStructure& s);

struct TangentDefects {
  double reeb = 0.0;  // sup |i_R H|
  double phi = 0.0;   // sup |H(phi., .) - H(., phi.)|
};
TangentDefects tangent_defects(const TensorField& H, const CompatibleMetric& metric,
                               const AlmostCosymplecticStructure& s);

// g(s) = g0^{1/2} exp(s g0^{-1/2} H g0^{-1/2}) g0^{1/2} = g0(exp(s H^+) ., .).
// Throws ExponentialOverflow when |s| times the largest eigenvalue exceeds max_exponent.
TensorField exponential_metric(const TensorField& g0, const TensorField& H, double s,
                               double max_exponent = 50.0);
CompatibleMetric exponential_curve(const CompatibleMetric& g0, const AlmostCosymplecticStructure& st,
                                   const TangentDeformation& H, double s, const Tolerances& tol = {});

// 2 int g(2 (L_R g)(., d alpha^+ .) - nabla_R L_R g, H) alpha ^ beta.
double first_variation(const CompatibleMetric& metric, const AlmostCosymplecticStructure& s,
                       const TensorField& H);

// Compatible metrics over a critical one, parametrised by u = ln p and r with
// q = (1 + r^2) / p so that pq - r^2 = 1 always.
struct Deformation {
  ScalarField u;
  ScalarField r;

  static Deformation zero(const GridPtr& grid);
  ScalarField p() const;
  ScalarField q() const;
};

// alpha^2 + q v+^2 + r (v+ v- + v- v+) + p v-^2 in terms of the frame flats.
CompatibleMetric deform(const CompatibleMetric& g_crit, const AlmostCosymplecticStructure& s,
                        const Deformation& d, const CriticalFrame& frame, const Tolerances& tol = {});
TensorField deformed_metric(const Deformation& d, const AlmostCosymplecticStructure& s,
                            const CriticalFrame& frame);

// Entries of L_R g~ in the frame (v-, v+) against their closed forms. The
// lower-right entry is compared with both R(q) - 2 mu q and R(q) - 2 mu p.
struct DeformedLieEntries {
  double reeb_row = 0.0;        // sup over (L_R g~)(R, .)
  double v_minus_v_minus = 0.0; // vs R(p) + 2 mu p
  double mixed = 0.0;           // vs R(r)
  double v_plus_v_plus = 0.0;   // vs R(q) - 2 mu q
  double v_plus_v_plus_alt = 0.0;  // vs R(q) - 2 mu p
};
DeformedLieEntries deformed_lie_entries(const TensorField& g_tilde, const Deformation& d,
                                        const AlmostCosymplecticStructure& s,
                                        const CriticalFrame& frame);

// 8 mu^2 + 2 (2 mu r + r R(u) - R(r))^2 + 2 R(u)^2 + 8 mu R(u).
ScalarField torsion_closed_form(const Deformation& d, double mu, const AlmostCosymplecticStructure& s);
// 8 (1 + r^2) mu^2 + 4 (q R(p) - p R(q)) mu + 2 (R(r)^2 - R(p) R(q)).
ScalarField torsion_first_expansion(const Deformation& d, double mu,
                                    const AlmostCosymplecticStructure& s);

struct GapReport {
  double gap = 0.0;                  // int [2 (2 mu r + r R(u) - R(r))^2 + 2 R(u)^2]
  double divergence_integral = 0.0;  // int 8 mu R(u), zero on a closed chart
};
GapReport energy_gap(const Deformation& d, double mu, const AlmostCosymplecticStructure& s);

}  // namespace cosym
