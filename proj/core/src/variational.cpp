#include "cosym/variational.hpp"

#include <algorithm>
#include <cmath>

namespace cosym {

ScalarField torsion_field(const TensorField& g, const AlmostCosymplecticStructure& s) {
  const TensorField L = lie_derivative(g, s.reeb);
  ScalarField out = TensorField::scalar(g.grid());
  for (std::size_t p = 0; p < g.grid()->size(); ++p) {
    const Mat3 Gi = g.matrix(p).inverse();
    const Mat3 M = Gi * L.matrix(p);
    out.data()[p] = (M * M).trace();
  }
  return out;
}

double energy(const TensorField& g, const AlmostCosymplecticStructure& s) {
  return integrate(torsion_field(g, s), s.volume_form());
}

TorsionReport torsion_report(const CompatibleMetric& metric, const AlmostCosymplecticStructure& s) {
  TorsionReport r;
  const TensorField& g = metric.g();
  r.lie_g = lie_derivative(g, s.reeb);
  r.torsion_field = TensorField::scalar(g.grid());
  for (std::size_t p = 0; p < g.grid()->size(); ++p) {
    const Mat3 M = g.matrix(p).inverse() * r.lie_g.matrix(p);
    r.torsion_field.data()[p] = (M * M).trace();
  }
  r.h = h_tensor(metric.phi(), s.reeb);
  const double c = std::pow(2.0, -1.5);
  r.mu_field = make_scalar_field(g.grid(), [&](std::size_t p) {
    return c * std::sqrt(std::max(0.0, r.torsion_field.value(p)));
  });
  r.energy = integrate(r.torsion_field, s.volume_form());
  r.first_integral_residual = sup_norm(directional_derivative(r.torsion_field, s.reeb));
  return r;
}

EulerLagrange euler_lagrange(const CompatibleMetric& metric, const AlmostCosymplecticStructure& s) {
  const TensorField& g = metric.g();
  const TensorField L = lie_derivative(g, s.reeb);
  const TensorField nabla = covariant_derivative(L, metric.connection(), s.reeb);
  const TensorField da = exterior_derivative(s.alpha);
  EulerLagrange out;
  out.d_alpha_plus = TensorField(g.grid(), {Slot::up, Slot::down});
  out.residual = TensorField(g.grid(), {Slot::down, Slot::down});
  for (std::size_t p = 0; p < g.grid()->size(); ++p) {
    // d alpha in the half convention, see the header
    const Mat3 A = 0.5 * g.matrix(p).ldlt().solve(da.matrix(p));
    out.d_alpha_plus.set_matrix(p, A);
    out.residual.set_matrix(p, nabla.matrix(p) - 2.0 * L.matrix(p) * A);
  }
  out.d_alpha_plus_sup = sup_norm(out.d_alpha_plus);
  return out;
}

TensorField euler_lagrange_residual(const CompatibleMetric& metric,
                                    const AlmostCosymplecticStructure& s) {
  return euler_lagrange(metric, s).residual;
}

double nabla_R_h_residual(const CompatibleMetric& metric, const AlmostCosymplecticStructure& s) {
  const TensorField h = h_tensor(metric.phi(), s.reeb);
  return metric_sup_norm(covariant_derivative(h, metric.connection(), s.reeb), metric.g());
}

TangentDeformation tangent_project(const TensorField& H_raw, const CompatibleMetric& metric,
                                   const AlmostCosymplecticStructure& s) {
  if (H_raw.slots() != std::vector<Slot>{Slot::down, Slot::down})
    throw Error(ErrorCode::invalid_argument, "tangent_project takes a (0,2) field");
  TangentDeformation out{TensorField(H_raw.grid(), {Slot::down, Slot::down})};
  for (std::size_t p = 0; p < H_raw.grid()->size(); ++p) {
    const Mat3 Hs = 0.5 * (H_raw.matrix(p) + H_raw.matrix(p).transpose());
    const Mat3 Pi = Mat3::Identity() - s.reeb.vector(p) * s.alpha.vector(p).transpose();
    const Mat3 F = metric.phi().matrix(p);
    const Mat3 Hp = Pi.transpose() * Hs * Pi;
    out.H.set_matrix(p, 0.5 * (Hp - F.transpose() * Hp * F));
  }
  return out;
}

TangentDefects tangent_defects(const TensorField& H, const CompatibleMetric& metric,
                               const AlmostCosymplecticStructure& s) {
  TangentDefects d;
  for (std::size_t p = 0; p < H.grid()->size(); ++p) {
    const Mat3 M = H.matrix(p);
    const Mat3 F = metric.phi().matrix(p);
    d.reeb = std::max(d.reeb, (M * s.reeb.vector(p)).cwiseAbs().maxCoeff());
    d.phi = std::max(d.phi, (F.transpose() * M - M * F).cwiseAbs().maxCoeff());
  }
  return d;
}

TensorField exponential_metric(const TensorField& g0, const TensorField& H, double s,
                               double max_exponent) {
  TensorField out(g0.grid(), {Slot::down, Slot::down});
  for (std::size_t p = 0; p < g0.grid()->size(); ++p) {
    Eigen::SelfAdjointEigenSolver<Mat3> e0(g0.matrix(p));
    const Mat3 half = e0.operatorSqrt();
    const Mat3 ihalf = e0.operatorInverseSqrt();
    Mat3 M = ihalf * H.matrix(p) * ihalf;
    M = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Mat3> em(M);
    const Vec3 ev = em.eigenvalues();
    if (std::abs(s) * ev.cwiseAbs().maxCoeff() > max_exponent)
      throw Error(ErrorCode::exponential_overflow,
                  "|s| * |H+| = " + std::to_string(std::abs(s) * ev.cwiseAbs().maxCoeff()));
    const Vec3 ex = (s * ev).array().exp();
    const Mat3 E = em.eigenvectors() * ex.asDiagonal() * em.eigenvectors().transpose();
    const Mat3 G = half * E * half;
    out.set_matrix(p, 0.5 * (G + G.transpose()));
  }
  return out;
}

CompatibleMetric exponential_curve(const CompatibleMetric& g0, const AlmostCosymplecticStructure& st,
                                   const TangentDeformation& H, double s, const Tolerances& tol) {
  if (s == 0.0) return g0;
  return certify_compatible(st, exponential_metric(g0.g(), H.H, s), tol);
}

double first_variation(const CompatibleMetric& metric, const AlmostCosymplecticStructure& s,
                       const TensorField& H) {
  const EulerLagrange el = euler_lagrange(metric, s);
  // 2 (L_R g)(., d alpha^+ .) - nabla_R L_R g = -residual
  const ScalarField density = inner(el.residual, H, metric.g());
  return -2.0 * integrate(density, s.volume_form());
}

Deformation Deformation::zero(const GridPtr& grid) {
  return {TensorField::scalar(grid), TensorField::scalar(grid)};
}

ScalarField Deformation::p() const {
  return make_scalar_field(u.grid(), [&](std::size_t n) { return std::exp(u.value(n)); });
}

ScalarField Deformation::q() const {
  return make_scalar_field(u.grid(), [&](std::size_t n) {
    const double rr = r.value(n);
    return (1.0 + rr * rr) * std::exp(-u.value(n));
  });
}

TensorField deformed_metric(const Deformation& d, const AlmostCosymplecticStructure& s,
                            const CriticalFrame& frame) {
  return make_matrix_field(s.grid(), {Slot::down, Slot::down}, [&](std::size_t n) {
    const double p = std::exp(d.u.value(n));
    const double r = d.r.value(n);
    const double q = (1.0 + r * r) / p;
    if (!(p > 0.0) || !std::isfinite(p) || !std::isfinite(q))
      throw Error(ErrorCode::invalid_argument, "deformation has p <= 0 or non-finite entries");
    const Vec3 a = s.alpha.vector(n);
    const Vec3 fp = frame.v_plus_flat.vector(n);
    const Vec3 fm = frame.v_minus_flat.vector(n);
    return Mat3(a * a.transpose() + q * fp * fp.transpose() +
                r * (fp * fm.transpose() + fm * fp.transpose()) + p * fm * fm.transpose());
  });
}

CompatibleMetric deform(const CompatibleMetric& g_crit, const AlmostCosymplecticStructure& s,
                        const Deformation& d, const CriticalFrame& frame, const Tolerances& tol) {
  if (d.u.grid() != g_crit.grid() || d.r.grid() != g_crit.grid())
    throw Error(ErrorCode::invalid_argument, "deformation lives on a different grid");
  return certify_compatible(s, deformed_metric(d, s, frame), tol);
}

DeformedLieEntries deformed_lie_entries(const TensorField& g_tilde, const Deformation& d,
                                        const AlmostCosymplecticStructure& s,
                                        const CriticalFrame& frame) {
  const TensorField L = lie_derivative(g_tilde, s.reeb);
  const ScalarField p = d.p(), q = d.q();
  const ScalarField Rp = directional_derivative(p, s.reeb);
  const ScalarField Rq = directional_derivative(q, s.reeb);
  const ScalarField Rr = directional_derivative(d.r, s.reeb);
  const double mu = frame.mu;
  DeformedLieEntries e;
  for (std::size_t n = 0; n < L.grid()->size(); ++n) {
    const Mat3 M = L.matrix(n);
    const Vec3 vp = frame.v_plus.vector(n), vm = frame.v_minus.vector(n);
    e.reeb_row = std::max(e.reeb_row, (M * s.reeb.vector(n)).cwiseAbs().maxCoeff());
    e.v_minus_v_minus = std::max(e.v_minus_v_minus,
                                 std::abs(vm.dot(M * vm) - (Rp.value(n) + 2 * mu * p.value(n))));
    e.mixed = std::max(e.mixed, std::abs(vp.dot(M * vm) - Rr.value(n)));
    const double pp = vp.dot(M * vp);
    e.v_plus_v_plus = std::max(e.v_plus_v_plus, std::abs(pp - (Rq.value(n) - 2 * mu * q.value(n))));
    e.v_plus_v_plus_alt =
        std::max(e.v_plus_v_plus_alt, std::abs(pp - (Rq.value(n) - 2 * mu * p.value(n))));
  }
  return e;
}

ScalarField torsion_closed_form(const Deformation& d, double mu, const AlmostCosymplecticStructure& s) {
  const ScalarField Ru = directional_derivative(d.u, s.reeb);
  const ScalarField Rr = directional_derivative(d.r, s.reeb);
  return make_scalar_field(d.u.grid(), [&](std::size_t n) {
    const double r = d.r.value(n), ru = Ru.value(n);
    const double a = 2 * mu * r + r * ru - Rr.value(n);
    return 8 * mu * mu + 2 * a * a + 2 * ru * ru + 8 * mu * ru;
  });
}

ScalarField torsion_first_expansion(const Deformation& d, double mu,
                                    const AlmostCosymplecticStructure& s) {
  const ScalarField p = d.p(), q = d.q();
  const ScalarField Rp = directional_derivative(p, s.reeb);
  const ScalarField Rq = directional_derivative(q, s.reeb);
  const ScalarField Rr = directional_derivative(d.r, s.reeb);
  return make_scalar_field(d.u.grid(), [&](std::size_t n) {
    const double r = d.r.value(n);
    return 8 * (1 + r * r) * mu * mu + 4 * (q.value(n) * Rp.value(n) - p.value(n) * Rq.value(n)) * mu +
           2 * (Rr.value(n) * Rr.value(n) - Rp.value(n) * Rq.value(n));
  });
}

GapReport energy_gap(const Deformation& d, double mu, const AlmostCosymplecticStructure& s) {
  const ScalarField Ru = directional_derivative(d.u, s.reeb);
  const ScalarField Rr = directional_derivative(d.r, s.reeb);
  const ScalarField gap = make_scalar_field(d.u.grid(), [&](std::size_t n) {
    const double r = d.r.value(n), ru = Ru.value(n);
    const double a = 2 * mu * r + r * ru - Rr.value(n);
    return 2 * a * a + 2 * ru * ru;
  });
  const TensorField vol = s.volume_form();
  return {integrate(gap, vol), integrate(8.0 * mu * Ru, vol)};
}

}  // namespace cosym
