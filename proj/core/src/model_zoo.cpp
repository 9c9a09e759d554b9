#include "cosym/model_zoo.hpp"

#include <cmath>
#include <numbers>

namespace cosym {

namespace {

Eigen::Vector2d eigenvector(const IntMat2& L, double ev) {
  const double a = static_cast<double>(L[0]), b = static_cast<double>(L[1]);
  const double c = static_cast<double>(L[2]), d = static_cast<double>(L[3]);
  Eigen::Vector2d w = b != 0.0 ? Eigen::Vector2d(b, ev - a) : Eigen::Vector2d(ev - d, c);
  w.normalize();
  if (w[0] < 0.0 || (w[0] == 0.0 && w[1] < 0.0)) w = -w;
  return w;
}

void set_dual(HyperbolicModel& m) {
  Eigen::Matrix2d W;
  W.col(0) = m.w_plus;
  W.col(1) = m.w_minus;
  const Eigen::Matrix2d Wi = W.inverse();
  m.theta_plus = Wi.row(0).transpose();
  m.theta_minus = Wi.row(1).transpose();
}

TensorField constant_one_form(const GridPtr& grid, const Vec3& a) {
  return make_vector_field(grid, Slot::down, [&](std::size_t) { return a; });
}

TensorField area_form(const GridPtr& grid, double V) {
  Mat3 B = Mat3::Zero();
  B(1, 2) = V;
  B(2, 1) = -V;
  return make_matrix_field(grid, {Slot::down, Slot::down}, [&](std::size_t) { return B; });
}

}  // namespace

HyperbolicModel HyperbolicModel::rescaled(double c) const {
  if (c == 0.0) throw Error(ErrorCode::invalid_argument, "rescaling factor must be nonzero");
  HyperbolicModel m = *this;
  m.w_plus *= c;
  m.w_minus /= c;
  set_dual(m);
  return m;
}

Mat3 HyperbolicModel::metric_at(double t) const {
  const double grow = std::pow(std::abs(lambda), 2.0 * t);
  Mat3 G = Mat3::Zero();
  G(0, 0) = tau * tau;
  G.block<2, 2>(1, 1) = grow * theta_plus * theta_plus.transpose() +
                        (1.0 / grow) * theta_minus * theta_minus.transpose();
  return G;
}

HyperbolicModel build_hyperbolic_model(const IntMat2& L, double tau, double V) {
  const std::int64_t det = L[0] * L[3] - L[1] * L[2];
  if (det != 1)
    throw Error(ErrorCode::not_symplectic, "det L = " + std::to_string(det) + ", expected 1");
  const std::int64_t tr = L[0] + L[3];
  if (std::llabs(tr) <= 2)
    throw Error(ErrorCode::not_hyperbolic, "|trace L| = " + std::to_string(std::llabs(tr)) + " <= 2");
  if (!(tau > 0.0) || !(V > 0.0))
    throw Error(ErrorCode::invalid_argument, "tau and V must be positive");

  HyperbolicModel m;
  m.L = L;
  m.tau = tau;
  m.V = V;
  const double t = static_cast<double>(tr);
  const double disc = std::sqrt(t * t - 4.0);
  m.lambda = 0.5 * (t + (t > 0 ? disc : -disc));
  m.w_plus = eigenvector(L, m.lambda);
  m.w_minus = eigenvector(L, 1.0 / m.lambda);
  double D = V * (m.w_plus[0] * m.w_minus[1] - m.w_plus[1] * m.w_minus[0]);
  if (D < 0.0) {
    m.w_minus = -m.w_minus;
    D = -D;
  }
  const double s = 1.0 / std::sqrt(D);
  m.w_plus *= s;
  m.w_minus *= s;
  set_dual(m);
  return m;
}

CosymplecticModel critical_metric(const HyperbolicModel& model, const GridPtr& grid,
                                  const Tolerances& tol) {
  if (!grid->periodic_fiber() || grid->monodromy() != model.L)
    throw Error(ErrorCode::monodromy_mismatch, "grid monodromy differs from the model matrix");
  auto s = make_structure(constant_one_form(grid, Vec3(model.tau, 0.0, 0.0)),
                          area_form(grid, model.V), Flavor::cosymplectic);
  const TensorField g = make_matrix_field(grid, {Slot::down, Slot::down}, [&](std::size_t p) {
    return model.metric_at(grid->t(grid->point(p).k));
  });
  CompatibleMetric metric = certify_compatible(s, g, tol);
  return {std::move(s), std::move(metric)};
}

CriticalFrame critical_frame(const HyperbolicModel& model, const GridPtr& grid) {
  if (grid->monodromy() != model.L)
    throw Error(ErrorCode::monodromy_mismatch, "grid monodromy differs from the model matrix");
  const double l = std::abs(model.lambda);
  auto tk = [&](std::size_t p) { return grid->t(grid->point(p).k); };
  auto lift = [](const Eigen::Vector2d& w, double s) { return Vec3(0.0, s * w[0], s * w[1]); };
  CriticalFrame f;
  f.mu = model.mu();
  f.reeb = make_vector_field(grid, Slot::up, [&](std::size_t) { return Vec3(1.0 / model.tau, 0, 0); });
  f.v_plus = make_vector_field(grid, Slot::up,
                               [&](std::size_t p) { return lift(model.w_minus, std::pow(l, tk(p))); });
  f.v_minus = make_vector_field(
      grid, Slot::up, [&](std::size_t p) { return lift(model.w_plus, -std::pow(l, -tk(p))); });
  f.v_plus_flat = make_vector_field(
      grid, Slot::down, [&](std::size_t p) { return lift(model.theta_minus, std::pow(l, -tk(p))); });
  f.v_minus_flat = make_vector_field(
      grid, Slot::down, [&](std::size_t p) { return lift(model.theta_plus, -std::pow(l, tk(p))); });
  return f;
}

SolModel sol_model(double mu, const GridPtr& grid, const Tolerances& tol) {
  if (grid->periodic_fiber())
    throw Error(ErrorCode::invalid_argument, "the Sol model lives on an interval chart");
  if (mu == 0.0) throw Error(ErrorCode::invalid_argument, "Sol parameter must be nonzero");
  auto tk = [&](std::size_t p) { return grid->t(grid->point(p).k); };
  auto s = make_structure(constant_one_form(grid, Vec3(mu, 0.0, 0.0)), area_form(grid, 1.0),
                          Flavor::cosymplectic);
  const TensorField g = make_matrix_field(grid, {Slot::down, Slot::down}, [&](std::size_t p) {
    const double t = tk(p);
    return Vec3(mu * mu, std::exp(-2.0 * t), std::exp(2.0 * t)).asDiagonal().toDenseMatrix();
  });
  CompatibleMetric metric = certify_compatible(s, g, tol);
  SolModel out{mu, {std::move(s), std::move(metric)}, {}, {}, {}};
  out.Y = make_vector_field(grid, Slot::up, [](std::size_t) { return Vec3(1.0, 0.0, 0.0); });
  out.X_plus = make_vector_field(grid, Slot::up,
                                 [&](std::size_t p) { return Vec3(0.0, std::exp(tk(p)), 0.0); });
  out.X_minus = make_vector_field(grid, Slot::up,
                                  [&](std::size_t p) { return Vec3(0.0, 0.0, std::exp(-tk(p))); });
  return out;
}

CosymplecticModel flat_cokahler(const GridPtr& grid, const Tolerances& tol) {
  if (!grid->periodic_fiber() || !grid->flat())
    throw Error(ErrorCode::monodromy_mismatch, "the flat model needs the untwisted periodic torus");
  auto s = make_structure(constant_one_form(grid, Vec3(1.0, 0.0, 0.0)), area_form(grid, 1.0),
                          Flavor::cosymplectic);
  const TensorField g = make_matrix_field(grid, {Slot::down, Slot::down},
                                          [](std::size_t) { return Mat3(Mat3::Identity()); });
  CompatibleMetric metric = certify_compatible(s, g, tol);
  return {std::move(s), std::move(metric)};
}

CosymplecticModel contact_t3_testbed(int n, const GridPtr& grid, const Tolerances& tol) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "winding number must be nonzero");
  if (!grid->periodic_fiber() || !grid->flat())
    throw Error(ErrorCode::monodromy_mismatch, "the contact testbed needs the untwisted periodic torus");
  const double w = 2.0 * std::numbers::pi * n;
  auto z = [&](std::size_t p) { return grid->t(grid->point(p).k); };
  TensorField alpha = make_vector_field(grid, Slot::down, [&](std::size_t p) {
    return Vec3(0.0, std::cos(w * z(p)), std::sin(w * z(p)));
  });
  TensorField beta = make_matrix_field(grid, {Slot::down, Slot::down}, [&](std::size_t p) {
    Mat3 B = Mat3::Zero();
    B(0, 1) = -w * std::sin(w * z(p));
    B(0, 2) = w * std::cos(w * z(p));
    return Mat3(B - B.transpose());
  });
  auto s = make_structure(std::move(alpha), std::move(beta), Flavor::general_R_invariant);
  const TensorField g = make_matrix_field(grid, {Slot::down, Slot::down}, [&](std::size_t) {
    return Vec3(w * w, 1.0, 1.0).asDiagonal().toDenseMatrix();
  });
  CompatibleMetric metric = certify_compatible(s, g, tol);
  return {std::move(s), std::move(metric)};
}

SolChartMap sol_chart_map(const HyperbolicModel& model) {
  if (!(model.lambda > 0.0))
    throw Error(ErrorCode::out_of_scope,
                "negative eigenvalue: the Sol quotient is not covered by the orientable chart");
  SolChartMap m;
  m.k = std::log(model.lambda);
  m.sol_parameter = model.tau / m.k;
  m.torsion_rate = m.k / model.tau;
  m.jacobian = Mat3::Zero();
  m.jacobian(0, 0) = m.k;
  m.jacobian.block<1, 2>(1, 1) = model.theta_minus.transpose();
  m.jacobian.block<1, 2>(2, 1) = -model.theta_plus.transpose();
  return m;
}

SolEquivalenceReport sol_to_mapping_torus(const HyperbolicModel& model, const GridPtr& grid) {
  SolEquivalenceReport r;
  r.map = sol_chart_map(model);
  const SolChartMap& m = r.map;
  const Mat3& D = m.jacobian;
  const double mu = m.sol_parameter;
  const Vec3 alpha_sol(mu, 0.0, 0.0);
  Mat3 beta_sol = Mat3::Zero();
  beta_sol(1, 2) = 1.0;
  beta_sol(2, 1) = -1.0;
  const Vec3 alpha_mt(model.tau, 0.0, 0.0);
  Mat3 beta_mt = Mat3::Zero();
  beta_mt(1, 2) = model.V;
  beta_mt(2, 1) = -model.V;
  Eigen::Matrix2d Lm;
  Lm << static_cast<double>(model.L[0]), static_cast<double>(model.L[1]),
      static_cast<double>(model.L[2]), static_cast<double>(model.L[3]);

  for (std::size_t p = 0; p < grid->size(); ++p) {
    const Vec3 q = grid->coords(p);
    const Vec3 sol = m.apply(q);
    const Mat3 g_sol = Vec3(mu * mu, std::exp(-2.0 * sol[0]), std::exp(2.0 * sol[0])).asDiagonal();
    r.metric_residual = std::max(
        r.metric_residual, (D.transpose() * g_sol * D - model.metric_at(q[0])).cwiseAbs().maxCoeff());
    r.alpha_residual =
        std::max(r.alpha_residual, (D.transpose() * alpha_sol - alpha_mt).cwiseAbs().maxCoeff());
    r.beta_residual =
        std::max(r.beta_residual, (D.transpose() * beta_sol * D - beta_mt).cwiseAbs().maxCoeff());
    r.inverse_residual = std::max(r.inverse_residual, (m.inverse(sol) - q).cwiseAbs().maxCoeff());

    // (p, s + 1) ~ (Lp, s): both lifts must differ by left translation by (k, 0, 0).
    const Eigen::Vector2d xy = q.tail<2>();
    const Vec3 upper = m.apply(Vec3(q[0] + 1.0, xy[0], xy[1]));
    const Eigen::Vector2d Lxy = Lm * xy;
    const Vec3 lower = m.apply(Vec3(q[0], Lxy[0], Lxy[1]));
    const Vec3 translated(lower[0] + m.k, std::exp(m.k) * lower[1], std::exp(-m.k) * lower[2]);
    r.gluing_residual = std::max(r.gluing_residual, (translated - upper).cwiseAbs().maxCoeff());
  }
  return r;
}

}  // namespace cosym
