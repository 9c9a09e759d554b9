#include "cosym/cosymplectic_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cosym {

const char* to_string(Flavor f) {
  switch (f) {
    case Flavor::cosymplectic: return "cosymplectic";
    case Flavor::contact: return "contact";
    case Flavor::general_R_invariant: return "general_R_invariant";
  }
  return "unknown";
}

TensorField AlmostCosymplecticStructure::volume_form() const { return wedge_1_2(alpha, beta); }

TensorField reeb_field(const TensorField& alpha, const TensorField& beta) {
  if (alpha.rank() != 1 || beta.rank() != 2)
    throw Error(ErrorCode::invalid_argument, "reeb_field takes a 1-form and a 2-form");
  TensorField R(alpha.grid(), {Slot::up});
  for (std::size_t p = 0; p < alpha.grid()->size(); ++p) {
    const Mat3 b = beta.matrix(p);
    const Vec3 v(b(1, 2), b(2, 0), b(0, 1));
    const Vec3 a = alpha.vector(p);
    const double density = a.dot(v);
    if (!(std::abs(density) > 1e-14 * std::max(1e-300, a.norm() * v.norm()))) {
      const GridPoint q = alpha.grid()->point(p);
      std::ostringstream msg;
      msg << "alpha ^ beta vanishes at (" << q.i << ", " << q.j << ", " << q.k << ")";
      throw Error(ErrorCode::degenerate_volume, msg.str());
    }
    R.set_vector(p, v / density);
  }
  return R;
}

AlmostCosymplecticStructure make_structure(TensorField alpha, TensorField beta, Flavor flavor) {
  AlmostCosymplecticStructure s;
  s.reeb = reeb_field(alpha, beta);
  s.alpha = std::move(alpha);
  s.beta = std::move(beta);
  s.flavor = flavor;
  const TensorField vol = s.volume_form();
  double sign = 0.0;
  for (std::size_t p = 0; p < vol.grid()->size(); ++p) {
    const double d = vol(p, 5) > 0 ? 1.0 : -1.0;
    if (sign == 0.0) sign = d;
    if (d != sign) throw Error(ErrorCode::degenerate_volume, "alpha ^ beta changes sign");
  }
  s.orientation = static_cast<int>(sign);
  return s;
}

bool Certificate::passed() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const Residual& r) { return r.passed(); });
}

std::vector<std::string> Certificate::failures() const {
  std::vector<std::string> out;
  for (const auto& r : residuals)
    if (!r.passed()) out.push_back(r.name);
  return out;
}

const Residual* Certificate::find(const std::string& name) const {
  for (const auto& r : residuals)
    if (r.name == name) return &r;
  return nullptr;
}

double Certificate::value(const std::string& name) const {
  const Residual* r = find(name);
  if (!r) throw Error(ErrorCode::invalid_argument, "no residual named " + name);
  return r->value;
}

CompatibleMetric::CompatibleMetric(TensorField g, TensorField phi, Certificate certificate)
    : g_(std::move(g)), phi_(std::move(phi)), certificate_(std::move(certificate)),
      lazy_(std::make_shared<Lazy>()) {}

const Connection& CompatibleMetric::connection() const {
  std::call_once(lazy_->once, [this] { lazy_->conn = christoffel(g_); });
  return *lazy_->conn;
}

TensorField h_tensor(const TensorField& phi, const TensorField& reeb) {
  return 0.5 * lie_derivative(phi, reeb);
}

std::vector<Residual> structure_residuals(const AlmostCosymplecticStructure& s, const Tolerances& tol) {
  const double dtol = tol.derivative(*s.grid());
  std::vector<Residual> out;
  double c1 = 0.0, c2 = 0.0;
  for (std::size_t p = 0; p < s.grid()->size(); ++p) {
    const Vec3 R = s.reeb.vector(p);
    c1 = std::max(c1, std::abs(s.alpha.vector(p).dot(R) - 1.0));
    c2 = std::max(c2, (s.beta.matrix(p).transpose() * R).cwiseAbs().maxCoeff());
  }
  out.push_back({"alpha_of_reeb", c1, tol.algebraic, false});
  out.push_back({"reeb_in_kernel_of_beta", c2, tol.algebraic, false});
  switch (s.flavor) {
    case Flavor::cosymplectic:
      out.push_back({"d_alpha", sup_norm(exterior_derivative(s.alpha)), dtol, true});
      out.push_back({"d_beta", sup_norm(exterior_derivative(s.beta)), dtol, true});
      break;
    case Flavor::contact:
      out.push_back({"beta_minus_d_alpha", sup_norm(s.beta - exterior_derivative(s.alpha)), dtol, true});
      break;
    case Flavor::general_R_invariant:
      out.push_back({"lie_reeb_alpha", sup_norm(lie_derivative(s.alpha, s.reeb)), dtol, true});
      out.push_back({"lie_reeb_beta", sup_norm(lie_derivative(s.beta, s.reeb)), dtol, true});
      break;
  }
  return out;
}

CompatibleMetric certify_compatible(const AlmostCosymplecticStructure& s, const TensorField& g,
                                    const Tolerances& tol) {
  if (g.grid() != s.grid()) throw Error(ErrorCode::invalid_argument, "metric and structure grids differ");
  require_positive_definite(g);
  const Grid& grid = *s.grid();
  const double atol = tol.algebraic;
  const double dtol = tol.derivative(grid);

  TensorField phi(s.grid(), {Slot::up, Slot::down});
  double sym = 0, phi2 = 0, beta_c = 0, alpha_d = 0, unit = 0, aphi = 0, phir = 0, split = 0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Mat3 G = g.matrix(p);
    const Mat3 B = s.beta.matrix(p);
    const Vec3 a = s.alpha.vector(p);
    const Vec3 R = s.reeb.vector(p);
    const Mat3 F = G.ldlt().solve(B);
    phi.set_matrix(p, F);
    sym = std::max(sym, (G - G.transpose()).cwiseAbs().maxCoeff());
    phi2 = std::max(phi2, (F * F + Mat3::Identity() - R * a.transpose()).cwiseAbs().maxCoeff());
    beta_c = std::max(beta_c, (B - G * F).cwiseAbs().maxCoeff());
    alpha_d = std::max(alpha_d, (G * R - a).cwiseAbs().maxCoeff());
    const double nr = std::sqrt(R.dot(G * R));
    unit = std::max(unit, std::abs(nr - 1.0) / nr);
    aphi = std::max(aphi, (F.transpose() * a).cwiseAbs().maxCoeff());
    phir = std::max(phir, (F * R).cwiseAbs().maxCoeff());
    split = std::max(split, (G - F.transpose() * G * F - a * a.transpose()).cwiseAbs().maxCoeff());
  }

  Certificate cert;
  cert.residuals = structure_residuals(s, tol);
  auto add = [&](const char* name, double v, bool deriv) {
    cert.residuals.push_back({name, v, deriv ? dtol : atol, deriv});
  };
  add("metric_symmetric", sym, false);
  add("phi_squared", phi2, false);
  add("beta_equals_g_phi", beta_c, false);
  add("alpha_equals_g_reeb", alpha_d, false);
  add("reeb_unit_length", unit, false);
  add("alpha_phi", aphi, false);
  add("phi_reeb", phir, false);
  add("hodge_alpha_equals_beta", sup_norm(hodge_star(s.alpha, g, s.orientation) - s.beta), false);
  add("metric_split", split, false);

  // derivative identities
  if (s.flavor == Flavor::general_R_invariant) {
    const TensorField da = exterior_derivative(s.alpha);
    double inv = 0.0;
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const Mat3 D = da.matrix(p);
      const Mat3 F = phi.matrix(p);
      inv = std::max(inv, (F.transpose() * D + D * F).cwiseAbs().maxCoeff());
    }
    add("d_alpha_phi_invariant", inv, true);
  }
  const Connection conn = christoffel(g);
  add("reeb_geodesic", sup_norm(covariant_derivative(s.reeb, conn, s.reeb)), true);
  if (s.flavor == Flavor::cosymplectic)
    add("nabla_reeb_phi", sup_norm(covariant_derivative(phi, conn, s.reeb)), true);
  const TensorField h = h_tensor(phi, s.reeb);
  add("h_reeb", sup_norm(apply(h, s.reeb)), true);
  add("h_anticommutes_phi", sup_norm(compose(h, phi) + compose(phi, h)), true);
  const TensorField lrg = lie_derivative(g, s.reeb);
  TensorField g_hphi(s.grid(), {Slot::down, Slot::down});
  for (std::size_t p = 0; p < grid.size(); ++p)
    g_hphi.set_matrix(p, 2.0 * g.matrix(p) * h.matrix(p) * phi.matrix(p));
  add("lie_g_via_h", sup_norm(lrg - g_hphi), true);

  return CompatibleMetric(g, std::move(phi), std::move(cert));
}

Eigen::Matrix2d sqrt_spd_2x2(const Eigen::Matrix2d& S) {
  const double det = S.determinant();
  const double tr = S.trace();
  if (!(det > 0.0) || !(tr > 0.0))
    throw Error(ErrorCode::not_positive_definite, "2x2 square root needs a positive definite matrix");
  const double sd = std::sqrt(det);
  return (S + sd * Eigen::Matrix2d::Identity()) / std::sqrt(tr + 2.0 * sd);
}

CompatibleMetric polar_compatible_metric(const AlmostCosymplecticStructure& s, const TensorField& k,
                                         const Tolerances& tol) {
  require_positive_definite(k);
  const Grid& grid = *s.grid();
  TensorField g(s.grid(), {Slot::down, Slot::down});
  // axis preference for tie-breaking: x, y, t
  constexpr int order[3] = {axis_x, axis_y, axis_t};
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Mat3 K = k.matrix(p);
    const Mat3 B = s.beta.matrix(p);
    const Vec3 a = s.alpha.vector(p);
    const Vec3 R = s.reeb.vector(p);
    const Mat3 Pi = Mat3::Identity() - R * a.transpose();

    int drop = order[0];
    for (int n = 1; n < 3; ++n)
      if (std::abs(a[order[n]]) > std::abs(a[drop])) drop = order[n];
    Vec3 keep[2];
    int m = 0;
    for (int n = 0; n < 3; ++n)
      if (order[n] != drop) keep[m++] = Pi.col(order[n]);

    auto knorm = [&](const Vec3& v) { return std::sqrt(v.dot(K * v)); };
    Eigen::Matrix<double, 3, 2> basis;
    basis.col(0) = keep[0] / knorm(keep[0]);
    Vec3 b2 = keep[1] - keep[1].dot(K * basis.col(0)) * basis.col(0);
    basis.col(1) = b2 / knorm(b2);

    const Eigen::Matrix2d Bm = basis.transpose() * B * basis;
    const Eigen::Matrix2d A = Bm.transpose();
    const Eigen::Matrix2d S = -A * A;
    if (!(S.determinant() > 1e-24))
      throw Error(ErrorCode::singular_operator, "beta is degenerate on ker alpha");
    const Eigen::Matrix2d absA = sqrt_spd_2x2(S);
    // Coefficients of Pi X in the k-orthonormal basis are basis^T K Pi X.
    const Eigen::Matrix<double, 2, 3> coef = basis.transpose() * K * Pi;
    const Mat3 G = a * a.transpose() + coef.transpose() * absA * coef;
    g.set_matrix(p, 0.5 * (G + G.transpose()));
  }
  return certify_compatible(s, g, tol);
}

}  // namespace cosym
