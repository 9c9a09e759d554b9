#include "cosym/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "cosym/variational.hpp"

namespace cosym {

namespace {

Eigen::Matrix2d to_matrix(const IntMat2& L) {
  Eigen::Matrix2d m;
  m << static_cast<double>(L[0]), static_cast<double>(L[1]), static_cast<double>(L[2]),
      static_cast<double>(L[3]);
  return m;
}

Mat3 seam_step(const Eigen::Matrix2d& L) {
  Mat3 D = Mat3::Identity();
  D.block<2, 2>(1, 1) = L;
  return D;
}

double wrap(double v) {
  v -= std::floor(v);
  return v >= 1.0 ? 0.0 : v;
}

void require_period(const Suspension& s) {
  if (!(s.tau > 0.0)) throw Error(ErrorCode::invalid_argument, "tau must be positive");
  if (s.L[0] * s.L[3] - s.L[1] * s.L[2] != 1)
    throw Error(ErrorCode::not_symplectic, "suspension needs det L = 1");
}

double g_dot(const Mat3& G, const Vec3& a, const Vec3& b) { return a.dot(G * b); }

}  // namespace

Vec3 reeb_flow(const Suspension& s, const Vec3& point, double time) {
  require_period(s);
  const double t = point[0] + time / s.tau;
  const long long n = static_cast<long long>(std::floor(t));
  const Eigen::Matrix2d L = to_matrix(s.L);
  const Eigen::Matrix2d Li = L.inverse();
  Eigen::Vector2d x(wrap(point[1]), wrap(point[2]));
  // one period at a time so the coordinates never grow
  for (long long c = 0; c < std::llabs(n); ++c) {
    x = (n > 0 ? L : Li) * x;
    x = Eigen::Vector2d(wrap(x[0]), wrap(x[1]));
  }
  return {t - static_cast<double>(n), x[0], x[1]};
}

Mat3 flow_differential(const Suspension& s, const Vec3& point, double time) {
  require_period(s);
  const long long n = static_cast<long long>(std::floor(point[0] + time / s.tau));
  const Eigen::Matrix2d step = n >= 0 ? to_matrix(s.L) : to_matrix(s.L).inverse();
  Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
  for (long long c = 0; c < std::llabs(n); ++c) P = step * P;
  return seam_step(P);
}

FlowCocycle flow_cocycle(const Suspension& s, const Vec3& point, const std::vector<double>& times) {
  FlowCocycle c;
  c.times = times;
  for (double t : times) c.steps.push_back({reeb_flow(s, point, t), flow_differential(s, point, t)});
  return c;
}

std::array<double, 3> lyapunov_exponents(const Suspension& s, const TensorField& g, int i, int j,
                                         double horizon, int warmup_periods) {
  require_period(s);
  const Grid& grid = *g.grid();
  if (!grid.periodic_fiber() || grid.monodromy() != s.L)
    throw Error(ErrorCode::monodromy_mismatch, "metric grid does not carry the suspension's monodromy");
  const long long periods = static_cast<long long>(std::floor(horizon / s.tau));
  if (periods < 1)
    throw Error(ErrorCode::horizon_too_short,
                "horizon " + std::to_string(horizon) + " is shorter than one period " + std::to_string(s.tau));
  if (warmup_periods < 0) throw Error(ErrorCode::invalid_argument, "warm-up must be non-negative");

  const Mat3 D = seam_step(to_matrix(s.L));
  auto factor = [&](int a, int b) -> Mat3 {
    Eigen::LLT<Mat3> llt(g.matrix(grid.index(a, b, 0)));
    if (llt.info() != Eigen::Success)
      throw Error(ErrorCode::not_positive_definite, "metric is not positive definite on the orbit");
    return llt.matrixU();
  };

  int a = i, b = j;
  for (int w = 0; w < warmup_periods; ++w) std::tie(a, b) = grid.backward(a, b);
  Mat3 Q = Mat3::Identity();
  Vec3 sum = Vec3::Zero();
  Mat3 C = factor(a, b);
  for (long long n = -warmup_periods; n < periods; ++n) {
    const auto [na, nb] = grid.forward(a, b);
    const Mat3 Cn = factor(na, nb);
    const Mat3 A = Cn * D * C.inverse();
    Eigen::HouseholderQR<Mat3> qr(A * Q);
    Q = qr.householderQ();
    const Mat3 R = qr.matrixQR().triangularView<Eigen::Upper>();
    // flip signs so that R has a positive diagonal
    for (int c = 0; c < 3; ++c)
      if (R(c, c) < 0) Q.col(c) = -Q.col(c);
    if (n >= 0)
      for (int c = 0; c < 3; ++c) sum[c] += std::log(std::abs(R(c, c)));
    a = na;
    b = nb;
    C = Cn;
  }
  std::array<double, 3> out{};
  for (int c = 0; c < 3; ++c) out[c] = sum[c] / (static_cast<double>(periods) * s.tau);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

SplittingFrame anosov_splitting(const CompatibleMetric& metric, const AlmostCosymplecticStructure& s,
                                double min_torsion) {
  const TensorField& g = metric.g();
  const ScalarField torsion = torsion_field(g, s);
  double tmin = std::numeric_limits<double>::infinity();
  for (double v : torsion.data()) tmin = std::min(tmin, v);
  if (!(tmin > min_torsion))
    throw Error(ErrorCode::not_hyperbolic_torsion,
                "torsion drops to " + std::to_string(tmin) + ", no hyperbolic splitting");

  const TensorField h = h_tensor(metric.phi(), s.reeb);
  const SymmetricEigen eig = symmetric_eigen(h, g);
  SplittingFrame f;
  f.u_plus = eig.vectors[0];
  f.u_minus = apply(metric.phi(), f.u_plus);
  f.mu_field = eig.values[0];
  f.mu = mean(f.mu_field);
  const GridPtr& grid = g.grid();
  auto unit = [&](const TensorField& a, const TensorField& b, double sign) {
    return make_vector_field(grid, Slot::up, [&](std::size_t p) {
      const Vec3 v = a.vector(p) + sign * b.vector(p);
      return Vec3(v / std::sqrt(g_dot(g.matrix(p), v, v)));
    });
  };
  f.e_plus = unit(f.u_plus, f.u_minus, 1.0);
  f.e_minus = unit(f.u_plus, f.u_minus, -1.0);

  const TensorField bp = lie_bracket(s.reeb, f.e_plus, Differencing::line_field);
  const TensorField bm = lie_bracket(s.reeb, f.e_minus, Differencing::line_field);
  double rp = 0.0, rm = 0.0;
  f.min_frame_determinant = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < grid->size(); ++p) {
    const Mat3 G = g.matrix(p);
    rp += g_dot(G, bp.vector(p), f.e_plus.vector(p));
    rm += g_dot(G, bm.vector(p), f.e_minus.vector(p));
    Mat3 F;
    F << s.reeb.vector(p), f.e_plus.vector(p), f.e_minus.vector(p);
    f.min_frame_determinant =
        std::min(f.min_frame_determinant, std::abs(F.determinant()) * std::sqrt(G.determinant()));
  }
  f.rate_plus = rp / static_cast<double>(grid->size());
  f.rate_minus = rm / static_cast<double>(grid->size());
  return f;
}

SplittingInvariance splitting_invariance(const SplittingFrame& frame, const TensorField& g,
                                         const Suspension& s, double max_time, double mu) {
  require_period(s);
  const Grid& grid = *g.grid();
  if (!grid.periodic_fiber() || grid.monodromy() != s.L)
    throw Error(ErrorCode::monodromy_mismatch, "metric grid does not carry the suspension's monodromy");
  const double dt = s.tau / grid.m();
  const int steps = static_cast<int>(std::llround(max_time / dt));
  const Mat3 D = seam_step(to_matrix(s.L));
  SplittingInvariance out;

  const Mat3 Di = D.inverse();
  // A contracting line is followed backwards in time, where it dominates and
  // roundoff along the other line decays instead of growing like |lambda|^{2t}.
  auto track = [&](const TensorField& e, double rate, double& angle, double& growth) {
    const int dir = rate > 0.0 ? -1 : 1;
    for (std::size_t p0 = 0; p0 < grid.size(); ++p0) {
      GridPoint q = grid.point(p0);
      Vec3 w = e.vector(p0);
      const double log0 = 0.5 * std::log(g_dot(g.matrix(p0), w, w));
      for (int n = 1; n <= steps; ++n) {
        q.k += dir;
        if (q.k == grid.m()) {
          q.k = 0;
          std::tie(q.i, q.j) = grid.forward(q.i, q.j);
          w = D * w;
        } else if (q.k < 0) {
          q.k = grid.m() - 1;
          std::tie(q.i, q.j) = grid.backward(q.i, q.j);
          w = Di * w;
        }
        const std::size_t p = grid.index(q);
        const Mat3 G = g.matrix(p);
        const Vec3 ep = e.vector(p);
        const Vec3 r = w - g_dot(G, w, ep) / g_dot(G, ep, ep) * ep;
        const double ww = g_dot(G, w, w);
        angle = std::max(angle, std::sqrt(std::max(0.0, g_dot(G, r, r) / ww)));
        growth = std::max(growth, std::abs(0.5 * std::log(ww) - log0 + rate * dir * n * dt));
      }
    }
  };
  const double m = mu > 0.0 ? mu : frame.mu;
  track(frame.e_plus, std::copysign(m, frame.rate_plus), out.max_angle_plus, out.growth_defect_plus);
  track(frame.e_minus, std::copysign(m, frame.rate_minus), out.max_angle_minus,
        out.growth_defect_minus);
  return out;
}

double BracketReport::max() const {
  return std::max({reeb_plus, reeb_minus, plus_minus, reeb_u_plus, reeb_u_minus});
}

BracketReport bracket_check(const TensorField& reeb, const TensorField& v_plus,
                            const TensorField& v_minus, double mu, const TensorField& g,
                            Differencing mode) {
  BracketReport r;
  r.reeb_plus = metric_sup_norm(lie_bracket(reeb, v_plus, mode) - mu * v_plus, g);
  r.reeb_minus = metric_sup_norm(lie_bracket(reeb, v_minus, mode) + mu * v_minus, g);
  r.plus_minus = metric_sup_norm(lie_bracket(v_plus, v_minus, mode), g);
  const TensorField u_plus = 0.5 * (v_plus + v_minus);
  const TensorField u_minus = 0.5 * (v_plus - v_minus);
  r.reeb_u_plus = metric_sup_norm(lie_bracket(reeb, u_plus, mode) - mu * u_minus, g);
  r.reeb_u_minus = metric_sup_norm(lie_bracket(reeb, u_minus, mode) - mu * u_plus, g);
  return r;
}

SolBracketReport sol_bracket_check(const SolModel& sol) {
  SolBracketReport r;
  r.y_plus = sup_norm(lie_bracket(sol.Y, sol.X_plus) - sol.X_plus);
  r.y_minus = sup_norm(lie_bracket(sol.Y, sol.X_minus) + sol.X_minus);
  r.plus_minus = sup_norm(lie_bracket(sol.X_plus, sol.X_minus));
  return r;
}

}  // namespace cosym
